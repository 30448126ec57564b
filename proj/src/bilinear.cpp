#include "ensc/bilinear.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ensc/errors.hpp"

namespace ensc {

BilinearEnsembleModel BilinearEnsembleModel::bloch(std::vector<double> omegas,
                                                   double horizon) {
    BilinearEnsembleModel m;
    m.is_bloch_ = true;
    m.n_ = 3;
    m.m_ = 2;
    m.horizon_ = horizon;
    m.params_ = std::move(omegas);
    if (m.params_.empty()) throw InvalidArgumentError("bloch: no parameter samples");
    if (!(horizon > 0.0)) throw InvalidArgumentError("bloch: horizon must be positive");
    return m;
}

BilinearEnsembleModel BilinearEnsembleModel::custom(std::size_t state_dim,
                                                    std::size_t input_dim,
                                                    std::vector<double> params,
                                                    double horizon, DriftFn drift,
                                                    std::vector<CouplingFn> couplings) {
    BilinearEnsembleModel m;
    m.n_ = state_dim;
    m.m_ = input_dim;
    m.horizon_ = horizon;
    m.params_ = std::move(params);
    m.drift_ = std::move(drift);
    m.couplings_ = std::move(couplings);
    if (m.params_.empty()) throw InvalidArgumentError("bilinear: no parameter samples");
    if (m.couplings_.size() != input_dim) {
        throw ShapeError("bilinear: one coupling matrix per input channel required");
    }
    return m;
}

Eigen::MatrixXd BilinearEnsembleModel::drift(std::size_t i) const {
    if (i >= params_.size()) throw InvalidArgumentError("bilinear drift: index out of range");
    if (is_bloch_) {
        Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
        a(0, 1) = -params_[i];
        a(1, 0) = params_[i];
        return a;
    }
    return drift_(params_[i]);
}

Eigen::MatrixXd BilinearEnsembleModel::coupling(std::size_t i, std::size_t j) const {
    if (i >= params_.size() || j >= m_) {
        throw InvalidArgumentError("bilinear coupling: index out of range");
    }
    if (is_bloch_) {
        Eigen::Matrix3d b = Eigen::Matrix3d::Zero();
        if (j == 0) {  // u enters dx/dt as +u z and dz/dt as -u x
            b(0, 2) = 1.0;
            b(2, 0) = -1.0;
        } else {  // v enters dy/dt as -v z and dz/dt as +v y
            b(1, 2) = -1.0;
            b(2, 1) = 1.0;
        }
        return b;
    }
    return couplings_[j](params_[i]);
}

Eigen::MatrixXd simulate_bilinear_sample(const BilinearEnsembleModel& model,
                                         std::size_t i, const ControlSignal& u,
                                         const Eigen::VectorXd& x0) {
    if (u.channels() != model.input_dim()) {
        throw ShapeError("simulate_bilinear: control channel count does not match model");
    }
    if (static_cast<std::size_t>(x0.size()) != model.state_dim()) {
        throw ShapeError("simulate_bilinear: initial state dimension mismatch");
    }
    const TimeGrid& grid = u.grid();
    const std::size_t nn = grid.n_nodes();
    const double h = grid.dt();
    const Eigen::MatrixXd drift = model.drift(i);
    std::vector<Eigen::MatrixXd> couplings;
    couplings.reserve(model.input_dim());
    for (std::size_t j = 0; j < model.input_dim(); ++j) {
        couplings.push_back(model.coupling(i, j));
    }

    auto rhs = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& uc) {
        Eigen::VectorXd dx = drift * x;
        for (std::size_t j = 0; j < couplings.size(); ++j) {
            dx += uc[static_cast<Eigen::Index>(j)] * (couplings[j] * x);
        }
        return dx;
    };

    Eigen::MatrixXd path(x0.size(), static_cast<Eigen::Index>(nn));
    path.col(0) = x0;
    Eigen::VectorXd x = x0;
    for (std::size_t k = 0; k + 1 < nn; ++k) {
        const Eigen::VectorXd u0 = u.samples().col(static_cast<Eigen::Index>(k));
        const Eigen::VectorXd u1 = u.samples().col(static_cast<Eigen::Index>(k + 1));
        const Eigen::VectorXd uh = 0.5 * (u0 + u1);
        const Eigen::VectorXd k1 = rhs(x, u0);
        const Eigen::VectorXd k2 = rhs(x + 0.5 * h * k1, uh);
        const Eigen::VectorXd k3 = rhs(x + 0.5 * h * k2, uh);
        const Eigen::VectorXd k4 = rhs(x + h * k3, u1);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw NumericalBlowupError("simulate_bilinear: state became non-finite at t=" +
                                       std::to_string(grid.node(k + 1)));
        }
        path.col(static_cast<Eigen::Index>(k + 1)) = x;
    }
    return path;
}

Trajectory simulate_bilinear(const BilinearEnsembleModel& model, const ControlSignal& u,
                             const BoundaryPair& boundary, Exec exec) {
    const std::size_t count = model.sample_count();
    Trajectory traj{u.grid(), std::vector<Eigen::MatrixXd>(count)};
    for_each_index(exec, count, [&](std::size_t i) {
        traj.states[i] = simulate_bilinear_sample(
            model, i, u, boundary.initial.col(static_cast<Eigen::Index>(i)));
    });
    return traj;
}

LinearEnsembleModel linearize_about(const BilinearEnsembleModel& model,
                                    const Trajectory& trajectory) {
    if (trajectory.states.size() != model.sample_count()) {
        throw ShapeError("linearize_about: trajectory sample count mismatch");
    }
    const std::size_t nn = trajectory.grid.n_nodes();
    const Eigen::Index n = static_cast<Eigen::Index>(model.state_dim());
    const Eigen::Index m = static_cast<Eigen::Index>(model.input_dim());

    std::vector<MatrixTable> b_tables;
    b_tables.reserve(model.sample_count());
    for (std::size_t i = 0; i < model.sample_count(); ++i) {
        const Eigen::MatrixXd& path = trajectory.states[i];
        if (static_cast<std::size_t>(path.cols()) != nn || path.rows() != n) {
            throw ShapeError("linearize_about: trajectory not defined on the full grid");
        }
        MatrixTable table{trajectory.grid, {}};
        table.values.reserve(nn);
        for (std::size_t k = 0; k < nn; ++k) {
            Eigen::MatrixXd bt(n, m);
            for (Eigen::Index j = 0; j < m; ++j) {
                bt.col(j) = model.coupling(i, static_cast<std::size_t>(j)) *
                            path.col(static_cast<Eigen::Index>(k));
            }
            table.values.push_back(std::move(bt));
        }
        b_tables.push_back(std::move(table));
    }

    if (model.is_bloch()) {
        return LinearEnsembleModel::bloch_linearized(model.parameters(), model.horizon(),
                                                     std::move(b_tables));
    }
    std::vector<MatrixTable> a_tables;
    a_tables.reserve(model.sample_count());
    for (std::size_t i = 0; i < model.sample_count(); ++i) {
        MatrixTable table{trajectory.grid, {}};
        table.values.assign(nn, model.drift(i));
        a_tables.push_back(std::move(table));
    }
    return LinearEnsembleModel::custom_tabulated(model.parameters(), model.horizon(),
                                                 std::move(a_tables), std::move(b_tables));
}

namespace {

double max_terminal_error(const Trajectory& traj, const BoundaryPair& boundary) {
    double err = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        err = std::max(err, (traj.terminal(i) -
                             boundary.target.col(static_cast<Eigen::Index>(i))).norm());
    }
    return err;
}

BilinearReport run_outer_loop(const BilinearEnsembleModel& model, const TimeGrid& grid,
                              const BoundaryPair& boundary, const SolverOptions& inner_opts,
                              const BilinearOptions& outer_opts, ControlSignal u_start) {
    Trajectory traj0 = simulate_bilinear(model, u_start, boundary, outer_opts.exec);
    BilinearReport report(std::move(u_start), std::move(traj0));
    ControlSignal& u = report.control;

    double err = max_terminal_error(report.trajectory, boundary);
    const double err0 = err;
    report.terminal_errors.push_back(err);
    report.control_norms.push_back(norm_l2(u));
    report.energies.push_back(inner_product(u, u));
    if (err < outer_opts.stop_tol) {
        report.converged = true;
        return report;
    }

    SolverOptions inner = inner_opts;
    inner.record_trace = false;
    inner.checkpoint_iters.clear();
    inner.exec = outer_opts.exec;

    for (std::size_t k = 1; k <= outer_opts.outer_cap; ++k) {
        const LinearEnsembleModel frozen = linearize_about(model, report.trajectory);
        SolveReport inner_report{u, Classification::iteration_cap};
        try {
            if (outer_opts.warm_start) {
                inner.initial_control = u;
                inner_report = solve_feasible(frozen, grid, boundary, inner);
            } else {
                inner_report = solve_min_energy(frozen, grid, boundary, inner);
            }
        } catch (const SingularGramianError& e) {
            throw SingularGramianError(
                e.sample_index(),
                std::string(e.what()) + " (outer iteration " + std::to_string(k) + ")");
        }

        if (outer_opts.damping < 1.0) {
            ControlSignal blended = inner_report.control;
            blended *= outer_opts.damping;
            blended.samples() += (1.0 - outer_opts.damping) * u.samples();
            u = std::move(blended);
        } else {
            u = std::move(inner_report.control);
        }

        report.trajectory = simulate_bilinear(model, u, boundary, outer_opts.exec);
        err = max_terminal_error(report.trajectory, boundary);
        report.outer_iterations = k;
        report.terminal_errors.push_back(err);
        report.control_norms.push_back(norm_l2(u));
        report.energies.push_back(inner_product(u, u));

        if (err < outer_opts.stop_tol) {
            report.converged = true;
            break;
        }
        if (err > outer_opts.divergence_guard * err0) {
            report.aborted_divergence = true;
            break;
        }
    }
    return report;
}

}  // namespace

BilinearReport solve_bilinear(const BilinearEnsembleModel& model, const TimeGrid& grid,
                              const BoundaryPair& boundary,
                              const SolverOptions& inner_opts,
                              const BilinearOptions& outer_opts) {
    if (grid.horizon() != model.horizon()) {
        throw ShapeError("solve_bilinear: grid horizon differs from model horizon");
    }
    ControlSignal u0 = outer_opts.initial_control
                           ? *outer_opts.initial_control
                           : ControlSignal::zero(grid, model.input_dim());
    if (u0.grid() != grid || u0.channels() != model.input_dim()) {
        throw ShapeError("solve_bilinear: initial control does not match grid/channels");
    }
    const bool zero_start = u0.samples().isZero(0.0);

    try {
        return run_outer_loop(model, grid, boundary, inner_opts, outer_opts, std::move(u0));
    } catch (const SingularGramianError&) {
        if (!zero_start || !(outer_opts.degenerate_start_amplitude > 0.0)) throw;
    }

    // Degenerate zero start: probe once with a constant first-channel
    // pulse to move the trajectory off the drift axis.
    ControlSignal seed = ControlSignal::zero(grid, model.input_dim());
    seed.samples().row(0).setConstant(outer_opts.degenerate_start_amplitude);
    BilinearReport report =
        run_outer_loop(model, grid, boundary, inner_opts, outer_opts, std::move(seed));
    report.degenerate_start_rescued = true;
    return report;
}

}  // namespace ensc
