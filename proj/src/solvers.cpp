#include "ensc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ensc/errors.hpp"
#include "ensc/legendre_basis.hpp"
#include "ensc/spectral.hpp"

namespace ensc {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::converged_feasible: return "converged_feasible";
        case Classification::converged_infeasible: return "converged_infeasible";
        case Classification::diverged: return "diverged";
        case Classification::stalled: return "stalled";
        case Classification::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

const char* to_string(ReachVerdict v) {
    switch (v) {
        case ReachVerdict::reachable: return "reachable";
        case ReachVerdict::not_reachable: return "not_reachable";
        case ReachVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace detail {

void validate_weights(const std::vector<double>& weights, std::size_t count) {
    if (weights.size() != count) {
        throw InvalidArgumentError("weights: expected " + std::to_string(count) +
                                   " entries, got " + std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || w > 1.0) {
            throw InvalidArgumentError("weights: every weight must lie in (0, 1]");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidArgumentError("weights: must sum to 1, got " + std::to_string(sum));
    }
}

std::vector<double> uniform_weights(std::size_t count) {
    return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

WeightedStepOutcome weighted_step_detailed(const ControlSignal& u,
                                           const std::vector<ConstraintSet>& sets,
                                           const std::vector<double>& weights,
                                           Exec exec) {
    const std::size_t count = sets.size();
    if (count == 0) throw InvalidArgumentError("weighted step: no constraint sets");

    std::vector<std::optional<ControlSignal>> slots(count);
    Eigen::VectorXd residuals =
        Eigen::VectorXd::Constant(static_cast<Eigen::Index>(count),
                                  std::numeric_limits<double>::quiet_NaN());
    for_each_index(exec, count, [&](std::size_t j) {
        if (const auto* affine = std::get_if<AffineSteeringSet>(&sets[j])) {
            double res = 0.0;
            slots[j].emplace(affine->project(u, &res));
            residuals[static_cast<Eigen::Index>(j)] = res;
        } else {
            slots[j].emplace(project(sets[j], u));
        }
    });

    // Reduce in index order so the result is independent of thread count.
    ControlSignal next = std::move(*slots[0]);
    next *= weights[0];
    for (std::size_t j = 1; j < count; ++j) {
        next.samples() += weights[j] * slots[j]->samples();
    }
    return WeightedStepOutcome{std::move(next), std::move(residuals)};
}

std::vector<ConstraintSet> affine_sets(const LinearEnsembleModel& model,
                                       const TimeGrid& grid,
                                       const BoundaryPair& boundary, Exec exec) {
    std::vector<SteeringOperator> ops = steering_operators(model, grid, exec);
    std::vector<ConstraintSet> sets;
    sets.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        Eigen::VectorXd xi = target_vector(model, i, boundary);
        sets.emplace_back(AffineSteeringSet(std::move(ops[i]), std::move(xi)));
    }
    return sets;
}

namespace {

double max_affine_residual(const Eigen::VectorXd& residuals) {
    double m = 0.0;
    bool any = false;
    for (Eigen::Index i = 0; i < residuals.size(); ++i) {
        if (!std::isnan(residuals[i])) {
            m = any ? std::max(m, residuals[i]) : residuals[i];
            any = true;
        }
    }
    return any ? m : 0.0;
}

Eigen::VectorXd affine_only(const Eigen::VectorXd& residuals) {
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < residuals.size(); ++i) {
        if (!std::isnan(residuals[i])) vals.push_back(residuals[i]);
    }
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

double target_scale(const std::vector<ConstraintSet>& sets) {
    double scale = 0.0;
    for (const auto& set : sets) {
        if (const auto* affine = std::get_if<AffineSteeringSet>(&set)) {
            scale = std::max(scale, affine->xi().norm());
        }
    }
    return scale;
}

std::vector<double> gramian_conditions(const std::vector<ConstraintSet>& sets) {
    std::vector<double> conds;
    for (const auto& set : sets) {
        if (const auto* affine = std::get_if<AffineSteeringSet>(&set)) {
            conds.push_back(affine->gram().condition);
        }
    }
    return conds;
}

Eigen::VectorXd residuals_at(const std::vector<ConstraintSet>& sets,
                             const ControlSignal& u) {
    std::vector<double> vals;
    for (const auto& set : sets) {
        if (const auto* affine = std::get_if<AffineSteeringSet>(&set)) {
            vals.push_back(affine->residual(u));
        }
    }
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

/// Shared driver for the weighted-projection solvers.
SolveReport iterate_weighted(const std::vector<ConstraintSet>& sets,
                             const std::vector<double>& weights, ControlSignal u0,
                             const SolverOptions& opts) {
    const double xi_scale = target_scale(sets);
    const double res_threshold = opts.residual_tol * (1.0 + xi_scale);
    const double div_bound = opts.divergence_factor * (1.0 + norm_l2(u0));

    std::vector<std::size_t> checkpoints = opts.checkpoint_iters;
    std::sort(checkpoints.begin(), checkpoints.end());

    SolveReport report{std::move(u0), Classification::iteration_cap};
    report.gramian_conditions = gramian_conditions(sets);

    ControlSignal& u = report.control;
    double prev_step = 0.0;
    std::size_t tiny_step_count = 0;
    std::size_t frozen_step_count = 0;
    double min_step_seen = std::numeric_limits<double>::infinity();
    std::size_t next_checkpoint = 0;

    for (std::size_t k = 0;; ++k) {
        detail::WeightedStepOutcome outcome =
            detail::weighted_step_detailed(u, sets, weights, opts.exec);
        const double res = max_affine_residual(outcome.residuals);
        const double u_norm = norm_l2(u);

        std::optional<Classification> verdict;
        if (res <= res_threshold) {
            verdict = Classification::converged_feasible;
        } else if (!(u_norm < div_bound) || !std::isfinite(u_norm)) {
            verdict = Classification::diverged;
        } else if (k >= 1) {
            // The averaged projection map is non-expansive, so step sizes
            // shrink monotonically. A vanishing step means the iterates
            // settled at a point that is still infeasible; a positive step
            // that stops shrinking means the iteration cycles in place.
            const bool tiny = prev_step <= opts.stall_threshold * (1.0 + u_norm);
            tiny_step_count = tiny ? tiny_step_count + 1 : 0;
            if (!tiny && prev_step >= min_step_seen * (1.0 - opts.stall_threshold)) {
                ++frozen_step_count;
            } else if (!tiny) {
                frozen_step_count = 0;
            }
            min_step_seen = std::min(min_step_seen, prev_step);
            if (tiny_step_count >= opts.stall_window) {
                verdict = Classification::converged_infeasible;
            } else if (frozen_step_count >= opts.stall_window) {
                verdict = Classification::stalled;
            }
        }
        if (!verdict && k >= opts.max_iterations) {
            verdict = Classification::iteration_cap;
        }

        if (opts.record_trace && (k % opts.trace_every == 0 || verdict)) {
            report.trace.push_back({k, u_norm, res, prev_step});
        }
        while (next_checkpoint < checkpoints.size() &&
               (verdict || checkpoints[next_checkpoint] <= k)) {
            report.checkpoints.emplace_back(checkpoints[next_checkpoint], u);
            ++next_checkpoint;
        }

        report.iterations = k;
        report.residuals = affine_only(outcome.residuals);
        report.max_residual = res;
        if (verdict) {
            report.classification = *verdict;
            break;
        }
        prev_step = norm_l2(outcome.next - u);
        u = std::move(outcome.next);
    }
    report.energy = inner_product(u, u);
    return report;
}

ControlSignal initial_or_zero(const SolverOptions& opts, const TimeGrid& grid,
                              std::size_t channels) {
    if (opts.initial_control) {
        const ControlSignal& u0 = *opts.initial_control;
        if (u0.grid() != grid || u0.channels() != channels) {
            throw ShapeError("solver: initial control does not match grid/channels");
        }
        return u0;
    }
    return ControlSignal::zero(grid, channels);
}

}  // namespace
}  // namespace detail

ControlSignal weighted_projection_step(const ControlSignal& u,
                                       const std::vector<ConstraintSet>& sets,
                                       const std::vector<double>& weights, Exec exec) {
    detail::validate_weights(weights, sets.size());
    return detail::weighted_step_detailed(u, sets, weights, exec).next;
}

SolveReport solve_feasible(const LinearEnsembleModel& model, const TimeGrid& grid,
                           const BoundaryPair& boundary, const SolverOptions& opts) {
    std::vector<ConstraintSet> sets = detail::affine_sets(model, grid, boundary, opts.exec);
    std::vector<double> weights =
        opts.weights.empty() ? detail::uniform_weights(sets.size()) : opts.weights;
    detail::validate_weights(weights, sets.size());
    ControlSignal u0 = detail::initial_or_zero(opts, grid, model.input_dim());
    return detail::iterate_weighted(sets, weights, std::move(u0), opts);
}

SolveReport solve_min_energy(const LinearEnsembleModel& model, const TimeGrid& grid,
                             const BoundaryPair& boundary, const SolverOptions& opts) {
    SolverOptions zeroed = opts;
    zeroed.initial_control.reset();  // the origin is the required start
    return solve_feasible(model, grid, boundary, zeroed);
}

SolveReport solve_constrained(const LinearEnsembleModel& model, const TimeGrid& grid,
                              const BoundaryPair& boundary, const ConstraintSet& constraint,
                              const SolverOptions& opts) {
    if (std::holds_alternative<AffineSteeringSet>(constraint)) {
        throw InvalidArgumentError(
            "solve_constrained: the input constraint must be a ball or box");
    }
    std::vector<ConstraintSet> sets;
    sets.push_back(constraint);
    for (auto& set : detail::affine_sets(model, grid, boundary, opts.exec)) {
        sets.push_back(std::move(set));
    }
    std::vector<double> weights =
        opts.weights.empty() ? detail::uniform_weights(sets.size()) : opts.weights;
    detail::validate_weights(weights, sets.size());
    ControlSignal u0 = detail::initial_or_zero(opts, grid, model.input_dim());

    SolveReport report = detail::iterate_weighted(sets, weights, std::move(u0), opts);

    // Weak convergence only guarantees the terminal state; enforce the
    // constraint exactly on the returned control.
    report.control = project(constraint, report.control);
    report.residuals = detail::residuals_at(sets, report.control);
    report.max_residual =
        report.residuals.size() > 0 ? report.residuals.maxCoeff() : 0.0;
    report.energy = inner_product(report.control, report.control);
    return report;
}

SolveReport solve_dykstra(const std::vector<ConstraintSet>& sets,
                          const ControlSignal& u0, const SolverOptions& opts) {
    if (sets.empty()) throw InvalidArgumentError("dykstra: no constraint sets");
    const bool all_affine = std::all_of(sets.begin(), sets.end(), [](const auto& s) {
        return std::holds_alternative<AffineSteeringSet>(s);
    });
    const double xi_scale = detail::target_scale(sets);
    const double res_threshold = opts.residual_tol * (1.0 + xi_scale);

    SolveReport report{u0, Classification::iteration_cap};
    report.gramian_conditions = detail::gramian_conditions(sets);
    ControlSignal& u = report.control;

    // Correction offsets, one per set; kept at zero for affine families.
    std::vector<ControlSignal> offsets(sets.size(),
                                       ControlSignal::zero(u0.grid(), u0.channels()));
    double prev_step = 0.0;
    for (std::size_t cycle = 1;; ++cycle) {
        ControlSignal cycle_start = u;
        for (std::size_t j = 0; j < sets.size(); ++j) {
            if (all_affine) {
                u = project(sets[j], u);
            } else {
                ControlSignal shifted = u - offsets[j];
                ControlSignal projected = project(sets[j], shifted);
                offsets[j] = projected - shifted;
                u = std::move(projected);
            }
        }
        prev_step = norm_l2(u - cycle_start);
        const double u_norm = norm_l2(u);
        const bool settled = prev_step <= opts.stall_threshold * (1.0 + u_norm);
        const bool done = settled || cycle >= opts.max_iterations;
        if (opts.record_trace && (cycle % opts.trace_every == 0 || done)) {
            Eigen::VectorXd res_vec = detail::residuals_at(sets, u);
            report.trace.push_back(
                {cycle, u_norm, res_vec.size() > 0 ? res_vec.maxCoeff() : 0.0, prev_step});
        }
        report.iterations = cycle;
        if (done) {
            if (settled) {
                bool feasible = true;
                for (const auto& set : sets) {
                    if (!contains(set, u, res_threshold)) feasible = false;
                }
                report.classification = feasible ? Classification::converged_feasible
                                                 : Classification::converged_infeasible;
            } else {
                report.classification = Classification::iteration_cap;
            }
            break;
        }
    }
    report.residuals = detail::residuals_at(sets, u);
    report.max_residual = report.residuals.size() > 0 ? report.residuals.maxCoeff() : 0.0;
    report.energy = inner_product(u, u);
    return report;
}

ReachabilityReport assess_reachability(const LinearEnsembleModel& model,
                                       const TimeGrid& grid,
                                       const BoundaryPair& boundary,
                                       const ReachabilityOptions& opts) {
    if (opts.route == ReachRoute::spectral) {
        std::vector<SteeringOperator> ops =
            steering_operators(model, grid, opts.solver.exec);
        std::vector<Eigen::VectorXd> xis;
        xis.reserve(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) {
            xis.push_back(target_vector(model, i, boundary));
        }
        BasisSet basis = legendre_basis(opts.basis_order, grid);
        std::vector<double> weights = opts.solver.weights.empty()
                                          ? detail::uniform_weights(ops.size())
                                          : opts.solver.weights;
        detail::validate_weights(weights, ops.size());
        SpectralOperator sop =
            build_spectral_from_ops(ops, xis, basis, weights, opts.solver.exec);
        Coordinates mu0{Eigen::VectorXd::Zero(sop.w.rows()), basis.order(),
                        model.input_dim()};
        if (opts.solver.initial_control) {
            mu0 = to_coordinates(*opts.solver.initial_control, basis);
        }
        ControlSignal u_star = solve_spectral(sop, mu0);

        Eigen::VectorXd residuals(static_cast<Eigen::Index>(ops.size()));
        for (std::size_t i = 0; i < ops.size(); ++i) {
            residuals[static_cast<Eigen::Index>(i)] = (ops[i].apply(u_star) - xis[i]).norm();
        }
        const double max_res = residuals.size() > 0 ? residuals.maxCoeff() : 0.0;

        SolveReport evidence{u_star, max_res <= opts.reach_tol
                                         ? Classification::converged_feasible
                                         : Classification::converged_infeasible};
        evidence.residuals = residuals;
        evidence.max_residual = max_res;
        evidence.energy = inner_product(u_star, u_star);

        ReachVerdict verdict = max_res <= opts.reach_tol ? ReachVerdict::reachable
                                                         : ReachVerdict::not_reachable;
        return ReachabilityReport{verdict, std::move(residuals), std::move(evidence)};
    }

    SolveReport solve = solve_feasible(model, grid, boundary, opts.solver);
    ReachVerdict verdict;
    if (solve.max_residual <= opts.reach_tol) {
        verdict = ReachVerdict::reachable;
    } else if (solve.classification == Classification::iteration_cap) {
        verdict = ReachVerdict::inconclusive;
    } else {
        verdict = ReachVerdict::not_reachable;
    }
    Eigen::VectorXd residuals = solve.residuals;
    return ReachabilityReport{verdict, std::move(residuals), std::move(solve)};
}

}  // namespace ensc
