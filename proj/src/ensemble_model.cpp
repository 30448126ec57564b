#include "ensc/ensemble_model.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>

#include "ensc/errors.hpp"

namespace ensc {

namespace {

Eigen::Matrix2d planar_rotation(double angle) {
    Eigen::Matrix2d r;
    const double c = std::cos(angle), s = std::sin(angle);
    r << c, -s, s, c;
    return r;
}

Eigen::Matrix3d z_rotation(double angle) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r.topLeftCorner<2, 2>() = planar_rotation(angle);
    return r;
}

}  // namespace

Eigen::MatrixXd MatrixTable::eval(double t) const {
    const auto& nodes = grid.nodes();
    if (t <= nodes[0]) return values.front();
    if (t >= nodes[nodes.size() - 1]) return values.back();
    const double pos = t / grid.dt();
    std::size_t k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(k);
    return (1.0 - frac) * values[k] + frac * values[k + 1];
}

std::vector<double> sample_parameters(double lo, double hi, std::size_t count) {
    if (!(lo < hi)) throw InvalidArgumentError("sample_parameters: need lo < hi");
    if (count < 1) throw InvalidArgumentError("sample_parameters: need count >= 1");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = 0.5 * (lo + hi);
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.front() = lo;
    out.back() = hi;
    return out;
}

void LinearEnsembleModel::validate() const {
    if (params_.empty()) throw InvalidArgumentError("ensemble model: no parameter samples");
    if (!(horizon_ > 0.0)) throw InvalidArgumentError("ensemble model: horizon must be positive");
    for (std::size_t i = 0; i + 1 < params_.size(); ++i) {
        for (std::size_t j = i + 1; j < params_.size(); ++j) {
            if (params_[i] == params_[j]) {
                throw InvalidArgumentError("ensemble model: parameter samples must be distinct");
            }
        }
    }
}

LinearEnsembleModel LinearEnsembleModel::harmonic_oscillator_2in(
    std::vector<double> omegas, double horizon) {
    LinearEnsembleModel m;
    m.family_ = BuiltinFamily::harmonic_oscillator_2in;
    m.n_ = 2;
    m.m_ = 2;
    m.horizon_ = horizon;
    m.params_ = std::move(omegas);
    m.validate();
    return m;
}

LinearEnsembleModel LinearEnsembleModel::harmonic_oscillator_1in(
    std::vector<double> omegas, double horizon) {
    LinearEnsembleModel m;
    m.family_ = BuiltinFamily::harmonic_oscillator_1in;
    m.n_ = 2;
    m.m_ = 1;
    m.horizon_ = horizon;
    m.params_ = std::move(omegas);
    m.validate();
    return m;
}

LinearEnsembleModel LinearEnsembleModel::bloch_linearized(
    std::vector<double> omegas, double horizon, std::vector<MatrixTable> b_tables) {
    LinearEnsembleModel m;
    m.family_ = BuiltinFamily::bloch_linearized;
    m.n_ = 3;
    m.m_ = 2;
    m.horizon_ = horizon;
    m.params_ = std::move(omegas);
    if (b_tables.size() != m.params_.size()) {
        throw ShapeError("bloch_linearized: one input table per sample required");
    }
    m.b_tables_ = std::move(b_tables);
    m.validate();
    return m;
}

LinearEnsembleModel LinearEnsembleModel::custom(std::size_t state_dim,
                                                std::size_t input_dim,
                                                std::vector<double> params,
                                                double horizon, MatrixFn a,
                                                MatrixFn b, bool a_time_invariant) {
    LinearEnsembleModel m;
    m.family_ = BuiltinFamily::custom_tabulated;
    m.n_ = state_dim;
    m.m_ = input_dim;
    m.horizon_ = horizon;
    m.params_ = std::move(params);
    m.a_fn_ = std::move(a);
    m.b_fn_ = std::move(b);
    m.a_time_invariant_ = a_time_invariant;
    m.validate();
    return m;
}

LinearEnsembleModel LinearEnsembleModel::custom_tabulated(
    std::vector<double> params, double horizon, std::vector<MatrixTable> a_tables,
    std::vector<MatrixTable> b_tables) {
    LinearEnsembleModel m;
    m.family_ = BuiltinFamily::custom_tabulated;
    m.horizon_ = horizon;
    m.params_ = std::move(params);
    if (b_tables.empty()) throw InvalidArgumentError("custom_tabulated: input table required");
    if (a_tables.empty()) throw InvalidArgumentError("custom_tabulated: drift table required");
    m.a_tables_ = std::move(a_tables);
    m.b_tables_ = std::move(b_tables);
    m.n_ = static_cast<std::size_t>(m.a_tables_.front().values.front().rows());
    m.m_ = static_cast<std::size_t>(m.b_tables_.front().values.front().cols());
    m.validate();
    return m;
}

Eigen::MatrixXd LinearEnsembleModel::system_matrix(std::size_t i, double t) const {
    if (i >= params_.size()) throw InvalidArgumentError("system_matrix: sample index out of range");
    const double beta = params_[i];
    switch (family_) {
        case BuiltinFamily::harmonic_oscillator_2in:
        case BuiltinFamily::harmonic_oscillator_1in: {
            Eigen::Matrix2d a;
            a << 0.0, -beta, beta, 0.0;
            return a;
        }
        case BuiltinFamily::bloch_linearized: {
            Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
            a(0, 1) = -beta;
            a(1, 0) = beta;
            return a;
        }
        case BuiltinFamily::custom_tabulated:
            if (a_fn_) return a_fn_(t, beta);
            return a_tables_.size() == 1 ? a_tables_[0].eval(t) : a_tables_[i].eval(t);
    }
    throw Error("system_matrix: unknown family");
}

Eigen::MatrixXd LinearEnsembleModel::input_matrix(std::size_t i, double t) const {
    if (i >= params_.size()) throw InvalidArgumentError("input_matrix: sample index out of range");
    switch (family_) {
        case BuiltinFamily::harmonic_oscillator_2in:
            return Eigen::Matrix2d::Identity();
        case BuiltinFamily::harmonic_oscillator_1in: {
            Eigen::MatrixXd b(2, 1);
            b << 1.0, 0.0;
            return b;
        }
        case BuiltinFamily::bloch_linearized:
            return b_tables_[i].eval(t);
        case BuiltinFamily::custom_tabulated:
            if (b_fn_) return b_fn_(t, params_[i]);
            return b_tables_.size() == 1 ? b_tables_[0].eval(t) : b_tables_[i].eval(t);
    }
    throw Error("input_matrix: unknown family");
}

Eigen::MatrixXd LinearEnsembleModel::step_transition(std::size_t i, double t1,
                                                     double t0) const {
    // Midpoint-frozen exponential over one short interval.
    const Eigen::MatrixXd a = system_matrix(i, 0.5 * (t0 + t1));
    return ((t1 - t0) * a).exp();
}

Eigen::MatrixXd LinearEnsembleModel::transition(std::size_t i, double t,
                                                double s) const {
    if (i >= params_.size()) throw InvalidArgumentError("transition: sample index out of range");
    if (t < s) throw InvalidArgumentError("transition: requires t >= s");
    const double beta = params_[i];
    switch (family_) {
        case BuiltinFamily::harmonic_oscillator_2in:
        case BuiltinFamily::harmonic_oscillator_1in:
            return planar_rotation(beta * (t - s));
        case BuiltinFamily::bloch_linearized:
            return z_rotation(beta * (t - s));
        case BuiltinFamily::custom_tabulated: {
            if (t == s) return Eigen::MatrixXd::Identity(n_, n_);
            if (a_fn_ && a_time_invariant_) {
                return ((t - s) * a_fn_(0.0, beta)).exp();
            }
            // Chain per-step exponentials at the table resolution (or a
            // default one for analytic time-varying drift).
            double dt = horizon_ / 1000.0;
            if (!a_tables_.empty()) dt = a_tables_.front().grid.dt();
            const std::size_t steps =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t - s) / dt - 1e-12)));
            const double h = (t - s) / static_cast<double>(steps);
            Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n_, n_);
            for (std::size_t k = 0; k < steps; ++k) {
                const double t0 = s + h * static_cast<double>(k);
                phi = step_transition(i, t0 + h, t0) * phi;
            }
            return phi;
        }
    }
    throw Error("transition: unknown family");
}

std::vector<Eigen::MatrixXd> LinearEnsembleModel::transition_to_horizon(
    std::size_t i, const TimeGrid& grid) const {
    if (i >= params_.size()) {
        throw InvalidArgumentError("transition_to_horizon: sample index out of range");
    }
    const std::size_t nn = grid.n_nodes();
    std::vector<Eigen::MatrixXd> phi(nn);
    const double beta = params_[i];
    switch (family_) {
        case BuiltinFamily::harmonic_oscillator_2in:
        case BuiltinFamily::harmonic_oscillator_1in:
            for (std::size_t k = 0; k < nn; ++k) {
                phi[k] = planar_rotation(beta * (grid.horizon() - grid.node(k)));
            }
            return phi;
        case BuiltinFamily::bloch_linearized:
            for (std::size_t k = 0; k < nn; ++k) {
                phi[k] = z_rotation(beta * (grid.horizon() - grid.node(k)));
            }
            return phi;
        case BuiltinFamily::custom_tabulated: {
            phi[nn - 1] = Eigen::MatrixXd::Identity(n_, n_);
            if (a_fn_ && a_time_invariant_) {
                const Eigen::MatrixXd step = (grid.dt() * a_fn_(0.0, beta)).exp();
                for (std::size_t k = nn - 1; k-- > 0;) phi[k] = phi[k + 1] * step;
            } else {
                for (std::size_t k = nn - 1; k-- > 0;) {
                    phi[k] = phi[k + 1] * step_transition(i, grid.node(k + 1), grid.node(k));
                }
            }
            return phi;
        }
    }
    throw Error("transition_to_horizon: unknown family");
}

Eigen::MatrixXd transition_matrix(const LinearEnsembleModel& model, double t,
                                  double s, double beta) {
    if (t < s) throw InvalidArgumentError("transition_matrix: requires t >= s");
    const auto& params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] == beta) return model.transition(i, t, s);
    }
    throw InvalidArgumentError("transition_matrix: beta is not one of the model samples");
}

BoundaryPair BoundaryPair::identical(const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& xf, std::size_t count) {
    if (x0.size() != xf.size()) {
        throw ShapeError("boundary: initial and target dimensions differ");
    }
    BoundaryPair b;
    b.initial = x0.replicate(1, static_cast<Eigen::Index>(count));
    b.target = xf.replicate(1, static_cast<Eigen::Index>(count));
    return b;
}

Eigen::VectorXd target_vector(const LinearEnsembleModel& model, std::size_t i,
                              const BoundaryPair& boundary) {
    if (i >= model.sample_count()) {
        throw InvalidArgumentError("target_vector: sample index out of range");
    }
    if (static_cast<std::size_t>(boundary.initial.rows()) != model.state_dim() ||
        static_cast<std::size_t>(boundary.target.rows()) != model.state_dim()) {
        throw ShapeError("target_vector: boundary dimension does not match state");
    }
    const Eigen::Index col = static_cast<Eigen::Index>(i);
    return boundary.target.col(col) -
           model.transition(i, model.horizon(), 0.0) * boundary.initial.col(col);
}

Eigen::MatrixXd simulate_linear_sample(const LinearEnsembleModel& model,
                                       std::size_t i, const ControlSignal& u,
                                       const Eigen::VectorXd& x0) {
    if (u.channels() != model.input_dim()) {
        throw ShapeError("simulate_linear: control channel count does not match model");
    }
    if (static_cast<std::size_t>(x0.size()) != model.state_dim()) {
        throw ShapeError("simulate_linear: initial state dimension mismatch");
    }
    const TimeGrid& grid = u.grid();
    const std::size_t nn = grid.n_nodes();
    const double h = grid.dt();
    Eigen::MatrixXd path(x0.size(), static_cast<Eigen::Index>(nn));
    path.col(0) = x0;

    auto rhs = [&](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& uc) {
        return (model.system_matrix(i, t) * x + model.input_matrix(i, t) * uc).eval();
    };

    Eigen::VectorXd x = x0;
    for (std::size_t k = 0; k + 1 < nn; ++k) {
        const double t = grid.node(k);
        const Eigen::VectorXd u0 = u.samples().col(static_cast<Eigen::Index>(k));
        const Eigen::VectorXd u1 = u.samples().col(static_cast<Eigen::Index>(k + 1));
        const Eigen::VectorXd uh = 0.5 * (u0 + u1);

        const Eigen::VectorXd k1 = rhs(t, x, u0);
        const Eigen::VectorXd k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1, uh);
        const Eigen::VectorXd k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2, uh);
        const Eigen::VectorXd k4 = rhs(t + h, x + h * k3, u1);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw NumericalBlowupError("simulate_linear: state became non-finite at t=" +
                                       std::to_string(t + h));
        }
        path.col(static_cast<Eigen::Index>(k + 1)) = x;
    }
    return path;
}

Trajectory simulate_linear(const LinearEnsembleModel& model, const ControlSignal& u,
                           const BoundaryPair& boundary, Exec exec) {
    const std::size_t count = model.sample_count();
    Trajectory traj{u.grid(), std::vector<Eigen::MatrixXd>(count)};
    for_each_index(exec, count, [&](std::size_t i) {
        traj.states[i] = simulate_linear_sample(model, i, u,
                                                boundary.initial.col(static_cast<Eigen::Index>(i)));
    });
    return traj;
}

}  // namespace ensc
