#include "ensc/reference.hpp"

#include "ensc/errors.hpp"

namespace ensc::reference {

ControlSignal weighted_step(const ControlSignal& u,
                            const std::vector<ConstraintSet>& sets,
                            const std::vector<double>& weights) {
    if (sets.empty() || sets.size() != weights.size()) {
        throw InvalidArgumentError("reference weighted_step: set/weight mismatch");
    }
    ControlSignal out = project(sets[0], u);
    out *= weights[0];
    for (std::size_t j = 1; j < sets.size(); ++j) {
        ControlSignal p = project(sets[j], u);
        p *= weights[j];
        out += p;
    }
    return out;
}

Eigen::MatrixXd gramian(const SteeringOperator& op) {
    const std::size_t n = op.state_dim();
    const std::size_t m = op.input_dim();
    const TimeGrid& grid = op.grid();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
        const auto block = op.kernel().middleCols(static_cast<Eigen::Index>(k * m),
                                                  static_cast<Eigen::Index>(m));
        w += grid.quad_weights()[static_cast<Eigen::Index>(k)] * block * block.transpose();
    }
    return 0.5 * (w + w.transpose()).eval();
}

Eigen::VectorXd apply(const SteeringOperator& op, const ControlSignal& u) {
    const std::size_t m = op.input_dim();
    const TimeGrid& grid = op.grid();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.state_dim()));
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
        const auto block = op.kernel().middleCols(static_cast<Eigen::Index>(k * m),
                                                  static_cast<Eigen::Index>(m));
        out += grid.quad_weights()[static_cast<Eigen::Index>(k)] *
               (block * u.samples().col(static_cast<Eigen::Index>(k)));
    }
    return out;
}

Trajectory simulate_linear(const LinearEnsembleModel& model, const ControlSignal& u,
                           const BoundaryPair& boundary) {
    Trajectory traj{u.grid(), {}};
    traj.states.reserve(model.sample_count());
    for (std::size_t i = 0; i < model.sample_count(); ++i) {
        traj.states.push_back(simulate_linear_sample(
            model, i, u, boundary.initial.col(static_cast<Eigen::Index>(i))));
    }
    return traj;
}

}  // namespace ensc::reference
