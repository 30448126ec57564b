#include "ensc/time_grid.hpp"

#include <cmath>

#include "ensc/errors.hpp"

namespace ensc {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgumentError("time grid: horizon must be positive and finite");
    }
    if (n_steps < 2) {
        throw InvalidArgumentError("time grid: need at least 2 steps");
    }
    dt_ = horizon_ / static_cast<double>(n_steps_);
    const Eigen::Index nn = static_cast<Eigen::Index>(n_steps_ + 1);
    nodes_ = Eigen::VectorXd::LinSpaced(nn, 0.0, horizon_);
    nodes_[0] = 0.0;
    nodes_[nn - 1] = horizon_;
    weights_ = Eigen::VectorXd::Constant(nn, dt_);
    weights_[0] = 0.5 * dt_;
    weights_[nn - 1] = 0.5 * dt_;
}

TimeGrid make_time_grid(double horizon, std::size_t n_steps) {
    return TimeGrid(horizon, n_steps);
}

}  // namespace ensc
