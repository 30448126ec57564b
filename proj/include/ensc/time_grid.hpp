#ifndef ENSC_TIME_GRID_HPP
#define ENSC_TIME_GRID_HPP

#include <Eigen/Core>
#include <cstddef>

namespace ensc {

/// Uniform grid on [0, T]. Carries the composite-trapezoid quadrature
/// weights used for every integral in the library, so grid-sampled signals
/// and operators all share one inner product.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t n_steps);

    double horizon() const { return horizon_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_nodes() const { return n_steps_ + 1; }
    double dt() const { return dt_; }

    double node(std::size_t k) const { return nodes_[static_cast<Eigen::Index>(k)]; }
    const Eigen::VectorXd& nodes() const { return nodes_; }

    /// Trapezoid weights: dt/2 at the endpoints, dt inside.
    const Eigen::VectorXd& quad_weights() const { return weights_; }

    bool operator==(const TimeGrid& other) const {
        return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
    }
    bool operator!=(const TimeGrid& other) const { return !(*this == other); }

private:
    double horizon_;
    std::size_t n_steps_;
    double dt_;
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
};

/// Builds a uniform grid. Throws InvalidArgumentError for T <= 0 or
/// n_steps < 2.
TimeGrid make_time_grid(double horizon, std::size_t n_steps);

}  // namespace ensc

#endif
