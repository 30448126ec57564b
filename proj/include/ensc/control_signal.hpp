#ifndef ENSC_CONTROL_SIGNAL_HPP
#define ENSC_CONTROL_SIGNAL_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>

#include "ensc/time_grid.hpp"

namespace ensc {

/// Vector-valued control on [0, T], sampled on a uniform grid. Column k of
/// the sample matrix holds u(t_k), one row per channel. Values between
/// nodes are understood as the piecewise-linear interpolant, which matches
/// the trapezoid quadrature order used everywhere else.
class ControlSignal {
public:
    ControlSignal(TimeGrid grid, std::size_t channels);
    ControlSignal(TimeGrid grid, Eigen::MatrixXd samples);

    static ControlSignal zero(const TimeGrid& grid, std::size_t channels);
    static ControlSignal constant(const TimeGrid& grid, const Eigen::VectorXd& value);
    /// Samples f(t) -> m-vector at every grid node.
    static ControlSignal from_function(
        const TimeGrid& grid, std::size_t channels,
        const std::function<Eigen::VectorXd(double)>& f);

    const TimeGrid& grid() const { return grid_; }
    std::size_t channels() const { return m_; }

    const Eigen::MatrixXd& samples() const { return samples_; }
    Eigen::MatrixXd& samples() { return samples_; }

    /// u(t) by linear interpolation between the surrounding nodes.
    Eigen::VectorXd at(double t) const;

    bool all_finite() const { return samples_.allFinite(); }

    ControlSignal& operator+=(const ControlSignal& rhs);
    ControlSignal& operator-=(const ControlSignal& rhs);
    ControlSignal& operator*=(double scale);

private:
    TimeGrid grid_;
    std::size_t m_;
    Eigen::MatrixXd samples_;  // m x n_nodes
};

ControlSignal operator+(ControlSignal lhs, const ControlSignal& rhs);
ControlSignal operator-(ControlSignal lhs, const ControlSignal& rhs);
ControlSignal operator*(double scale, ControlSignal rhs);

/// Quadrature approximation of the L2 pairing between u and v.
/// Throws ShapeError on grid or channel mismatch.
double inner_product(const ControlSignal& u, const ControlSignal& v);

/// L2 norm, sqrt(inner_product(u, u)).
double norm_l2(const ControlSignal& u);

/// Quadrature L2 norm of channel c alone.
double channel_norm_l2(const ControlSignal& u, std::size_t c);

namespace detail {
void require_same_shape(const ControlSignal& u, const ControlSignal& v,
                        const char* where);
}

}  // namespace ensc

#endif
