#include "ensc/control_signal.hpp"

#include <cmath>
#include <utility>

#include "ensc/errors.hpp"

namespace ensc {

ControlSignal::ControlSignal(TimeGrid grid, std::size_t channels)
    : grid_(std::move(grid)), m_(channels) {
    if (m_ < 1) throw InvalidArgumentError("control signal: need at least one channel");
    samples_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                                     static_cast<Eigen::Index>(grid_.n_nodes()));
}

ControlSignal::ControlSignal(TimeGrid grid, Eigen::MatrixXd samples)
    : grid_(std::move(grid)), m_(static_cast<std::size_t>(samples.rows())),
      samples_(std::move(samples)) {
    if (m_ < 1) throw InvalidArgumentError("control signal: need at least one channel");
    if (static_cast<std::size_t>(samples_.cols()) != grid_.n_nodes()) {
        throw ShapeError("control signal: sample count does not match grid nodes");
    }
}

ControlSignal ControlSignal::zero(const TimeGrid& grid, std::size_t channels) {
    return ControlSignal(grid, channels);
}

ControlSignal ControlSignal::constant(const TimeGrid& grid, const Eigen::VectorXd& value) {
    ControlSignal u(grid, static_cast<std::size_t>(value.size()));
    u.samples_.colwise() = value;
    return u;
}

ControlSignal ControlSignal::from_function(
    const TimeGrid& grid, std::size_t channels,
    const std::function<Eigen::VectorXd(double)>& f) {
    ControlSignal u(grid, channels);
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
        Eigen::VectorXd v = f(grid.node(k));
        if (static_cast<std::size_t>(v.size()) != channels) {
            throw ShapeError("control signal: sampled function has wrong channel count");
        }
        u.samples_.col(static_cast<Eigen::Index>(k)) = v;
    }
    return u;
}

Eigen::VectorXd ControlSignal::at(double t) const {
    const double T = grid_.horizon();
    if (t <= 0.0) return samples_.col(0);
    if (t >= T) return samples_.col(samples_.cols() - 1);
    const double pos = t / grid_.dt();
    const Eigen::Index k = static_cast<Eigen::Index>(std::floor(pos));
    const double frac = pos - static_cast<double>(k);
    if (k + 1 >= samples_.cols()) return samples_.col(samples_.cols() - 1);
    return (1.0 - frac) * samples_.col(k) + frac * samples_.col(k + 1);
}

ControlSignal& ControlSignal::operator+=(const ControlSignal& rhs) {
    detail::require_same_shape(*this, rhs, "operator+=");
    samples_ += rhs.samples_;
    return *this;
}

ControlSignal& ControlSignal::operator-=(const ControlSignal& rhs) {
    detail::require_same_shape(*this, rhs, "operator-=");
    samples_ -= rhs.samples_;
    return *this;
}

ControlSignal& ControlSignal::operator*=(double scale) {
    samples_ *= scale;
    return *this;
}

ControlSignal operator+(ControlSignal lhs, const ControlSignal& rhs) {
    lhs += rhs;
    return lhs;
}

ControlSignal operator-(ControlSignal lhs, const ControlSignal& rhs) {
    lhs -= rhs;
    return lhs;
}

ControlSignal operator*(double scale, ControlSignal rhs) {
    rhs *= scale;
    return rhs;
}

double inner_product(const ControlSignal& u, const ControlSignal& v) {
    detail::require_same_shape(u, v, "inner_product");
    // sum_k w_k * <u(t_k), v(t_k)>
    return (u.samples().cwiseProduct(v.samples()) * u.grid().quad_weights()).sum();
}

double norm_l2(const ControlSignal& u) {
    double q = (u.samples().cwiseProduct(u.samples()) * u.grid().quad_weights()).sum();
    return std::sqrt(std::max(q, 0.0));
}

double channel_norm_l2(const ControlSignal& u, std::size_t c) {
    if (c >= u.channels()) throw ShapeError("channel_norm_l2: channel out of range");
    const auto row = u.samples().row(static_cast<Eigen::Index>(c));
    double q = (row.cwiseProduct(row) * u.grid().quad_weights())(0);
    return std::sqrt(std::max(q, 0.0));
}

namespace detail {

void require_same_shape(const ControlSignal& u, const ControlSignal& v,
                        const char* where) {
    if (u.grid() != v.grid()) {
        throw ShapeError(std::string(where) + ": signals live on different grids");
    }
    if (u.channels() != v.channels()) {
        throw ShapeError(std::string(where) + ": channel count mismatch");
    }
}

}  // namespace detail
}  // namespace ensc
