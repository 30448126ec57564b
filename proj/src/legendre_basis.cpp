#include "ensc/legendre_basis.hpp"

#include <cmath>
#include <utility>

#include "ensc/errors.hpp"

namespace ensc {

namespace {

double quad_dot(const Eigen::VectorXd& w, const Eigen::RowVectorXd& a,
                const Eigen::RowVectorXd& b) {
    return (a.cwiseProduct(b) * w)(0);
}

}  // namespace

BasisSet::BasisSet(TimeGrid grid, Eigen::MatrixXd functions)
    : grid_(std::move(grid)), functions_(std::move(functions)) {
    if (functions_.rows() < 1) {
        throw InvalidArgumentError("basis: need at least one function");
    }
    if (static_cast<std::size_t>(functions_.cols()) != grid_.n_nodes()) {
        throw ShapeError("basis: sample count does not match grid");
    }
}

Eigen::MatrixXd BasisSet::gram() const {
    return functions_ * grid_.quad_weights().asDiagonal() * functions_.transpose();
}

BasisSet legendre_basis(std::size_t order, const TimeGrid& grid) {
    if (order < 1) throw InvalidArgumentError("legendre_basis: order must be >= 1");
    if (order > grid.n_steps()) {
        throw ResolutionError("legendre_basis: order exceeds grid resolution");
    }
    const Eigen::Index r = static_cast<Eigen::Index>(order);
    const Eigen::Index nn = static_cast<Eigen::Index>(grid.n_nodes());
    const double T = grid.horizon();

    // Shifted Legendre recurrence on x = 2t/T - 1, scaled to unit L2 norm
    // on [0, T].
    Eigen::RowVectorXd x = (2.0 / T) * grid.nodes().transpose().array() - 1.0;
    Eigen::MatrixXd phi(r, nn);
    phi.row(0).setOnes();
    if (r > 1) phi.row(1) = x;
    for (Eigen::Index j = 1; j + 1 < r; ++j) {
        const double a = (2.0 * j + 1.0) / (j + 1.0);
        const double b = static_cast<double>(j) / (j + 1.0);
        phi.row(j + 1) = a * x.cwiseProduct(phi.row(j)) - b * phi.row(j - 1);
    }
    for (Eigen::Index j = 0; j < r; ++j) {
        phi.row(j) *= std::sqrt((2.0 * j + 1.0) / T);
    }

    // Modified Gram-Schmidt against the quadrature inner product, run
    // twice so the discrete Gram matrix is identity to round-off even at
    // high orders where the trapezoid rule drifts from the analytic one.
    const Eigen::VectorXd& w = grid.quad_weights();
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < r; ++j) {
            for (Eigen::Index k = 0; k < j; ++k) {
                const double c = quad_dot(w, phi.row(k), phi.row(j));
                phi.row(j) -= c * phi.row(k);
            }
            const double nrm = std::sqrt(quad_dot(w, phi.row(j), phi.row(j)));
            if (!(nrm > 0.0) || !std::isfinite(nrm)) {
                throw ResolutionError("legendre_basis: grid cannot resolve requested order");
            }
            phi.row(j) /= nrm;
        }
    }
    return BasisSet(grid, std::move(phi));
}

Coordinates to_coordinates(const ControlSignal& u, const BasisSet& basis) {
    if (u.grid() != basis.grid()) {
        throw ShapeError("to_coordinates: signal and basis grids differ");
    }
    const Eigen::Index r = static_cast<Eigen::Index>(basis.order());
    const Eigen::Index m = static_cast<Eigen::Index>(u.channels());
    // (r x nodes) * diag(w) * (nodes x m) -> per-channel coefficients.
    Eigen::MatrixXd coeffs = basis.functions() *
                             basis.grid().quad_weights().asDiagonal() *
                             u.samples().transpose();
    Coordinates mu;
    mu.order = basis.order();
    mu.channels = u.channels();
    mu.coeffs.resize(r * m);
    for (Eigen::Index c = 0; c < m; ++c) {
        mu.coeffs.segment(c * r, r) = coeffs.col(c);
    }
    return mu;
}

ControlSignal from_coordinates(const Coordinates& mu, const BasisSet& basis) {
    if (mu.order != basis.order()) {
        throw ShapeError("from_coordinates: coordinate order does not match basis");
    }
    if (mu.channels < 1) {
        throw ShapeError("from_coordinates: coordinates carry no channels");
    }
    const Eigen::Index r = static_cast<Eigen::Index>(mu.order);
    const Eigen::Index m = static_cast<Eigen::Index>(mu.channels);
    if (mu.coeffs.size() != r * m) {
        throw ShapeError("from_coordinates: coefficient vector has wrong length");
    }
    Eigen::MatrixXd samples(m, basis.functions().cols());
    for (Eigen::Index c = 0; c < m; ++c) {
        samples.row(c) = mu.coeffs.segment(c * r, r).transpose() * basis.functions();
    }
    return ControlSignal(basis.grid(), std::move(samples));
}

}  // namespace ensc
