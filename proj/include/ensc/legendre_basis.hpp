#ifndef ENSC_LEGENDRE_BASIS_HPP
#define ENSC_LEGENDRE_BASIS_HPP

#include <Eigen/Core>
#include <cstddef>

#include "ensc/control_signal.hpp"
#include "ensc/time_grid.hpp"

namespace ensc {

/// Truncated orthonormal basis of scalar functions on [0, T], sampled on a
/// grid. Built from shifted Legendre polynomials and re-orthonormalized
/// against the discrete quadrature inner product, so the discrete Gram
/// matrix is the identity to machine precision. Applied per channel to
/// vector-valued signals.
class BasisSet {
public:
    BasisSet(TimeGrid grid, Eigen::MatrixXd functions);

    std::size_t order() const { return static_cast<std::size_t>(functions_.rows()); }
    const TimeGrid& grid() const { return grid_; }

    /// Row j holds phi_{j+1} sampled at the grid nodes.
    const Eigen::MatrixXd& functions() const { return functions_; }

    /// Discrete Gram matrix <phi_j, phi_k>; identity up to round-off.
    Eigen::MatrixXd gram() const;

private:
    TimeGrid grid_;
    Eigen::MatrixXd functions_;  // r x n_nodes
};

/// Coordinates of an m-channel signal in a BasisSet: r coefficients per
/// channel, stacked channel after channel (length r*m).
struct Coordinates {
    Eigen::VectorXd coeffs;
    std::size_t order = 0;
    std::size_t channels = 0;
};

/// Builds the orthonormalized shifted-Legendre basis of the given order.
/// Throws ResolutionError when r exceeds the number of grid intervals.
BasisSet legendre_basis(std::size_t order, const TimeGrid& grid);

/// Per-channel coefficients mu_{c,j} = <u_c, phi_j>.
Coordinates to_coordinates(const ControlSignal& u, const BasisSet& basis);

/// Reconstructs sum_j mu_{c,j} phi_j per channel.
ControlSignal from_coordinates(const Coordinates& mu, const BasisSet& basis);

}  // namespace ensc

#endif
