#ifndef ENSC_STEERING_OPERATOR_HPP
#define ENSC_STEERING_OPERATOR_HPP

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/ensemble_model.hpp"
#include "ensc/exec.hpp"
#include "ensc/time_grid.hpp"

namespace ensc {

/// Discretized steering map of one subsystem: the kernel
/// K(t_k) = Phi(T, t_k, b_i) B(t_k, b_i) tabulated at every grid node.
/// apply integrates K u by quadrature; adjoint evaluates K' v nodewise,
/// so <apply(u), v> = inner_product(u, adjoint(v)) holds exactly in the
/// discrete inner product.
class SteeringOperator {
public:
    SteeringOperator(std::size_t sample_index, TimeGrid grid, std::size_t state_dim,
                     std::size_t input_dim, Eigen::MatrixXd kernel);

    std::size_t sample_index() const { return index_; }
    std::size_t state_dim() const { return n_; }
    std::size_t input_dim() const { return m_; }
    const TimeGrid& grid() const { return grid_; }

    /// Kernel blocks side by side: n x (m * n_nodes), block k = K(t_k).
    const Eigen::MatrixXd& kernel() const { return kernel_; }

    Eigen::VectorXd apply(const ControlSignal& u) const;
    ControlSignal adjoint(const Eigen::VectorXd& v) const;

    /// W = L L* assembled by quadrature, symmetrized.
    Eigen::MatrixXd gramian_matrix() const;

    /// Coordinates of L applied to every basis element: n x (r * m),
    /// column (c*r + j) = L(phi_j e_c). Used by the spectral solver.
    Eigen::MatrixXd basis_image(const class BasisSet& basis) const;

private:
    std::size_t index_, n_, m_;
    TimeGrid grid_;
    Eigen::MatrixXd kernel_;    // n x (m * n_nodes)
    Eigen::MatrixXd weighted_;  // kernel with quadrature weights folded in
};

/// Tabulates the steering operator of sample i on the grid.
SteeringOperator steering_operator(const LinearEnsembleModel& model,
                                   const TimeGrid& grid, std::size_t i);

/// All samples at once; assembly is independent across samples.
std::vector<SteeringOperator> steering_operators(const LinearEnsembleModel& model,
                                                 const TimeGrid& grid,
                                                 Exec exec = Exec::parallel);

}  // namespace ensc

#endif
