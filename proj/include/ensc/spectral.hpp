#ifndef ENSC_SPECTRAL_HPP
#define ENSC_SPECTRAL_HPP

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/ensemble_model.hpp"
#include "ensc/exec.hpp"
#include "ensc/legendre_basis.hpp"
#include "ensc/steering_operator.hpp"

namespace ensc {

/// Finite-dimensional compression of the averaged projection operator to
/// a truncated basis. W holds the coordinates of the operator applied to
/// every basis element; W^dagger is a singular-value pseudo-inverse and
/// W^infinity keeps exactly the unit eigenvalues of I - W, so the limit
/// of the iteration is available in closed form without iterating.
struct SpectralOperator {
    BasisSet basis;
    std::size_t channels = 0;
    Eigen::MatrixXd w;         // (r*m) x (r*m), symmetric PSD
    Eigen::MatrixXd w_dagger;  // pseudo-inverse, relative cutoff 1e-12
    Eigen::MatrixXd w_inf;     // projector onto frozen modes of I - W
    Eigen::VectorXd delta;     // coordinates of the weighted target image
    Eigen::VectorXd spectrum;  // eigenvalues of I - W, ascending
};

SpectralOperator build_spectral(const LinearEnsembleModel& model, const TimeGrid& grid,
                                const BoundaryPair& boundary, const BasisSet& basis,
                                const std::vector<double>& weights = {},
                                Exec exec = Exec::parallel);

/// Same, from already-assembled steering operators and targets.
SpectralOperator build_spectral_from_ops(const std::vector<SteeringOperator>& ops,
                                         const std::vector<Eigen::VectorXd>& xis,
                                         const BasisSet& basis,
                                         const std::vector<double>& weights,
                                         Exec exec = Exec::parallel);

/// mu* = W_inf (mu0 - W_dagger delta) + W_dagger delta, reconstructed on
/// the grid. No iteration is performed.
ControlSignal solve_spectral(const SpectralOperator& op, const Coordinates& mu0);

}  // namespace ensc

#endif
