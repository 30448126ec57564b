#ifndef ENSC_REFERENCE_HPP
#define ENSC_REFERENCE_HPP

#include <Eigen/Core>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/ensemble_model.hpp"
#include "ensc/projections.hpp"
#include "ensc/steering_operator.hpp"

namespace ensc::reference {

// Plain single-threaded implementations of the data-parallel kernels,
// written as directly as possible. The test suite checks the production
// kernels against these bit for bit; the benchmark tool times both.

/// sum_j w_j P_j(u), projecting and accumulating one set at a time.
ControlSignal weighted_step(const ControlSignal& u,
                            const std::vector<ConstraintSet>& sets,
                            const std::vector<double>& weights);

/// Steering kernel and Gramian from explicit per-node loops:
/// W = sum_k w_k K(t_k) K(t_k)'.
Eigen::MatrixXd gramian(const SteeringOperator& op);

/// apply via an explicit quadrature loop over nodes.
Eigen::VectorXd apply(const SteeringOperator& op, const ControlSignal& u);

/// One trajectory per sample, simulated in sequence.
Trajectory simulate_linear(const LinearEnsembleModel& model, const ControlSignal& u,
                           const BoundaryPair& boundary);

}  // namespace ensc::reference

#endif
