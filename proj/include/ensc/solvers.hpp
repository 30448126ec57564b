#ifndef ENSC_SOLVERS_HPP
#define ENSC_SOLVERS_HPP

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/ensemble_model.hpp"
#include "ensc/exec.hpp"
#include "ensc/projections.hpp"

namespace ensc {

struct SolverOptions {
    /// Projection weights; empty selects uniform. Each weight must lie in
    /// (0, 1] and the sum must be 1. For constrained solves the first
    /// weight belongs to the input-constraint set.
    std::vector<double> weights;
    std::size_t max_iterations = 100000;
    /// Convergence on max_i ||L_i u - xi_i|| <= residual_tol * (1 + max ||xi_i||).
    double residual_tol = 1e-6;
    /// Step sizes below stall_threshold * (1 + ||u||) for stall_window
    /// consecutive iterations with the residual still above tolerance
    /// classify the run as converged_infeasible; a residual that stops
    /// improving at the same relative scale classifies it as stalled.
    std::size_t stall_window = 100;
    double stall_threshold = 1e-12;
    /// Divergence when ||u|| exceeds divergence_factor * (1 + ||u0||).
    double divergence_factor = 1e8;
    bool record_trace = true;
    std::size_t trace_every = 1;
    /// Iterations at which to snapshot the iterate (for checkpoint files).
    std::vector<std::size_t> checkpoint_iters;
    /// Start iterate; zero signal when absent. solve_min_energy ignores it.
    std::optional<ControlSignal> initial_control;
    Exec exec = Exec::parallel;
};

enum class Classification {
    converged_feasible,
    converged_infeasible,
    diverged,
    stalled,
    iteration_cap,
};

const char* to_string(Classification c);

struct TraceRecord {
    std::size_t iter;
    double control_norm;
    double max_residual;
    double step_size;
};

struct SolveReport {
    ControlSignal control;
    Classification classification;
    std::size_t iterations = 0;
    /// ||L_i u - xi_i|| per affine set at the returned control (equals the
    /// terminal Euclidean error of sample i under that control).
    Eigen::VectorXd residuals;
    double max_residual = 0.0;
    double energy = 0.0;  // squared L2 norm of the returned control
    std::vector<TraceRecord> trace;
    std::vector<std::pair<std::size_t, ControlSignal>> checkpoints;
    /// Gramian condition estimate per affine set (for diagnostics).
    std::vector<double> gramian_conditions;
};

/// One Jacobi-style step: every set projects the same input and the
/// results are averaged with the given weights.
ControlSignal weighted_projection_step(const ControlSignal& u,
                                       const std::vector<ConstraintSet>& sets,
                                       const std::vector<double>& weights,
                                       Exec exec = Exec::parallel);

/// Runs the weighted-projection iteration on the admissible sets of every
/// sample from opts.initial_control (zero when absent).
SolveReport solve_feasible(const LinearEnsembleModel& model, const TimeGrid& grid,
                           const BoundaryPair& boundary, const SolverOptions& opts);

/// Same iteration started from the origin; the limit is the orthogonal
/// projection of zero onto the intersection, i.e. the minimum-energy
/// ensemble control.
SolveReport solve_min_energy(const LinearEnsembleModel& model, const TimeGrid& grid,
                             const BoundaryPair& boundary, const SolverOptions& opts);

/// Weighted projections over {G, C_1..C_N}. Convergence is judged on the
/// terminal-state error; the returned control receives one final
/// projection onto G so the constraint holds exactly.
SolveReport solve_constrained(const LinearEnsembleModel& model, const TimeGrid& grid,
                              const BoundaryPair& boundary, const ConstraintSet& constraint,
                              const SolverOptions& opts);

/// Cyclic projections with correction offsets; the limit is the nearest
/// point of the intersection to u0. Offsets are suppressed when every set
/// is affine, which leaves the limit unchanged. max_iterations counts
/// cycles.
SolveReport solve_dykstra(const std::vector<ConstraintSet>& sets,
                          const ControlSignal& u0, const SolverOptions& opts);

enum class ReachVerdict { reachable, not_reachable, inconclusive };
enum class ReachRoute { iterative, spectral };

const char* to_string(ReachVerdict v);

struct ReachabilityOptions {
    ReachRoute route = ReachRoute::iterative;
    /// Verdict threshold on the max per-sample residual.
    double reach_tol = 1e-3;
    /// Basis order for the spectral route.
    std::size_t basis_order = 50;
    SolverOptions solver;
};

struct ReachabilityReport {
    ReachVerdict verdict;
    Eigen::VectorXd residuals;
    SolveReport evidence;
};

/// Numerical reachability examination: compute the limit control (by
/// iteration or the closed-form spectral solver), apply it, and judge the
/// residuals. A residual within reach_tol certifies the transfer with the
/// control as witness; a settled iteration with a large residual certifies
/// an empty intersection; hitting the iteration cap with neither signal is
/// inconclusive.
ReachabilityReport assess_reachability(const LinearEnsembleModel& model,
                                       const TimeGrid& grid,
                                       const BoundaryPair& boundary,
                                       const ReachabilityOptions& opts);

namespace detail {

struct WeightedStepOutcome {
    ControlSignal next;
    /// Pre-step residual per set; NaN for non-affine sets.
    Eigen::VectorXd residuals;
};

WeightedStepOutcome weighted_step_detailed(const ControlSignal& u,
                                           const std::vector<ConstraintSet>& sets,
                                           const std::vector<double>& weights,
                                           Exec exec);

void validate_weights(const std::vector<double>& weights, std::size_t count);
std::vector<double> uniform_weights(std::size_t count);

/// Builds the admissible affine set of every sample.
std::vector<ConstraintSet> affine_sets(const LinearEnsembleModel& model,
                                       const TimeGrid& grid,
                                       const BoundaryPair& boundary, Exec exec);

}  // namespace detail
}  // namespace ensc

#endif
