#ifndef ENSC_BILINEAR_HPP
#define ENSC_BILINEAR_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/ensemble_model.hpp"
#include "ensc/exec.hpp"
#include "ensc/solvers.hpp"

namespace ensc {

/// Bilinear ensemble dX/dt = A(b) X + (sum_j u_j B_j(b)) X with constant
/// per-sample generators. The Bloch family has all generators
/// skew-symmetric, so state norms are conserved.
class BilinearEnsembleModel {
public:
    using DriftFn = std::function<Eigen::MatrixXd(double beta)>;
    using CouplingFn = std::function<Eigen::MatrixXd(double beta)>;

    /// Nuclear-spin ensemble: z-rotation drift at the Larmor frequency,
    /// two radio-frequency control channels.
    static BilinearEnsembleModel bloch(std::vector<double> omegas, double horizon);

    static BilinearEnsembleModel custom(std::size_t state_dim, std::size_t input_dim,
                                        std::vector<double> params, double horizon,
                                        DriftFn drift, std::vector<CouplingFn> couplings);

    std::size_t state_dim() const { return n_; }
    std::size_t input_dim() const { return m_; }
    double horizon() const { return horizon_; }
    std::size_t sample_count() const { return params_.size(); }
    const std::vector<double>& parameters() const { return params_; }
    bool is_bloch() const { return is_bloch_; }

    Eigen::MatrixXd drift(std::size_t i) const;
    Eigen::MatrixXd coupling(std::size_t i, std::size_t j) const;

private:
    BilinearEnsembleModel() = default;

    bool is_bloch_ = false;
    std::size_t n_ = 0, m_ = 0;
    double horizon_ = 0.0;
    std::vector<double> params_;
    DriftFn drift_;
    std::vector<CouplingFn> couplings_;
};

/// RK4 on the true bilinear dynamics, controls linearly interpolated at
/// half steps.
Eigen::MatrixXd simulate_bilinear_sample(const BilinearEnsembleModel& model,
                                         std::size_t i, const ControlSignal& u,
                                         const Eigen::VectorXd& x0);

Trajectory simulate_bilinear(const BilinearEnsembleModel& model, const ControlSignal& u,
                             const BoundaryPair& boundary, Exec exec = Exec::parallel);

/// Freezes the trajectory: the state-dependent input matrix
/// [B_1 X(t) ... B_m X(t)] is tabulated per node and sample, producing a
/// time-varying linear ensemble with the bare drift.
LinearEnsembleModel linearize_about(const BilinearEnsembleModel& model,
                                    const Trajectory& trajectory);

/// Variational freeze along (trajectory, control): same tabulated input
/// matrix, but the drift carries the control coupling of the frozen
/// control, A + sum_j u_j(t) B_j, so the frozen system propagates
/// perturbations the way the true dynamics do. The bare-drift freeze is
/// only a valid local model when the accumulated control rotation is
/// small; for strong transfers its correction directions turn unstable.
LinearEnsembleModel linearize_about(const BilinearEnsembleModel& model,
                                    const Trajectory& trajectory,
                                    const ControlSignal& control);

struct BilinearOptions {
    std::size_t outer_cap = 300;
    /// Stop when max_i ||X(T, b_i) - XF(b_i)|| drops below this.
    double stop_tol = 5e-2;
    /// U^{k+1} = U^k + damping * delta_u.
    double damping = 1.0;
    /// Minimize the total control energy ||U^k + delta_u|| instead of the
    /// correction energy ||delta_u|| in each inner solve.
    bool warm_start = false;
    /// Abort when the terminal error exceeds this multiple of its initial
    /// value.
    double divergence_guard = 10.0;
    /// A zero initial control leaves pole-to-pole transfers exactly on the
    /// drift axis, where the frozen input matrix loses rank and the first
    /// linearization has no authority toward the target. When that happens
    /// the loop restarts once from a constant probe pulse of this
    /// amplitude on the first channel; 0 disables the rescue and the
    /// singular-Gramian error propagates with its outer iteration index.
    double degenerate_start_amplitude = 3.0;
    std::optional<ControlSignal> initial_control;
    Exec exec = Exec::parallel;
};

struct BilinearReport {
    BilinearReport(ControlSignal u, Trajectory traj)
        : control(std::move(u)), trajectory(std::move(traj)) {}

    ControlSignal control;
    Trajectory trajectory;  // true-dynamics trajectory under the final control
    bool converged = false;
    bool aborted_divergence = false;
    bool degenerate_start_rescued = false;
    std::size_t outer_iterations = 0;
    /// Max terminal error after each outer iterate; entry 0 belongs to the
    /// initial control.
    std::vector<double> terminal_errors;
    std::vector<double> control_norms;
    std::vector<double> energies;
};

/// Alternating control/trajectory iteration: freeze the trajectory, solve
/// the frozen linear ensemble for a minimum-energy control, re-simulate
/// the true dynamics, repeat. Terminal errors are always measured on the
/// true bilinear simulation.
BilinearReport solve_bilinear(const BilinearEnsembleModel& model, const TimeGrid& grid,
                              const BoundaryPair& boundary,
                              const SolverOptions& inner_opts,
                              const BilinearOptions& outer_opts);

}  // namespace ensc

#endif
