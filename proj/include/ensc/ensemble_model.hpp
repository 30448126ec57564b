#ifndef ENSC_ENSEMBLE_MODEL_HPP
#define ENSC_ENSEMBLE_MODEL_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

#include "ensc/control_signal.hpp"
#include "ensc/exec.hpp"
#include "ensc/time_grid.hpp"

namespace ensc {

enum class BuiltinFamily {
    harmonic_oscillator_2in,  // planar rotation drift, both channels forced
    harmonic_oscillator_1in,  // same drift, single channel into x1
    bloch_linearized,         // z-rotation drift, tabulated input matrix
    custom_tabulated,         // user-supplied evaluators and/or tables
};

/// Matrix samples on a grid with linear interpolation between nodes.
struct MatrixTable {
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> values;  // one per node

    Eigen::MatrixXd eval(double t) const;
};

/// N equally spaced parameter values in [lo, hi], both endpoints included
/// (the midpoint for N = 1).
std::vector<double> sample_parameters(double lo, double hi, std::size_t count);

/// A parameterized family of linear systems dx/dt = A(t,b)x + B(t,b)u with
/// a finite sample b_1..b_N drawn from the parameter set. Supplies state
/// transition matrices; steering operators are tabulated from them.
class LinearEnsembleModel {
public:
    using MatrixFn = std::function<Eigen::MatrixXd(double t, double beta)>;

    static LinearEnsembleModel harmonic_oscillator_2in(std::vector<double> omegas,
                                                       double horizon);
    static LinearEnsembleModel harmonic_oscillator_1in(std::vector<double> omegas,
                                                       double horizon);
    /// Frozen linearization of a Bloch ensemble: drift is the z-rotation
    /// at omega_i, the input matrix is tabulated along a trajectory.
    static LinearEnsembleModel bloch_linearized(std::vector<double> omegas,
                                                double horizon,
                                                std::vector<MatrixTable> b_tables);
    /// Analytic evaluators. When `a_time_invariant` is set the transition
    /// matrix uses one matrix exponential; otherwise midpoint-frozen
    /// per-step exponentials are chained.
    static LinearEnsembleModel custom(std::size_t state_dim, std::size_t input_dim,
                                      std::vector<double> params, double horizon,
                                      MatrixFn a, MatrixFn b,
                                      bool a_time_invariant = true);
    /// Per-node matrix tables shared by all samples or given per sample.
    static LinearEnsembleModel custom_tabulated(std::vector<double> params,
                                                double horizon,
                                                std::vector<MatrixTable> a_tables,
                                                std::vector<MatrixTable> b_tables);

    BuiltinFamily family() const { return family_; }
    std::size_t state_dim() const { return n_; }
    std::size_t input_dim() const { return m_; }
    double horizon() const { return horizon_; }
    std::size_t sample_count() const { return params_.size(); }
    const std::vector<double>& parameters() const { return params_; }

    Eigen::MatrixXd system_matrix(std::size_t i, double t) const;
    Eigen::MatrixXd input_matrix(std::size_t i, double t) const;

    /// Phi(t, s) for sample i; requires 0 <= s <= t <= horizon.
    Eigen::MatrixXd transition(std::size_t i, double t, double s) const;

    /// Phi(horizon, t_k) for every node of `grid`, assembled backward so
    /// tabulated families pay one per-step exponential per interval.
    std::vector<Eigen::MatrixXd> transition_to_horizon(std::size_t i,
                                                       const TimeGrid& grid) const;

private:
    LinearEnsembleModel() = default;
    void validate() const;
    Eigen::MatrixXd step_transition(std::size_t i, double t1, double t0) const;

    BuiltinFamily family_ = BuiltinFamily::custom_tabulated;
    std::size_t n_ = 0, m_ = 0;
    double horizon_ = 0.0;
    std::vector<double> params_;
    MatrixFn a_fn_, b_fn_;
    bool a_time_invariant_ = false;
    std::vector<MatrixTable> a_tables_;  // per sample or single shared
    std::vector<MatrixTable> b_tables_;
};

/// Evaluates Phi(t, s, beta); beta must be one of the model's samples for
/// table-backed families. Throws InvalidArgumentError when t < s.
Eigen::MatrixXd transition_matrix(const LinearEnsembleModel& model, double t,
                                  double s, double beta);

/// Initial and target states, one column per sample.
struct BoundaryPair {
    Eigen::MatrixXd initial;  // n x N
    Eigen::MatrixXd target;   // n x N

    static BoundaryPair identical(const Eigen::VectorXd& x0,
                                  const Eigen::VectorXd& xf, std::size_t count);
};

/// xi_i = XF(b_i) - Phi(T, 0, b_i) X0(b_i).
Eigen::VectorXd target_vector(const LinearEnsembleModel& model, std::size_t i,
                              const BoundaryPair& boundary);

/// State paths on a grid, one n x n_nodes block per sample.
struct Trajectory {
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> states;

    Eigen::VectorXd terminal(std::size_t i) const {
        return states[i].col(states[i].cols() - 1);
    }
};

/// Classical fixed-step RK4 for one sample, control linearly interpolated
/// at half steps. Throws NumericalBlowupError when the state leaves the
/// finite range.
Eigen::MatrixXd simulate_linear_sample(const LinearEnsembleModel& model,
                                       std::size_t i, const ControlSignal& u,
                                       const Eigen::VectorXd& x0);

/// Simulates every sample; independent across i.
Trajectory simulate_linear(const LinearEnsembleModel& model, const ControlSignal& u,
                           const BoundaryPair& boundary,
                           Exec exec = Exec::parallel);

}  // namespace ensc

#endif
