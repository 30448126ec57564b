#ifndef ENSC_PROJECTIONS_HPP
#define ENSC_PROJECTIONS_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstddef>
#include <variant>

#include "ensc/control_signal.hpp"
#include "ensc/steering_operator.hpp"

namespace ensc {

/// Steering Gramian W = L L* with its Cholesky factor and a spectral
/// condition estimate. Construction fails with SingularGramianError when
/// the smallest eigenvalue falls below eps_pd times the largest, i.e. the
/// subsystem is numerically uncontrollable on the horizon.
struct Gramian {
    Eigen::MatrixXd matrix;
    Eigen::LLT<Eigen::MatrixXd> cholesky;
    double condition = 0.0;

    static constexpr double eps_pd = 1e-10;
};

Gramian gramian(const SteeringOperator& op);

/// Affine set {u | L u = xi}: controls achieving one subsystem's exact
/// transfer. Projection uses the normal-equations form
/// P u = u + L* W^{-1} (xi - L u).
class AffineSteeringSet {
public:
    AffineSteeringSet(SteeringOperator op, Eigen::VectorXd xi);

    const SteeringOperator& op() const { return op_; }
    const Eigen::VectorXd& xi() const { return xi_; }
    const Gramian& gram() const { return gram_; }

    double residual(const ControlSignal& u) const;
    ControlSignal project(const ControlSignal& u) const;
    /// Projection plus the pre-projection residual ||L u - xi||, which the
    /// solvers reuse as the terminal-state error of u.
    ControlSignal project(const ControlSignal& u, double* residual_out) const;
    bool contains(const ControlSignal& u, double tol) const;

private:
    SteeringOperator op_;
    Eigen::VectorXd xi_;
    Gramian gram_;
};

/// {u | ||u||_2 <= M}, per channel by default (each channel scaled to its
/// own radius) or on the joint norm.
class EnergyBall {
public:
    explicit EnergyBall(double radius, bool per_channel = true);

    double radius() const { return radius_; }
    bool per_channel() const { return per_channel_; }

    ControlSignal project(const ControlSignal& u) const;
    bool contains(const ControlSignal& u, double tol) const;

private:
    double radius_;
    bool per_channel_;
};

/// {u | |u_c(t)| <= M for every channel and time}; projection clips
/// samples componentwise.
class AmplitudeBox {
public:
    explicit AmplitudeBox(double bound);

    double bound() const { return bound_; }

    ControlSignal project(const ControlSignal& u) const;
    bool contains(const ControlSignal& u, double tol) const;

private:
    double bound_;
};

using ConstraintSet = std::variant<AffineSteeringSet, EnergyBall, AmplitudeBox>;

ControlSignal project(const ConstraintSet& set, const ControlSignal& u);
bool contains(const ConstraintSet& set, const ControlSignal& u, double tol);

}  // namespace ensc

#endif
