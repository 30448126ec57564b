#include "ensc/projections.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>

#include "ensc/errors.hpp"

namespace ensc {

Gramian gramian(const SteeringOperator& op) {
    Gramian g;
    g.matrix = op.gramian_matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.matrix);
    if (eig.info() != Eigen::Success) {
        throw Error("gramian: eigenvalue computation failed");
    }
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > Gramian::eps_pd * hi) || !(hi > 0.0)) {
        throw SingularGramianError(
            op.sample_index(),
            "gramian: subsystem " + std::to_string(op.sample_index()) +
                " is uncontrollable on the horizon (smallest eigenvalue " +
                std::to_string(lo) + " vs largest " + std::to_string(hi) + ")");
    }
    g.condition = hi / lo;
    g.cholesky.compute(g.matrix);
    if (g.cholesky.info() != Eigen::Success) {
        throw SingularGramianError(op.sample_index(),
                                   "gramian: Cholesky factorization failed for subsystem " +
                                       std::to_string(op.sample_index()));
    }
    return g;
}

AffineSteeringSet::AffineSteeringSet(SteeringOperator op, Eigen::VectorXd xi)
    : op_(std::move(op)), xi_(std::move(xi)), gram_(gramian(op_)) {
    if (xi_.size() != static_cast<Eigen::Index>(op_.state_dim())) {
        throw ShapeError("affine steering set: target dimension mismatch");
    }
}

double AffineSteeringSet::residual(const ControlSignal& u) const {
    return (op_.apply(u) - xi_).norm();
}

ControlSignal AffineSteeringSet::project(const ControlSignal& u) const {
    return project(u, nullptr);
}

ControlSignal AffineSteeringSet::project(const ControlSignal& u,
                                         double* residual_out) const {
    Eigen::VectorXd defect = xi_ - op_.apply(u);
    if (residual_out) *residual_out = defect.norm();
    ControlSignal correction = op_.adjoint(gram_.cholesky.solve(defect));
    correction += u;
    return correction;
}

bool AffineSteeringSet::contains(const ControlSignal& u, double tol) const {
    return residual(u) <= tol * (1.0 + xi_.norm());
}

EnergyBall::EnergyBall(double radius, bool per_channel)
    : radius_(radius), per_channel_(per_channel) {
    if (!(radius > 0.0)) throw InvalidArgumentError("energy ball: radius must be positive");
}

ControlSignal EnergyBall::project(const ControlSignal& u) const {
    ControlSignal out = u;
    if (per_channel_) {
        for (std::size_t c = 0; c < u.channels(); ++c) {
            const double nrm = channel_norm_l2(u, c);
            if (nrm > radius_) {
                out.samples().row(static_cast<Eigen::Index>(c)) *= radius_ / nrm;
            }
        }
    } else {
        const double nrm = norm_l2(u);
        if (nrm > radius_) out *= radius_ / nrm;
    }
    return out;
}

bool EnergyBall::contains(const ControlSignal& u, double tol) const {
    if (per_channel_) {
        for (std::size_t c = 0; c < u.channels(); ++c) {
            if (channel_norm_l2(u, c) > radius_ + tol) return false;
        }
        return true;
    }
    return norm_l2(u) <= radius_ + tol;
}

AmplitudeBox::AmplitudeBox(double bound) : bound_(bound) {
    if (!(bound > 0.0)) throw InvalidArgumentError("amplitude box: bound must be positive");
}

ControlSignal AmplitudeBox::project(const ControlSignal& u) const {
    ControlSignal out = u;
    out.samples() = out.samples().cwiseMax(-bound_).cwiseMin(bound_);
    return out;
}

bool AmplitudeBox::contains(const ControlSignal& u, double tol) const {
    return u.samples().cwiseAbs().maxCoeff() <= bound_ + tol;
}

ControlSignal project(const ConstraintSet& set, const ControlSignal& u) {
    return std::visit([&](const auto& s) { return s.project(u); }, set);
}

bool contains(const ConstraintSet& set, const ControlSignal& u, double tol) {
    return std::visit([&](const auto& s) { return s.contains(u, tol); }, set);
}

}  // namespace ensc
