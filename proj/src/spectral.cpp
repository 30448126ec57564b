#include "ensc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <string>

#include "ensc/errors.hpp"
#include "ensc/projections.hpp"
#include "ensc/solvers.hpp"

namespace ensc {

namespace {

// Discretization perturbs the exact spectrum of the averaged projection;
// these tolerances bound how far it may drift before the operator is
// rejected, and how close to 1 an eigenvalue must be to count as frozen.
constexpr double kSpectrumSlack = 1e-6;
constexpr double kUnitEigenTol = 1e-8;
constexpr double kPinvCutoff = 1e-12;

}  // namespace

SpectralOperator build_spectral_from_ops(const std::vector<SteeringOperator>& ops,
                                         const std::vector<Eigen::VectorXd>& xis,
                                         const BasisSet& basis,
                                         const std::vector<double>& weights,
                                         Exec exec) {
    if (ops.empty()) throw InvalidArgumentError("build_spectral: no steering operators");
    if (ops.size() != xis.size()) {
        throw ShapeError("build_spectral: operator and target counts differ");
    }
    detail::validate_weights(weights, ops.size());
    if (basis.order() > basis.grid().n_steps()) {
        throw ResolutionError("build_spectral: basis order exceeds grid resolution");
    }

    const std::size_t m = ops.front().input_dim();
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.order() * m);

    // Per-sample contributions G' W^{-1} G and G' W^{-1} xi, reduced in
    // index order.
    std::vector<std::optional<Eigen::MatrixXd>> w_parts(ops.size());
    std::vector<std::optional<Eigen::VectorXd>> d_parts(ops.size());
    for_each_index(exec, ops.size(), [&](std::size_t i) {
        const Gramian gram = gramian(ops[i]);
        const Eigen::MatrixXd image = ops[i].basis_image(basis);  // n x (r*m)
        const Eigen::MatrixXd solved = gram.cholesky.solve(image);
        w_parts[i] = image.transpose() * solved;
        d_parts[i] = image.transpose() * gram.cholesky.solve(xis[i]);
    });

    SpectralOperator op{basis, m, Eigen::MatrixXd::Zero(dim, dim), {}, {},
                        Eigen::VectorXd::Zero(dim), {}};
    for (std::size_t i = 0; i < ops.size(); ++i) {
        op.w += weights[i] * (*w_parts[i]);
        op.delta += weights[i] * (*d_parts[i]);
    }
    op.w = 0.5 * (op.w + op.w.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        Eigen::MatrixXd::Identity(dim, dim) - op.w);
    if (eig.info() != Eigen::Success) {
        throw Error("build_spectral: eigendecomposition of I - W failed");
    }
    op.spectrum = eig.eigenvalues();
    const double lo = op.spectrum.minCoeff();
    const double hi = op.spectrum.maxCoeff();
    if (lo < -kSpectrumSlack || hi > 1.0 + kSpectrumSlack) {
        throw SpectrumViolationError(
            "build_spectral: spectrum of I - W leaves [-1e-6, 1+1e-6]: [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    // Freeze eigenvalues within kUnitEigenTol of 1; every other mode is
    // contracted away by the iteration, so it is zeroed in the limit.
    op.w_inf = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (std::abs(op.spectrum[j] - 1.0) <= kUnitEigenTol) {
            op.w_inf += eig.eigenvectors().col(j) * eig.eigenvectors().col(j).transpose();
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(op.w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kPinvCutoff);
    const Eigen::Index rank = svd.rank();
    const auto& sv = svd.singularValues();
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index j = 0; j < rank; ++j) inv_sv[j] = 1.0 / sv[j];
    op.w_dagger = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
    return op;
}

SpectralOperator build_spectral(const LinearEnsembleModel& model, const TimeGrid& grid,
                                const BoundaryPair& boundary, const BasisSet& basis,
                                const std::vector<double>& weights, Exec exec) {
    std::vector<SteeringOperator> ops = steering_operators(model, grid, exec);
    std::vector<Eigen::VectorXd> xis;
    xis.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        xis.push_back(target_vector(model, i, boundary));
    }
    std::vector<double> w =
        weights.empty() ? detail::uniform_weights(ops.size()) : weights;
    return build_spectral_from_ops(ops, xis, basis, w, exec);
}

ControlSignal solve_spectral(const SpectralOperator& op, const Coordinates& mu0) {
    if (mu0.coeffs.size() != op.w.rows()) {
        throw ShapeError("solve_spectral: coordinate dimension does not match operator");
    }
    const Eigen::VectorXd particular = op.w_dagger * op.delta;
    Eigen::VectorXd mu_star = op.w_inf * (mu0.coeffs - particular) + particular;
    Coordinates mu{std::move(mu_star), op.basis.order(), op.channels};
    return from_coordinates(mu, op.basis);
}

}  // namespace ensc
