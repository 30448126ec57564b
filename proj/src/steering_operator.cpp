#include "ensc/steering_operator.hpp"

#include <optional>
#include <utility>

#include "ensc/errors.hpp"
#include "ensc/legendre_basis.hpp"

namespace ensc {

SteeringOperator::SteeringOperator(std::size_t sample_index, TimeGrid grid,
                                   std::size_t state_dim, std::size_t input_dim,
                                   Eigen::MatrixXd kernel)
    : index_(sample_index), n_(state_dim), m_(input_dim), grid_(std::move(grid)),
      kernel_(std::move(kernel)) {
    const Eigen::Index cols = static_cast<Eigen::Index>(m_ * grid_.n_nodes());
    if (kernel_.rows() != static_cast<Eigen::Index>(n_) || kernel_.cols() != cols) {
        throw ShapeError("steering operator: kernel has wrong shape");
    }
    weighted_ = kernel_;
    for (std::size_t k = 0; k < grid_.n_nodes(); ++k) {
        weighted_.middleCols(static_cast<Eigen::Index>(k * m_), static_cast<Eigen::Index>(m_)) *=
            grid_.quad_weights()[static_cast<Eigen::Index>(k)];
    }
}

Eigen::VectorXd SteeringOperator::apply(const ControlSignal& u) const {
    if (u.grid() != grid_) throw ShapeError("steering apply: control grid mismatch");
    if (u.channels() != m_) throw ShapeError("steering apply: control channel mismatch");
    // Column-major samples flatten to stacked per-node blocks.
    return weighted_ * Eigen::Map<const Eigen::VectorXd>(u.samples().data(),
                                                         u.samples().size());
}

ControlSignal SteeringOperator::adjoint(const Eigen::VectorXd& v) const {
    if (v.size() != static_cast<Eigen::Index>(n_)) {
        throw ShapeError("steering adjoint: vector dimension mismatch");
    }
    Eigen::VectorXd flat = kernel_.transpose() * v;
    Eigen::MatrixXd samples =
        Eigen::Map<Eigen::MatrixXd>(flat.data(), static_cast<Eigen::Index>(m_),
                                    static_cast<Eigen::Index>(grid_.n_nodes()));
    return ControlSignal(grid_, std::move(samples));
}

Eigen::MatrixXd SteeringOperator::gramian_matrix() const {
    Eigen::MatrixXd w = weighted_ * kernel_.transpose();
    return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd SteeringOperator::basis_image(const BasisSet& basis) const {
    if (basis.grid() != grid_) throw ShapeError("basis_image: basis grid mismatch");
    const Eigen::Index r = static_cast<Eigen::Index>(basis.order());
    const Eigen::Index m = static_cast<Eigen::Index>(m_);
    const Eigen::Index nn = static_cast<Eigen::Index>(grid_.n_nodes());
    Eigen::MatrixXd image(static_cast<Eigen::Index>(n_), r * m);
    // Channel c of the weighted kernel is an n x nn slice with stride m.
    for (Eigen::Index c = 0; c < m; ++c) {
        Eigen::MatrixXd channel(static_cast<Eigen::Index>(n_), nn);
        for (Eigen::Index k = 0; k < nn; ++k) channel.col(k) = weighted_.col(k * m + c);
        image.middleCols(c * r, r) = channel * basis.functions().transpose();
    }
    return image;
}

SteeringOperator steering_operator(const LinearEnsembleModel& model,
                                   const TimeGrid& grid, std::size_t i) {
    if (i >= model.sample_count()) {
        throw InvalidArgumentError("steering_operator: sample index out of range");
    }
    if (grid.horizon() != model.horizon()) {
        throw ShapeError("steering_operator: grid horizon differs from model horizon");
    }
    const std::size_t n = model.state_dim();
    const std::size_t m = model.input_dim();
    const std::vector<Eigen::MatrixXd> phi = model.transition_to_horizon(i, grid);
    Eigen::MatrixXd kernel(static_cast<Eigen::Index>(n),
                           static_cast<Eigen::Index>(m * grid.n_nodes()));
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
        kernel.middleCols(static_cast<Eigen::Index>(k * m), static_cast<Eigen::Index>(m)) =
            phi[k] * model.input_matrix(i, grid.node(k));
    }
    return SteeringOperator(i, grid, n, m, std::move(kernel));
}

std::vector<SteeringOperator> steering_operators(const LinearEnsembleModel& model,
                                                 const TimeGrid& grid, Exec exec) {
    std::vector<std::optional<SteeringOperator>> slots(model.sample_count());
    for_each_index(exec, model.sample_count(), [&](std::size_t i) {
        slots[i].emplace(steering_operator(model, grid, i));
    });
    std::vector<SteeringOperator> ops;
    ops.reserve(slots.size());
    for (auto& slot : slots) ops.push_back(std::move(*slot));
    return ops;
}

}  // namespace ensc
