#include "simcon/signal.hpp"

#include <utility>

namespace simcon {

namespace {

void check_samples(const TimeGrid& grid, const Matrix& values, const char* what) {
    if (values.rows() != grid.n_nodes())
        throw ValidationError(std::string(what) + ": sample count " + std::to_string(values.rows()) +
                              " does not match grid nodes " + std::to_string(grid.n_nodes()));
    if (values.cols() < 1)
        throw ValidationError(std::string(what) + ": needs at least one component");
    if (!values.allFinite())
        throw ValidationError(std::string(what) + ": non-finite sample");
}

} // namespace

ControlSignal::ControlSignal(TimeGrid g, Matrix v) : grid(g), values(std::move(v)) {
    check_samples(grid, values, "ControlSignal");
}

ControlSignal ControlSignal::zero(const TimeGrid& g, int m) {
    return ControlSignal(g, Matrix::Zero(g.n_nodes(), m));
}

ControlSignal ControlSignal::constant(const TimeGrid& g, const Vector& level) {
    Matrix v(g.n_nodes(), level.size());
    v.rowwise() = level.transpose();
    return ControlSignal(g, std::move(v));
}

Trajectory::Trajectory(TimeGrid g, Matrix v) : grid(g), values(std::move(v)) {
    check_samples(grid, values, "Trajectory");
}

double l2_inner(const ControlSignal& u, const ControlSignal& v) {
    if (!(u.grid == v.grid))
        throw ValidationError("l2_inner: grid mismatch");
    if (u.values.cols() != v.values.cols())
        throw ValidationError("l2_inner: component count mismatch");
    const Eigen::VectorXd pointwise = (u.values.array() * v.values.array()).rowwise().sum();
    const auto n = pointwise.size();
    double interior = 0.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        interior += pointwise[i];
    return u.grid.step() * (0.5 * pointwise[0] + interior + 0.5 * pointwise[n - 1]);
}

double l2_norm_sq(const ControlSignal& u) {
    return l2_inner(u, u);
}

} // namespace simcon
