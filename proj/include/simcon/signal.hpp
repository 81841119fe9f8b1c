#pragma once

#include <Eigen/Dense>

#include "simcon/time_grid.hpp"

namespace simcon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// M-component control sampled on grid nodes, (n_steps+1) x M,
/// interpreted piecewise-linear in time.
struct ControlSignal {
    TimeGrid grid;
    Matrix values; // n_nodes x M

    ControlSignal(TimeGrid g, Matrix v);

    static ControlSignal zero(const TimeGrid& g, int m);
    static ControlSignal constant(const TimeGrid& g, const Vector& level);

    [[nodiscard]] int components() const { return static_cast<int>(values.cols()); }
    [[nodiscard]] bool is_zero() const { return values.isZero(0.0); }
};

/// N-component state or adjoint path sampled on grid nodes.
struct Trajectory {
    TimeGrid grid;
    Matrix values; // n_nodes x N

    Trajectory(TimeGrid g, Matrix v);

    [[nodiscard]] int dimension() const { return static_cast<int>(values.cols()); }
    [[nodiscard]] Vector node(int i) const { return values.row(i).transpose(); }
    [[nodiscard]] Vector terminal() const { return values.row(values.rows() - 1).transpose(); }
};

/// Trapezoidal quadrature of the pointwise Euclidean inner product.
/// Symmetric and bilinear; requires matching grids and component counts.
[[nodiscard]] double l2_inner(const ControlSignal& u, const ControlSignal& v);

/// l2_inner(u, u); nonnegative, zero iff all samples are zero.
[[nodiscard]] double l2_norm_sq(const ControlSignal& u);

} // namespace simcon
