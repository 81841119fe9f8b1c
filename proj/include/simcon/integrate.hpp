#pragma once

#include "simcon/signal.hpp"

namespace simcon {

/// Classical 4th-order one-step integration of x' = A x + B u(t), with u
/// evaluated by linear interpolation at the stage times. Node 0 equals x0.
/// A non-finite intermediate aborts with the offending node index.
[[nodiscard]] Trajectory integrate_forward(const Matrix& A, const Matrix& B,
                                           const ControlSignal& u, const Vector& x0,
                                           const TimeGrid& grid);

/// Forward solve of the homogeneous system x' = A x.
[[nodiscard]] Trajectory integrate_homogeneous(const Matrix& A, const Vector& x0,
                                               const TimeGrid& grid);

/// Terminal-value problem p' = -A^T p, p(T) = p_T, solved with the same
/// one-step scheme on the reversed time variable. Node n_steps equals p_T.
[[nodiscard]] Trajectory integrate_adjoint(const Matrix& A, const Vector& p_T,
                                           const TimeGrid& grid);

/// Exact stepwise propagation of x' = A x + B u with u held constant on
/// each interval (left sample), via the matrix exponential of the
/// (N+M)-block-augmented step matrix.
[[nodiscard]] Trajectory propagate_exact(const Matrix& A, const Matrix& B,
                                         const ControlSignal& u, const Vector& x0,
                                         const TimeGrid& grid);

/// Control-space trace of the adjoint solve with terminal datum p_T: the
/// exact transpose of the forward one-step input map under the trapezoidal
/// inner product. For every input zeta,
///   l2_inner(zeta, adjoint_input_trace(A, B, q, grid)) == <z(T), q>
/// holds to roundoff, where z solves z' = A z + B zeta, z(0) = 0 via
/// integrate_forward. Interior nodes carry the stage-weighted combination
/// B^T(phiP(A^T) p_{j+1} + phiQ(A^T) p_j) of the adjoint path; the two
/// boundary nodes compensate the half trapezoid weights.
[[nodiscard]] ControlSignal adjoint_input_trace(const Matrix& A, const Matrix& B,
                                                const Vector& p_T, const TimeGrid& grid);

} // namespace simcon
