#include "simcon/integrate.hpp"

#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace simcon {

namespace {

void check_dims(const Matrix& A, const Matrix& B, Eigen::Index m, const Vector& x0) {
    if (A.rows() != A.cols())
        throw ValidationError("integrate: A must be square");
    if (B.rows() != A.rows())
        throw ValidationError("integrate: B has " + std::to_string(B.rows()) +
                              " rows, expected " + std::to_string(A.rows()));
    if (B.cols() != m)
        throw ValidationError("integrate: control has " + std::to_string(m) +
                              " components, B has " + std::to_string(B.cols()) + " columns");
    if (x0.size() != A.rows())
        throw ValidationError("integrate: x0 dimension mismatch");
    if (!x0.allFinite())
        throw ValidationError("integrate: non-finite x0");
}

void check_node_finite(const Vector& x, int node) {
    if (!x.allFinite())
        throw SolverError("integrator diverged: non-finite value at node " + std::to_string(node));
}

// One classical RK4 step for x' = A x + f(t) given the input term at the
// three stage times (left node, midpoint, right node).
Vector rk4_step(const Matrix& A, const Vector& x, double h,
                const Vector& f0, const Vector& fm, const Vector& f1) {
    const Vector k1 = A * x + f0;
    const Vector k2 = A * (x + (0.5 * h) * k1) + fm;
    const Vector k3 = A * (x + (0.5 * h) * k2) + fm;
    const Vector k4 = A * (x + h * k3) + f1;
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector rk4_step_hom(const Matrix& A, const Vector& x, double h) {
    const Vector k1 = A * x;
    const Vector k2 = A * (x + (0.5 * h) * k1);
    const Vector k3 = A * (x + (0.5 * h) * k2);
    const Vector k4 = A * (x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

Trajectory integrate_forward(const Matrix& A, const Matrix& B,
                             const ControlSignal& u, const Vector& x0,
                             const TimeGrid& grid) {
    check_dims(A, B, u.values.cols(), x0);
    if (!(u.grid == grid))
        throw ValidationError("integrate_forward: control grid mismatch");

    const int n = grid.n_steps();
    const double h = grid.step();

    // B u_j for every node in one product; row j holds (B u_j)^T.
    const Matrix BU = u.values * B.transpose();

    Matrix out(grid.n_nodes(), A.rows());
    Vector x = x0;
    out.row(0) = x.transpose();
    for (int j = 0; j < n; ++j) {
        const Vector f0 = BU.row(j).transpose();
        const Vector f1 = BU.row(j + 1).transpose();
        const Vector fm = 0.5 * (f0 + f1);
        x = rk4_step(A, x, h, f0, fm, f1);
        check_node_finite(x, j + 1);
        out.row(j + 1) = x.transpose();
    }
    return Trajectory(grid, std::move(out));
}

Trajectory integrate_homogeneous(const Matrix& A, const Vector& x0, const TimeGrid& grid) {
    if (A.rows() != A.cols() || x0.size() != A.rows())
        throw ValidationError("integrate_homogeneous: dimension mismatch");
    const int n = grid.n_steps();
    const double h = grid.step();
    Matrix out(grid.n_nodes(), A.rows());
    Vector x = x0;
    out.row(0) = x.transpose();
    for (int j = 0; j < n; ++j) {
        x = rk4_step_hom(A, x, h);
        check_node_finite(x, j + 1);
        out.row(j + 1) = x.transpose();
    }
    return Trajectory(grid, std::move(out));
}

Trajectory integrate_adjoint(const Matrix& A, const Vector& p_T, const TimeGrid& grid) {
    if (A.rows() != A.cols() || p_T.size() != A.rows())
        throw ValidationError("integrate_adjoint: dimension mismatch");
    if (!p_T.allFinite())
        throw ValidationError("integrate_adjoint: non-finite terminal value");

    // On the reversed variable s = T - t the problem becomes q' = A^T q,
    // q(0) = p_T; solve forward and reverse the nodes.
    const Matrix At = A.transpose();
    const int n = grid.n_steps();
    const double h = grid.step();
    Matrix out(grid.n_nodes(), A.rows());
    Vector q = p_T;
    out.row(n) = q.transpose();
    for (int m = 0; m < n; ++m) {
        q = rk4_step_hom(At, q, h);
        check_node_finite(q, n - m - 1);
        out.row(n - m - 1) = q.transpose();
    }
    return Trajectory(grid, std::move(out));
}

Trajectory propagate_exact(const Matrix& A, const Matrix& B,
                           const ControlSignal& u, const Vector& x0,
                           const TimeGrid& grid) {
    check_dims(A, B, u.values.cols(), x0);
    if (!(u.grid == grid))
        throw ValidationError("propagate_exact: control grid mismatch");

    const auto N = A.rows();
    const auto M = B.cols();
    const double h = grid.step();

    // exp(h [A B; 0 0]) = [E11 E12; 0 I] with E11 = e^{Ah} and
    // E12 = \int_0^h e^{A(h-s)} B ds, so one interval with constant input
    // advances exactly as x+ = E11 x + E12 u.
    Matrix blk = Matrix::Zero(N + M, N + M);
    blk.topLeftCorner(N, N) = h * A;
    blk.topRightCorner(N, M) = h * B;
    const Matrix E = blk.exp();
    const Matrix E11 = E.topLeftCorner(N, N);
    const Matrix E12 = E.topRightCorner(N, M);

    Matrix out(grid.n_nodes(), N);
    Vector x = x0;
    out.row(0) = x.transpose();
    for (int j = 0; j < grid.n_steps(); ++j) {
        x = E11 * x + E12 * u.values.row(j).transpose();
        check_node_finite(x, j + 1);
        out.row(j + 1) = x.transpose();
    }
    return Trajectory(grid, std::move(out));
}

ControlSignal adjoint_input_trace(const Matrix& A, const Matrix& B,
                                  const Vector& p_T, const TimeGrid& grid) {
    if (A.rows() != A.cols() || B.rows() != A.rows())
        throw ValidationError("adjoint_input_trace: dimension mismatch");
    if (p_T.size() != A.rows())
        throw ValidationError("adjoint_input_trace: terminal value dimension mismatch");

    const Matrix At = A.transpose();
    const Matrix Bt = B.transpose();
    const int n = grid.n_steps();
    const double h = grid.step();

    // Stage-weight polynomials of the forward step x+ = R x + h(P u_j + Q u_{j+1}):
    //   phiP(v) = v/2 + (h/3) A^T v + (h^2/8) A^T^2 v + (h^3/24) A^T^3 v
    //   phiQ(v) = v/2 + (h/6) A^T v + (h^2/24) A^T^2 v
    const auto phi_pair = [&](const Vector& p, Vector& phiP, Vector& phiQ) {
        const Vector a1 = At * p;
        const Vector a2 = At * a1;
        const Vector a3 = At * a2;
        phiP = 0.5 * p + (h / 3.0) * a1 + (h * h / 8.0) * a2 + (h * h * h / 24.0) * a3;
        phiQ = 0.5 * p + (h / 6.0) * a1 + (h * h / 24.0) * a2;
    };

    Matrix trace(grid.n_nodes(), B.cols());

    Vector p = p_T; // adjoint sweep p_j = R(hA^T) p_{j+1}, walking j = n..0
    Vector phiP_next, phiQ;
    phi_pair(p, phiP_next, phiQ);
    trace.row(n) = (2.0 * (Bt * phiQ)).transpose();

    for (int j = n - 1; j >= 1; --j) {
        p = rk4_step_hom(At, p, h);
        check_node_finite(p, j);
        Vector phiP;
        phi_pair(p, phiP, phiQ);
        trace.row(j) = (Bt * (phiP_next + phiQ)).transpose();
        phiP_next = phiP;
    }
    trace.row(0) = (2.0 * (Bt * phiP_next)).transpose();

    return ControlSignal(grid, std::move(trace));
}

} // namespace simcon
