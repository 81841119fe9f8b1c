#pragma once

#include <functional>
#include <string>
#include <vector>

#include "simcon/parameters.hpp"
#include "simcon/signal.hpp"

namespace simcon {

/// How a family was constructed; carried along for serialization and
/// reporting. pendulum_length is accepted as metadata only: the printed
/// cart-pendulum matrix does not contain it.
struct BuilderInfo {
    std::string name; // "cart_pendulum", "brunovsky", "explicit"
    double cart_mass = 0.0;
    double pendulum_length = 0.0;
};

/// Family nu -> A_nu of N x N systems sharing one N x M input matrix B.
class ParametricSystem {
public:
    ParametricSystem(int n, int m, Matrix b, ParameterSet params,
                     std::function<Matrix(double)> family, BuilderInfo info);
    ParametricSystem(int n, int m, Matrix b, ParameterSet params,
                     std::vector<Matrix> matrices, BuilderInfo info);

    [[nodiscard]] int state_dim() const { return n_; }
    [[nodiscard]] int input_dim() const { return m_; }
    [[nodiscard]] const Matrix& input_matrix() const { return b_; }
    [[nodiscard]] const ParameterSet& params() const { return params_; }
    [[nodiscard]] std::size_t family_size() const { return params_.size(); }
    [[nodiscard]] const BuilderInfo& builder() const { return info_; }
    [[nodiscard]] bool is_explicit() const { return !matrices_.empty(); }
    [[nodiscard]] const std::vector<Matrix>& explicit_matrices() const { return matrices_; }

    /// A_{nu_i} for the i-th parameter of the set.
    [[nodiscard]] Matrix dynamics(std::size_t index) const;

private:
    void validate() const;

    int n_;
    int m_;
    Matrix b_;
    ParameterSet params_;
    std::function<Matrix(double)> family_;
    std::vector<Matrix> matrices_;
    BuilderInfo info_;
};

/// Linearized cart-inverted pendulum family: N=4, M=1, nu is the pendulum
/// tip mass, states (position, velocity, angle, angular velocity).
[[nodiscard]] ParametricSystem build_cart_pendulum(double cart_mass, ParameterSet params,
                                                   double pendulum_length = 1.0);

/// Companion family of x^(N) + nu x = 0: superdiagonal of ones,
/// A(N,1) = -nu, B a column of ones.
[[nodiscard]] ParametricSystem build_brunovsky(int n, ParameterSet params);

/// Block-diagonal stacking of all realizations sharing one control.
struct AugmentedSystem {
    Matrix cal_a;        // (N*K) x (N*K); block i equals A_{nu_i}
    Matrix cal_b;        // (N*K) x M; every block equals B
    int block_dim = 0;   // N
    int block_count = 0; // K

    static AugmentedSystem from_blocks(const std::vector<Matrix>& blocks, const Matrix& b);
};

[[nodiscard]] AugmentedSystem assemble_augmented(const ParametricSystem& sys);

} // namespace simcon
