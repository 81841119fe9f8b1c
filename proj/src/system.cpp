#include "simcon/system.hpp"

#include <utility>

#include "simcon/errors.hpp"

namespace simcon {

ParametricSystem::ParametricSystem(int n, int m, Matrix b, ParameterSet params,
                                   std::function<Matrix(double)> family, BuilderInfo info)
    : n_(n), m_(m), b_(std::move(b)), params_(std::move(params)),
      family_(std::move(family)), info_(std::move(info)) {
    validate();
}

ParametricSystem::ParametricSystem(int n, int m, Matrix b, ParameterSet params,
                                   std::vector<Matrix> matrices, BuilderInfo info)
    : n_(n), m_(m), b_(std::move(b)), params_(std::move(params)),
      matrices_(std::move(matrices)), info_(std::move(info)) {
    if (matrices_.size() != params_.size())
        throw ValidationError("ParametricSystem: " + std::to_string(matrices_.size()) +
                              " matrices for " + std::to_string(params_.size()) + " parameters");
    validate();
}

void ParametricSystem::validate() const {
    if (n_ < 1 || m_ < 1)
        throw ValidationError("ParametricSystem: dimensions must be positive");
    if (b_.rows() != n_ || b_.cols() != m_)
        throw ValidationError("ParametricSystem: B is " + std::to_string(b_.rows()) + "x" +
                              std::to_string(b_.cols()) + ", expected " + std::to_string(n_) +
                              "x" + std::to_string(m_));
    if (!b_.allFinite())
        throw ValidationError("ParametricSystem: non-finite entry in B");
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const Matrix a = dynamics(i);
        if (a.rows() != n_ || a.cols() != n_)
            throw ValidationError("ParametricSystem: A_nu for parameter " + std::to_string(i) +
                                  " is not " + std::to_string(n_) + "x" + std::to_string(n_));
        if (!a.allFinite())
            throw ValidationError("ParametricSystem: non-finite entry in A_nu for parameter " +
                                  std::to_string(i));
    }
}

Matrix ParametricSystem::dynamics(std::size_t index) const {
    if (index >= params_.size())
        throw ValidationError("ParametricSystem: parameter index " + std::to_string(index) +
                              " out of range");
    if (!matrices_.empty())
        return matrices_[index];
    return family_(params_.value(index));
}

ParametricSystem build_cart_pendulum(double cart_mass, ParameterSet params,
                                     double pendulum_length) {
    if (!(cart_mass > 0.0))
        throw ValidationError("build_cart_pendulum: cart mass must be positive");
    Matrix b(4, 1);
    b << 0.0, 1.0, 0.0, -1.0;
    auto family = [cart_mass](double nu) {
        Matrix a = Matrix::Zero(4, 4);
        a(0, 2) = 1.0;
        a(1, 1) = -nu / cart_mass;
        a(2, 3) = 1.0;
        a(3, 1) = (nu + cart_mass) / cart_mass;
        return a;
    };
    BuilderInfo info{"cart_pendulum", cart_mass, pendulum_length};
    return ParametricSystem(4, 1, std::move(b), std::move(params), std::move(family), std::move(info));
}

ParametricSystem build_brunovsky(int n, ParameterSet params) {
    if (n < 2)
        throw ValidationError("build_brunovsky: dimension must be at least 2");
    Matrix b = Matrix::Ones(n, 1);
    auto family = [n](double nu) {
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i + 1 < n; ++i)
            a(i, i + 1) = 1.0;
        a(n - 1, 0) = -nu;
        return a;
    };
    BuilderInfo info{"brunovsky", 0.0, 0.0};
    return ParametricSystem(n, 1, std::move(b), std::move(params), std::move(family), std::move(info));
}

AugmentedSystem AugmentedSystem::from_blocks(const std::vector<Matrix>& blocks, const Matrix& b) {
    if (blocks.empty())
        throw ValidationError("AugmentedSystem: needs at least one block");
    const auto n = blocks.front().rows();
    for (const Matrix& blk : blocks)
        if (blk.rows() != n || blk.cols() != n)
            throw ValidationError("AugmentedSystem: blocks must be square and equally sized");
    if (b.rows() != n)
        throw ValidationError("AugmentedSystem: B row count does not match block size");

    const auto k = static_cast<Eigen::Index>(blocks.size());
    AugmentedSystem aug;
    aug.block_dim = static_cast<int>(n);
    aug.block_count = static_cast<int>(k);
    aug.cal_a = Matrix::Zero(n * k, n * k);
    aug.cal_b = Matrix::Zero(n * k, b.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        aug.cal_a.block(i * n, i * n, n, n) = blocks[static_cast<std::size_t>(i)];
        aug.cal_b.middleRows(i * n, n) = b;
    }
    return aug;
}

AugmentedSystem assemble_augmented(const ParametricSystem& sys) {
    std::vector<Matrix> blocks;
    blocks.reserve(sys.family_size());
    for (std::size_t i = 0; i < sys.family_size(); ++i)
        blocks.push_back(sys.dynamics(i));
    return AugmentedSystem::from_blocks(blocks, sys.input_matrix());
}

} // namespace simcon
