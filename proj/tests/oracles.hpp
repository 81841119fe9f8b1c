#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "simcon/objective.hpp"
#include "simcon/system.hpp"

namespace simcon::oracles {

/// Kalman rank test: controllable iff [B, AB, ..., A^{n-1}B] has full
/// numerical rank. Brute-force alternative route to the Hautus check.
inline bool kalman_controllable(const Matrix& a, const Matrix& b, double rank_tol = 1e-10) {
    const auto n = a.rows();
    const auto m = b.cols();
    Matrix ctrb(n, n * m);
    Matrix power = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrb.middleCols(k * m, m) = power;
        power = a * power;
    }
    Eigen::JacobiSVD<Matrix> svd(ctrb);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * sv(0))
            ++rank;
    return rank == n;
}

/// Central finite difference of the functional along a direction; exact for
/// the quadratic objective up to roundoff.
inline double directional_derivative(Objective& obj, const ControlSignal& u,
                                     const ControlSignal& dir, double h = 1e-4) {
    ControlSignal up(u.grid, u.values + h * dir.values);
    ControlSignal dn(u.grid, u.values - h * dir.values);
    return (obj.evaluate(up).value - obj.evaluate(dn).value) / (2.0 * h);
}

/// Deterministic pseudo-random control for reproducible tests.
inline ControlSignal random_signal(const TimeGrid& grid, int m, std::uint64_t seed,
                                   double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    Matrix v(grid.n_nodes(), m);
    for (Eigen::Index r = 0; r < v.rows(); ++r)
        for (Eigen::Index c = 0; c < v.cols(); ++c)
            v(r, c) = amplitude * (static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0);
    return ControlSignal(grid, std::move(v));
}

inline Vector random_vector(int n, std::uint64_t seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = amplitude * (static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0);
    return v;
}

} // namespace simcon::oracles
