#pragma once

#include <string>

namespace simcon {

/// Convergence-rate constant of gradient descent, ln((rho+1)/(rho-1)),
/// for a problem with Gramian condition number rho > 1. Strictly
/// decreasing in rho; guarded against overflow as rho -> 1+.
[[nodiscard]] double rate_constant_gd(double rho);

/// Conjugate-gradient counterpart, ln((sqrt(rho)+1)/(sqrt(rho)-1));
/// always larger than rate_constant_gd for rho > 1.
[[nodiscard]] double rate_constant_cg(double rho);

/// Sample-set size above which the stochastic methods become competitive:
/// 1/(eps ln(1/eps)) with unit big-O constant, for eps in (0, 1/e).
[[nodiscard]] double sgd_threshold(double epsilon);

/// Predicted total solve counts in relative coupled-solve units (the
/// asymptotic big-O constants are normalized to 1).
struct CostPrediction {
    double c_gd = 0.0;
    double c_cg = 0.0;
    double cost_gd = 0.0;  // K ln(1/eps) / c_gd
    double cost_cg = 0.0;  // K ln(1/eps) / c_cg
    double sgd_cost = 0.0; // 1/eps
    double threshold_k = 0.0;
    std::string recommendation; // "cg" or "sgd/csg", ties to cg
};

[[nodiscard]] CostPrediction predicted_costs(double k_size, double epsilon, double rho);

} // namespace simcon
