#pragma once

#include <complex>
#include <optional>

#include "simcon/system.hpp"

namespace simcon {

struct ControllabilityReport {
    bool controllable = false;
    std::optional<std::complex<double>> failing_eigenvalue;
    int rank_found = 0;
    int rank_required = 0;
    double tolerance_used = 0.0; // absolute singular-value threshold at the reported test
};

/// Hautus test: controllable iff the compound [calA - lambda I, calB] has
/// full numerical rank at every eigenvalue lambda of calA. rank_tol is
/// relative to the largest singular value of each compound; the first
/// failure is recorded.
[[nodiscard]] ControllabilityReport hautus_check(const AugmentedSystem& aug,
                                                 double rank_tol = 1e-10);

/// W = int_0^T e^{At} B B^T e^{A^T t} dt by trapezoidal quadrature of the
/// exponential integrand (stepped with the matrix exponential of one
/// interval); symmetrized as (W + W^T)/2 on return.
[[nodiscard]] Matrix gramian(const AugmentedSystem& aug, double t_final, int quad_steps = 400);

/// Ratio of the largest to the smallest eigenvalue of a symmetric PSD
/// matrix; +inf when the smallest is at or below rank_tol times the largest.
[[nodiscard]] double condition_number(const Matrix& w, double rank_tol = 1e-10);

} // namespace simcon
