#pragma once

#include <cstddef>
#include <vector>

namespace simcon {

/// Finite parameter sample with probability masses. Weights are
/// nonnegative and sum to 1 within 1e-12; values are pairwise distinct.
class ParameterSet {
public:
    ParameterSet(std::vector<double> values, std::vector<double> weights);

    /// Uniform masses: every weight is the same single rounding of 1/count.
    static ParameterSet uniform(std::vector<double> values);

    /// count equally spaced values on [lo, hi] with uniform masses;
    /// count == 1 collapses to {lo}.
    static ParameterSet uniform_grid(double lo, double hi, int count);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double value(std::size_t i) const { return values_[i]; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> values_;
    std::vector<double> weights_;
};

} // namespace simcon
