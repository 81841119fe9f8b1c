#include "simcon/parameters.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>

#include "simcon/errors.hpp"

namespace simcon {

ParameterSet::ParameterSet(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty())
        throw ValidationError("ParameterSet: needs at least one parameter");
    if (values_.size() != weights_.size())
        throw ValidationError("ParameterSet: " + std::to_string(values_.size()) + " values but " +
                              std::to_string(weights_.size()) + " weights");

    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
            throw ValidationError("ParameterSet: weight " + std::to_string(i) + " is negative or non-finite");
        if (!std::isfinite(values_[i]))
            throw ValidationError("ParameterSet: value " + std::to_string(i) + " is non-finite");
        sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("ParameterSet: weights sum to " + std::to_string(sum) + ", expected 1");

    std::unordered_set<double> seen;
    for (double v : values_)
        if (!seen.insert(v).second)
            throw ValidationError("ParameterSet: duplicate parameter value " + std::to_string(v));
}

ParameterSet ParameterSet::uniform(std::vector<double> values) {
    const std::size_t count = values.size();
    const double w = count == 0 ? 0.0 : 1.0 / static_cast<double>(count);
    return ParameterSet(std::move(values), std::vector<double>(count, w));
}

ParameterSet ParameterSet::uniform_grid(double lo, double hi, int count) {
    if (count < 1)
        throw ValidationError("ParameterSet: grid needs at least one point");
    std::vector<double> values(static_cast<std::size_t>(count));
    if (count == 1) {
        values[0] = lo;
    } else {
        const double span = hi - lo;
        for (int i = 0; i < count; ++i)
            values[static_cast<std::size_t>(i)] =
                i == count - 1 ? hi : lo + span * static_cast<double>(i) / (count - 1);
    }
    return uniform(std::move(values));
}

} // namespace simcon
