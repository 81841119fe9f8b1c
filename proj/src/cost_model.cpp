#include "simcon/cost_model.hpp"

#include <cmath>
#include <limits>

#include "simcon/errors.hpp"

namespace simcon {

namespace {

double guarded(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

} // namespace

double rate_constant_gd(double rho) {
    if (!(rho > 1.0))
        throw ValidationError("rate_constant_gd: requires rho > 1");
    return guarded(std::log((rho + 1.0) / (rho - 1.0)));
}

double rate_constant_cg(double rho) {
    if (!(rho > 1.0))
        throw ValidationError("rate_constant_cg: requires rho > 1");
    const double s = std::sqrt(rho);
    return guarded(std::log((s + 1.0) / (s - 1.0)));
}

double sgd_threshold(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < std::exp(-1.0)))
        throw ValidationError("sgd_threshold: requires epsilon in (0, 1/e)");
    return 1.0 / (epsilon * std::log(1.0 / epsilon));
}

CostPrediction predicted_costs(double k_size, double epsilon, double rho) {
    if (!(k_size >= 1.0))
        throw ValidationError("predicted_costs: requires K >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ValidationError("predicted_costs: requires epsilon in (0, 1)");
    if (!(rho > 1.0))
        throw ValidationError("predicted_costs: requires rho > 1");

    CostPrediction p;
    p.c_gd = rate_constant_gd(rho);
    p.c_cg = rate_constant_cg(rho);
    const double accuracy = std::log(1.0 / epsilon);
    p.cost_gd = guarded(k_size * accuracy / p.c_gd);
    p.cost_cg = guarded(k_size * accuracy / p.c_cg);
    p.sgd_cost = 1.0 / epsilon;
    p.threshold_k = 1.0 / (epsilon * accuracy);
    p.recommendation = p.sgd_cost < p.cost_cg ? "sgd/csg" : "cg";
    return p;
}

} // namespace simcon
