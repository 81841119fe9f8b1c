#pragma once

#include "simcon/errors.hpp"

namespace simcon {

/// Uniform grid of n_steps intervals on [0, t_final].
class TimeGrid {
public:
    TimeGrid(double t_final, int n_steps) : t_final_(t_final), n_steps_(n_steps) {
        if (!(t_final > 0.0))
            throw ValidationError("TimeGrid: t_final must be positive");
        if (n_steps < 2)
            throw ValidationError("TimeGrid: n_steps must be at least 2");
        step_ = t_final_ / n_steps_;
    }

    [[nodiscard]] double t_final() const { return t_final_; }
    [[nodiscard]] int n_steps() const { return n_steps_; }
    [[nodiscard]] int n_nodes() const { return n_steps_ + 1; }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] double node(int i) const { return i == n_steps_ ? t_final_ : step_ * i; }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
        return a.t_final_ == b.t_final_ && a.n_steps_ == b.n_steps_;
    }

private:
    double t_final_;
    int n_steps_;
    double step_;
};

} // namespace simcon
