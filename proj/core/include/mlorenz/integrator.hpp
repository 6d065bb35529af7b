// integrator.hpp
// Fixed-step explicit Runge-Kutta of order 8 (Cooper-Verner, 11 stages).
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlorenz {

using State = std::vector<double>;

/// rhs(t, s, ds) writes ds/dt into ds.
using VectorField = std::function<void(double, std::span<const double>, std::span<double>)>;

inline constexpr double kDivergenceLimit = 1e8;

struct IntegrationSpec {
    double dt = 1e-3;
    std::int64_t n_steps = 0;
    std::int64_t record_every = 1;
    double t0 = 0.0;

    double time_at(std::int64_t step) const { return t0 + static_cast<double>(step) * dt; }
};

void validate(const IntegrationSpec& spec);

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    std::size_t size() const { return times.size(); }
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time, std::int64_t step = -1)
        : std::runtime_error(what), time_(time), step_(step) {}

    double time() const { return time_; }
    std::int64_t step() const { return step_; }

private:
    double time_;
    std::int64_t step_;
};

namespace detail {

struct Rk8Tableau {
    static constexpr int kStages = 11;
    std::array<double, kStages> c{};
    std::array<std::array<double, kStages>, kStages> a{};
    std::array<double, kStages> b{};
};

const Rk8Tableau& cooper_verner_tableau();

}  // namespace detail

/// Throws IntegrationError if any component is non-finite or exceeds `limit`.
void check_state(std::span<const double> state, double time, double limit = kDivergenceLimit);

/// Reusable stage storage for one state dimension.
class Rk8Stepper {
public:
    explicit Rk8Stepper(std::size_t dim)
        : dim_(dim), k_(detail::Rk8Tableau::kStages, State(dim)), stage_(dim) {}

    std::size_t dim() const { return dim_; }

    /// Advances `state` in place from t to t + dt. No finiteness check.
    template <typename Rhs>
    void step(Rhs&& rhs, double t, double dt, std::span<double> state) {
        const auto& tab = detail::cooper_verner_tableau();
        constexpr int S = detail::Rk8Tableau::kStages;
        for (int i = 0; i < S; ++i) {
            for (std::size_t n = 0; n < dim_; ++n) {
                double acc = 0.0;
                for (int j = 0; j < i; ++j) acc += tab.a[i][j] * k_[j][n];
                stage_[n] = state[n] + dt * acc;
            }
            rhs(t + tab.c[i] * dt, std::span<const double>(stage_), std::span<double>(k_[i]));
        }
        for (std::size_t n = 0; n < dim_; ++n) {
            double acc = 0.0;
            for (int i = 0; i < S; ++i) acc += tab.b[i] * k_[i][n];
            state[n] += dt * acc;
        }
    }

private:
    std::size_t dim_;
    std::vector<State> k_;
    State stage_;
};

/// One RK8 step; throws IntegrationError (at t + dt) on a non-finite result.
State rk8_step(const VectorField& rhs, std::span<const double> state, double t, double dt);

/// n_steps RK8 steps from spec.t0, recording the initial state and every
/// record_every-th state after it. Aborts when a component leaves
/// [-kDivergenceLimit, kDivergenceLimit].
template <typename Rhs>
Trajectory integrate(Rhs&& rhs, std::span<const double> state0, const IntegrationSpec& spec) {
    validate(spec);
    Trajectory traj;
    const auto n_records = static_cast<std::size_t>(spec.n_steps / spec.record_every) + 1;
    traj.times.reserve(n_records);
    traj.states.reserve(n_records);

    State s(state0.begin(), state0.end());
    check_state(s, spec.t0);
    traj.times.push_back(spec.t0);
    traj.states.push_back(s);

    Rk8Stepper stepper(s.size());
    for (std::int64_t k = 0; k < spec.n_steps; ++k) {
        const double t = spec.time_at(k);
        stepper.step(rhs, t, spec.dt, s);
        try {
            check_state(s, spec.time_at(k + 1));
        } catch (const IntegrationError& e) {
            throw IntegrationError(std::string(e.what()) + " at step " + std::to_string(k + 1),
                                   e.time(), k + 1);
        }
        if ((k + 1) % spec.record_every == 0) {
            traj.times.push_back(spec.time_at(k + 1));
            traj.states.push_back(s);
        }
    }
    return traj;
}

}  // namespace mlorenz
