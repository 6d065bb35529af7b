#include "mlorenz/integrator.hpp"

#include <fmt/format.h>

namespace mlorenz {

namespace detail {

namespace {

Rk8Tableau make_cooper_verner() {
    const double s = std::sqrt(21.0);
    Rk8Tableau t;
    auto& a = t.a;
    a[1][0] = 1.0 / 2.0;

    a[2][0] = 1.0 / 4.0;
    a[2][1] = 1.0 / 4.0;

    a[3][0] = 1.0 / 7.0;
    a[3][1] = (-7.0 - 3.0 * s) / 98.0;
    a[3][2] = (21.0 + 5.0 * s) / 49.0;

    a[4][0] = (11.0 + s) / 84.0;
    a[4][2] = (18.0 + 4.0 * s) / 63.0;
    a[4][3] = (21.0 - s) / 252.0;

    a[5][0] = (5.0 + s) / 48.0;
    a[5][2] = (9.0 + s) / 36.0;
    a[5][3] = (-231.0 + 14.0 * s) / 360.0;
    a[5][4] = (63.0 - 7.0 * s) / 80.0;

    a[6][0] = (10.0 - s) / 42.0;
    a[6][2] = (-432.0 + 92.0 * s) / 315.0;
    a[6][3] = (633.0 - 145.0 * s) / 90.0;
    a[6][4] = (-504.0 + 115.0 * s) / 70.0;
    a[6][5] = (63.0 - 13.0 * s) / 35.0;

    a[7][0] = 1.0 / 14.0;
    a[7][4] = (14.0 - 3.0 * s) / 126.0;
    a[7][5] = (13.0 - 3.0 * s) / 63.0;
    a[7][6] = 1.0 / 9.0;

    a[8][0] = 1.0 / 32.0;
    a[8][4] = (91.0 - 21.0 * s) / 576.0;
    a[8][5] = 11.0 / 72.0;
    a[8][6] = (-385.0 - 75.0 * s) / 1152.0;
    a[8][7] = (63.0 + 13.0 * s) / 128.0;

    a[9][0] = 1.0 / 14.0;
    a[9][4] = 1.0 / 9.0;
    a[9][5] = (-733.0 - 147.0 * s) / 2205.0;
    a[9][6] = (515.0 + 111.0 * s) / 504.0;
    a[9][7] = (-51.0 - 11.0 * s) / 56.0;
    a[9][8] = (132.0 + 28.0 * s) / 245.0;

    a[10][4] = (-42.0 + 7.0 * s) / 18.0;
    a[10][5] = (-18.0 + 28.0 * s) / 45.0;
    a[10][6] = (-273.0 - 53.0 * s) / 72.0;
    a[10][7] = (301.0 + 53.0 * s) / 72.0;
    a[10][8] = (28.0 - 28.0 * s) / 45.0;
    a[10][9] = (49.0 - 7.0 * s) / 18.0;

    t.b = {9.0 / 180.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 49.0 / 180.0, 64.0 / 180.0, 49.0 / 180.0,
           9.0 / 180.0};

    // Abscissae from the row sums (0, 1/2, 1/2, (7+s)/14, ..., 1).
    for (int i = 0; i < Rk8Tableau::kStages; ++i) {
        double c = 0.0;
        for (int j = 0; j < i; ++j) c += a[i][j];
        t.c[i] = c;
    }
    return t;
}

}  // namespace

const Rk8Tableau& cooper_verner_tableau() {
    static const Rk8Tableau tableau = make_cooper_verner();
    return tableau;
}

}  // namespace detail

void validate(const IntegrationSpec& spec) {
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) {
        throw std::invalid_argument("time step dt must be positive and finite");
    }
    if (spec.n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
    if (spec.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

void check_state(std::span<const double> state, double time, double limit) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double v = state[i];
        if (!std::isfinite(v)) {
            throw IntegrationError(
                fmt::format("non-finite state component {} at t = {}", i, time), time);
        }
        if (std::abs(v) > limit) {
            throw IntegrationError(
                fmt::format("state component {} = {:g} exceeds divergence limit {:g} at t = {}",
                            i, v, limit, time),
                time);
        }
    }
}

State rk8_step(const VectorField& rhs, std::span<const double> state, double t, double dt) {
    State s(state.begin(), state.end());
    Rk8Stepper stepper(s.size());
    stepper.step(rhs, t, dt, s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i])) {
            throw IntegrationError(
                fmt::format("non-finite state component {} at t = {}", i, t + dt), t + dt);
        }
    }
    return s;
}

}  // namespace mlorenz
