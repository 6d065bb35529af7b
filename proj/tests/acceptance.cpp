// acceptance.cpp
// One line per acceptance criterion: "[PASS] n name: detail" or "[FAIL] ...".
// Usage: acceptance [criterion]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <mlorenz/algebra.hpp>
#include <mlorenz/analysis.hpp>
#include <mlorenz/dynamics.hpp>
#include <mlorenz/integrator.hpp>
#include <mlorenz/models.hpp>

#include "cli.hpp"
#include "oracles.hpp"

using namespace mlorenz;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const LorenzParams kClassic{10.0, 28.0, 8.0 / 3.0};

double field_error(const Vec3& a, const Vec3& b) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

Outcome llg_identity() {
    std::mt19937_64 rng(20240101);
    std::uniform_real_distribution<double> sig(0.5, 20.0), rr(0.0, 60.0), bb(0.2, 5.0);
    double worst = 0.0;
    for (int pi = 0; pi < 20; ++pi) {
        const LorenzParams p{sig(rng), rr(rng), bb(rng)};
        const auto q = llg_to_lorenz(p);
        for (int k = 0; k < 1000; ++k) {
            const auto v = oracle::random_vector(rng, 3, 40.0);
            const Vec3 s{v[0], v[1], v[2]};
            const auto dl = lorenz_rhs(s, p);
            const auto dm = llg_rhs(map_state_lorenz_to_llg(s, p), q);
            const double scale = std::max({1.0, std::abs(dl[0]), std::abs(dl[1]), std::abs(dl[2])});
            worst = std::max(worst, field_error(dl, dm) / scale);
        }
    }

    std::ostringstream out, err;
    const int code = cli::run_cli({"map-llg", "--sigma", "10", "--r", "28", "--b",
                                   "2.6666666666666665", "--horizon", "5", "--format", "json"},
                                  out, err);
    if (code != 0) return {false, fmt::format("map-llg exited {}: {}", code, err.str())};
    const double deviation = nlohmann::json::parse(out.str()).at("max_deviation").get<double>();
    return {worst <= 1e-12 && deviation < 1e-9,
            fmt::format("max relative field mismatch {:.2e} (<= 1e-12) over 20 x 1000 points; "
                        "5-unit trajectory deviation {:.2e} (< 1e-9)",
                        worst, deviation)};
}

Outcome d_tensor_oracle() {
    const auto u2 = structure_tensors(u2_basis());
    double d_err = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            for (std::size_t c = 0; c < 4; ++c)
                d_err = std::max(d_err, std::abs(u2.d(a, b, c) - oracle::u2_d_closed_form(a, b, c)));
    const auto su2 = structure_tensors(su2_basis());
    const double su2_d = su2.d.max_abs();
    const double anti = std::max(antisymmetry_residual(u2.f), antisymmetry_residual(su2.f));
    const double jac = std::max(jacobi_residual(u2.f), jacobi_residual(su2.f));
    return {d_err <= 1e-12 && su2_d <= 1e-12 && is_anomaly_safe(su2.d) && anti <= 1e-10 &&
                jac <= 1e-10,
            fmt::format("u(2) d vs closed form {:.1e}; max|d| su(2) {:.1e}; f antisymmetry "
                        "{:.1e}; Jacobi {:.1e}",
                        d_err, su2_d, anti, jac)};
}

Outcome integrator_order() {
    auto error_at = [](double dt) {
        IntegrationSpec spec;
        spec.dt = dt;
        spec.n_steps = std::llround(1.0 / dt);
        spec.record_every = spec.n_steps;
        const auto traj = integrate(
            [](double, std::span<const double> s, std::span<double> ds) { ds[0] = -s[0]; },
            State{1.0}, spec);
        return std::abs(traj.states.back()[0] - std::exp(-1.0));
    };
    const double e1 = error_at(0.5), e2 = error_at(0.25), e3 = error_at(0.125);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    return {std::min(p1, p2) >= 7.5,
            fmt::format("s' = -s on [0, 1], dt 0.5 -> 0.25 -> 0.125: errors {:.2e}, {:.2e}, "
                        "{:.2e}; orders {:.2f}, {:.2f} (>= 7.5)",
                        e1, e2, e3, p1, p2)};
}

Outcome classical_lyapunov() {
    const auto model = LorenzModel::classical();
    auto ensemble = [&](double burn_in, double dt) {
        LyapunovOptions o;
        o.horizon = 2000.0;
        o.dt = dt;
        o.burn_in_fraction = burn_in;
        return estimate_lyapunov(model, kClassic, o, 1, 8, 0);
    };
    const auto est = ensemble(0.1, 1e-3);
    const double oracle_value =
        oracle::two_trajectory_lyapunov(kClassic, {1.0, 1.0, 1.0}, 1e-3, 2000.0, 50.0);
    const double b05 = ensemble(0.05, 1e-3).lambda_max;
    const double b20 = ensemble(0.2, 1e-3).lambda_max;
    const double half = ensemble(0.1, 5e-4).lambda_max;
    const double twice = ensemble(0.1, 2e-3).lambda_max;
    bool stable = true;
    for (double v : {b05, b20, half, twice}) stable = stable && std::abs(v - est.lambda_max) < 0.03;
    const bool pass = std::abs(est.lambda_max - oracle_value) < 0.03 && est.lambda_max >= 0.85 &&
                      est.lambda_max <= 0.96 && stable;
    return {pass, fmt::format("Benettin {:.4f} +- {:.4f} (8 seeds x 2000); two-trajectory "
                              "oracle {:.4f}; burn-in 5% / 20%: {:.4f} / {:.4f}; dt 5e-4 / "
                              "2e-3: {:.4f} / {:.4f}",
                              est.lambda_max, est.std_error, oracle_value, b05, b20, half, twice)};
}

std::string rcrit_text(const std::function<double()>& f, std::optional<double>& value) {
    try {
        value = f();
        return fmt::format("{:.3f}", *value);
    } catch (const TransitionError& e) {
        return e.what();
    }
}

Outcome chaos_transition() {
    SweepSpec spec;
    spec.r_values = r_grid(20.0, 30.0, 0.5);
    spec.samples_per_r = 4;
    spec.seed = 1;
    spec.lyapunov.horizon = 500.0;
    spec.threads = 0;
    const auto classical = sweep_r(LorenzModel::classical(), spec);
    const auto u2 = sweep_r(LorenzModel::u2(U2Convention::paper_eq7), spec);

    std::optional<double> rc, ru;
    const auto tc = rcrit_text([&] { return detect_rcrit(classical); }, rc);
    const auto tu = rcrit_text([&] { return detect_rcrit(u2); }, ru);
    const bool classical_ok = rc && *rc >= 23.5 && *rc <= 25.5;
    const bool u2_ok = rc && ru && std::abs(*ru - *rc) <= 0.5 + 1e-12;
    return {classical_ok && u2_ok,
            fmt::format("classical r_crit {} (in [23.5, 25.5]: {}); u(2) r_crit {} (within one "
                        "grid step: {})",
                        tc, classical_ok ? "yes" : "no", tu, u2_ok ? "yes" : "no")};
}

Outcome block_exponents() {
    const auto model = LorenzModel::u2(U2Convention::paper_eq7);
    LyapunovOptions o;
    o.horizon = 1000.0;
    auto gap = [&](double r, double& diff, double& sigma2) {
        const auto e = estimate_lyapunov(model, {10.0, r, 8.0 / 3.0}, o, 1, 8, 0);
        diff = std::abs(*e.lambda_u1 - *e.lambda_su2);
        sigma2 = 2.0 * std::hypot(*e.std_error_u1, *e.std_error_su2);
        return e;
    };
    double d15, s15, d28, s28;
    const auto e15 = gap(15.0, d15, s15);
    const auto e28 = gap(28.0, d28, s28);
    const bool bimodal = d15 > s15;
    const bool unimodal = d28 < s28;
    return {bimodal && unimodal,
            fmt::format("r=15: u1 {:.4f}, su2 {:.4f}, |diff| {:.2e} vs 2 sigma {:.2e} (must "
                        "exceed: {}); r=28: u1 {:.4f}, su2 {:.4f}, |diff| {:.2e} vs 2 sigma "
                        "{:.2e} (must stay below: {})",
                        *e15.lambda_u1, *e15.lambda_su2, d15, s15, bimodal ? "yes" : "no",
                        *e28.lambda_u1, *e28.lambda_su2, d28, s28, unimodal ? "yes" : "no")};
}

Outcome anomaly_safe_linearity() {
    const auto model = LorenzModel::su2();
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto s1 = oracle::random_vector(rng, 9, 10.0);
        const auto s2 = oracle::random_vector(rng, 9, 10.0);
        const double alpha = 0.75, beta = -1.5;
        std::vector<double> mix(9), f1(9), f2(9), fm(9);
        for (int i = 0; i < 9; ++i) mix[i] = alpha * s1[i] + beta * s2[i];
        model.rhs(s1, kClassic, f1);
        model.rhs(s2, kClassic, f2);
        model.rhs(mix, kClassic, fm);
        for (int i = 0; i < 9; ++i) {
            const double scale = std::abs(alpha * f1[i]) + std::abs(beta * f2[i]) + 1.0;
            worst = std::max(worst, std::abs(fm[i] - (alpha * f1[i] + beta * f2[i])) / scale);
        }
    }
    const bool linear = worst <= 1e-14;

    bool bounded = true;
    std::string runs;
    for (double r : {5.0, 15.0, 28.0}) {
        const LorenzParams p{10.0, r, 8.0 / 3.0};
        LyapunovOptions o;
        o.horizon = 100.0;
        std::string text;
        try {
            const double l = largest_lyapunov(model, p, o, 1, 0);
            bounded = bounded && l <= 1e-3;
            text = fmt::format("{:.4f}", l);
        } catch (const std::exception& e) {
            bounded = false;
            // Measure the exponent over a window short enough to stay finite.
            LyapunovOptions brief;
            brief.horizon = 1.0;
            text = fmt::format("run aborted ({}); 1-unit estimate {:.3f}", e.what(),
                               largest_lyapunov(model, p, brief, 1, 0));
        }
        runs += fmt::format("; r={}: lambda_max {}", r, text);
    }
    return {linear && bounded,
            fmt::format("superposition residual {:.1e} (<= 1e-14){} (must be <= 1e-3)", worst,
                        runs)};
}

Outcome ensemble_commutators() {
    const auto model = LorenzModel::u2(U2Convention::paper_eq7);
    IntegrationSpec ispec;
    ispec.dt = 1e-3;
    ispec.n_steps = 20000;
    ispec.record_every = 100;
    EnsembleSpec spec;
    spec.n_samples = 32;
    spec.seed = 1;
    const auto ens = ensemble_average(model, {10.0, 15.0, 8.0 / 3.0}, spec, ispec, 0);
    const auto& m = ens.mean;
    const std::size_t n = m.size();
    const std::size_t transient = n / 10;
    const std::size_t late = n - n / 10;

    double worst_spread = 0.0;
    double worst_t = 0.0;
    for (std::size_t k = transient; k < n; ++k) {
        const double hi = std::max({m.comm_xy[k], m.comm_yz[k], m.comm_xz[k]});
        const double lo = std::min({m.comm_xy[k], m.comm_yz[k], m.comm_xz[k]});
        const double avg = (m.comm_xy[k] + m.comm_yz[k] + m.comm_xz[k]) / 3.0;
        const double rel = avg > 0.0 ? (hi - lo) / avg : 0.0;
        if (rel > worst_spread) {
            worst_spread = rel;
            worst_t = m.times[k];
        }
    }
    const bool collapse = worst_spread <= 0.10;

    auto late_ratio = [&](const std::vector<double>& v) {
        double sum = 0.0;
        for (std::size_t k = late; k < n; ++k) sum += v[k];
        return sum / static_cast<double>(n - late) / v.front();
    };
    const double rxy = late_ratio(m.comm_xy), ryz = late_ratio(m.comm_yz),
                 rxz = late_ratio(m.comm_xz);
    const bool decays = std::max({rxy, ryz, rxz}) < 0.10;

    const double cas = m.casimir_x.back();
    const double cas_sd = ens.spread.casimir_x.back();
    const bool away = cas > 0.0 && cas - cas_sd > 0.0;

    const std::size_t mid = n / 2;
    return {collapse && decays && away,
            fmt::format("max relative spread of the three mean curves after t={:.0f}: {:.2f} at "
                        "t={:.1f} (<= 0.10: {}); t={:.0f} means xy/yz/xz {:.3g}/{:.3g}/{:.3g}; "
                        "late/initial {:.1e}/{:.1e}/{:.1e} (< 0.1: {}); final Casimir X {:.3f} "
                        "+- {:.3f} (mean - sd > 0: {})",
                        m.times[transient], worst_spread, worst_t, collapse ? "yes" : "no",
                        m.times[mid], m.comm_xy[mid], m.comm_yz[mid], m.comm_xz[mid], rxy, ryz,
                        rxz, decays ? "yes" : "no", cas, cas_sd, away ? "yes" : "no")};
}

Outcome cartan_closure() {
    double worst_comp = 0.0, worst_comm = 0.0;
    for (auto conv : {U2Convention::paper_eq7, U2Convention::derived_d}) {
        const auto model = LorenzModel::u2(conv);
        IntegrationSpec ispec;
        ispec.n_steps = 100000;
        ispec.record_every = 10;
        InitialCondition ic;
        ic.support = InitSupport::cartan;
        for (std::uint64_t i = 0; i < 8; ++i) {
            const auto s0 = initial_state(model, ic, 11, i);
            const auto traj = integrate(
                [&](double, std::span<const double> s, std::span<double> ds) {
                    model.rhs(s, kClassic, ds);
                },
                s0, ispec);
            for (const auto& s : traj.states)
                for (int blk = 0; blk < 3; ++blk)
                    worst_comp = std::max({worst_comp, std::abs(s[blk * 4 + 1]),
                                           std::abs(s[blk * 4 + 2])});
            const auto obs = observables(traj, model.basis(), model.tensors());
            for (std::size_t k = 0; k < obs.size(); ++k)
                worst_comm = std::max({worst_comm, obs.comm_xy[k], obs.comm_yz[k], obs.comm_xz[k]});
        }
    }
    return {worst_comp <= 1e-10 && worst_comm <= 1e-10,
            fmt::format("2 conventions x 8 samples, r=28, 100 units: max off-axis su(2) "
                        "component {:.1e}, max commutator norm {:.1e} (<= 1e-10)",
                        worst_comp, worst_comm)};
}

Outcome sweep_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "mlorenz_acceptance";
    std::filesystem::create_directories(dir);
    std::string contents[2];
    const char* threads[] = {"1", "8"};
    for (int i = 0; i < 2; ++i) {
        const auto path = dir / fmt::format("sweep_threads_{}.csv", threads[i]);
        std::ostringstream out, err;
        const int code = cli::run_cli({"sweep", "--system", "u2_paper", "--r-min", "20",
                                       "--r-max", "30", "--r-step", "2.5", "--samples", "4",
                                       "--horizon", "50", "--seed", "5", "--threads", threads[i],
                                       "--out", path.string()},
                                      out, err);
        if (code != 0) return {false, fmt::format("sweep exited {}: {}", code, err.str())};
        std::ifstream in(path, std::ios::binary);
        contents[i].assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    const bool same = !contents[0].empty() && contents[0] == contents[1];
    return {same, fmt::format("u(2) sweep, 5 r values x 4 seeds: {} bytes with --threads 1, {} "
                              "with --threads 8, identical: {}",
                              contents[0].size(), contents[1].size(), same ? "yes" : "no")};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "LLG <-> Lorenz identity", llg_identity},
    {2, "d-tensor oracle", d_tensor_oracle},
    {3, "integrator order", integrator_order},
    {4, "classical largest Lyapunov exponent", classical_lyapunov},
    {5, "chaos transition", chaos_transition},
    {6, "block exponents at r=15 and r=28", block_exponents},
    {7, "anomaly-safe linearity", anomaly_safe_linearity},
    {8, "ensemble commutator collapse at r=15", ensemble_commutators},
    {9, "Cartan closure", cartan_closure},
    {10, "sweep determinism across thread counts", sweep_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    if (argc > 2 || only < 0 || only > 10) {
        std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
        return 2;
    }
    bool all_pass = true;
    for (const auto& c : kCriteria) {
        if (only && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
