#include <cmath>
#include <fmt/format.h>

#include "mlorenz/analysis.hpp"
#include "mlorenz/parallel.hpp"

namespace mlorenz {

namespace {

constexpr double kMinTangentNorm = 1e-12;
constexpr double kMaxTangentNorm = 1e12;
// Tangent draws use a stream disjoint from the initial-state stream.
constexpr std::uint64_t kTangentStreamKey = 0x9E3779B97F4A7C15ULL;

std::vector<double> random_direction(std::size_t dim, SampleStream& stream,
                                     const std::vector<bool>& mask_by_slot, bool want) {
    const std::size_t m = mask_by_slot.size();
    std::vector<double> v(dim, 0.0);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double u = stream.uniform(-1.0, 1.0);
        if (mask_by_slot[i % m] == want) {
            v[i] = u;
            norm2 += u * u;
        }
    }
    if (norm2 == 0.0) throw LyapunovError("tangent support is empty");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

/// Benettin renormalization for several tangents sharing one reference trajectory.
std::vector<double> benettin(const LorenzModel& model, const LorenzParams& p,
                             const LyapunovOptions& opts, std::span<const double> state0,
                             const std::vector<std::vector<double>>& tangents0) {
    const std::size_t dim = model.dimension();
    if (state0.size() != dim) {
        throw LyapunovError(fmt::format("initial state has {} components, system needs {}",
                                        state0.size(), dim));
    }
    if (opts.renorm_interval < 1) throw LyapunovError("renorm_interval must be >= 1");
    const std::size_t k = tangents0.size();

    std::vector<double> aug((k + 1) * dim);
    std::copy(state0.begin(), state0.end(), aug.begin());
    for (std::size_t j = 0; j < k; ++j) {
        if (tangents0[j].size() != dim) throw LyapunovError("tangent size mismatch");
        std::copy(tangents0[j].begin(), tangents0[j].end(), aug.begin() + (j + 1) * dim);
    }

    auto rhs = [&](double, std::span<const double> s, std::span<double> ds) {
        const auto ref = s.first(dim);
        model.rhs(ref, p, ds.first(dim));
        for (std::size_t j = 1; j <= k; ++j) {
            model.jvp(ref, s.subspan(j * dim, dim), p, ds.subspan(j * dim, dim));
        }
    };

    const std::int64_t n_steps = opts.n_steps();
    const std::int64_t burn = opts.burn_in_steps();
    std::vector<double> log_sum(k, 0.0);
    double measured_time = 0.0;
    std::int64_t interval_start = 0;

    Rk8Stepper stepper(aug.size());
    for (std::int64_t step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * opts.dt;
        stepper.step(rhs, t, opts.dt, aug);
        const double t_next = static_cast<double>(step + 1) * opts.dt;
        check_state(std::span<const double>(aug).first(dim), t_next);

        const std::int64_t done = step + 1;
        if (done % opts.renorm_interval != 0 && done != n_steps) continue;

        const bool counted = interval_start >= burn;
        for (std::size_t j = 0; j < k; ++j) {
            auto v = std::span<double>(aug).subspan((j + 1) * dim, dim);
            double norm2 = 0.0;
            for (double x : v) norm2 += x * x;
            const double norm = std::sqrt(norm2);
            if (!std::isfinite(norm) || norm < kMinTangentNorm || norm > kMaxTangentNorm) {
                throw LyapunovError(fmt::format(
                    "tangent norm {:g} left [{:g}, {:g}] at t = {}; shorten renorm_interval",
                    norm, kMinTangentNorm, kMaxTangentNorm, t_next));
            }
            if (counted) log_sum[j] += std::log(norm);
            for (double& x : v) x /= norm;
        }
        if (counted) measured_time += static_cast<double>(done - interval_start) * opts.dt;
        interval_start = done;
    }
    if (measured_time <= 0.0) {
        throw LyapunovError("no renormalization interval after burn-in; increase the horizon");
    }
    for (double& s : log_sum) s /= measured_time;
    return log_sum;
}

}  // namespace

std::int64_t LyapunovOptions::n_steps() const {
    if (!(dt > 0.0) || !(horizon > 0.0)) {
        throw LyapunovError("dt and horizon must be positive");
    }
    return static_cast<std::int64_t>(std::llround(horizon / dt));
}

std::int64_t LyapunovOptions::burn_in_steps() const {
    if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0) {
        throw LyapunovError("burn_in_fraction must lie in [0, 1)");
    }
    return static_cast<std::int64_t>(
        std::llround(burn_in_fraction * static_cast<double>(n_steps())));
}

double largest_lyapunov(const LorenzModel& model, const LorenzParams& p,
                        const LyapunovOptions& opts, std::span<const double> state0,
                        std::span<const double> tangent0) {
    std::vector<double> t(tangent0.begin(), tangent0.end());
    double norm2 = 0.0;
    for (double x : t) norm2 += x * x;
    if (norm2 == 0.0) throw LyapunovError("initial tangent is zero");
    for (double& x : t) x /= std::sqrt(norm2);
    return benettin(model, p, opts, state0, {t}).front();
}

double largest_lyapunov(const LorenzModel& model, const LorenzParams& p,
                        const LyapunovOptions& opts, std::uint64_t seed, std::uint64_t index) {
    const auto s0 = initial_state(model, opts.init, seed, index);
    SampleStream stream(seed ^ kTangentStreamKey, index);
    const std::vector<bool> all(model.generators(), true);
    return benettin(model, p, opts, s0, {random_direction(s0.size(), stream, all, true)})
        .front();
}

LyapunovRun block_lyapunov(const LorenzModel& model, const LorenzParams& p,
                           const LyapunovOptions& opts, std::uint64_t seed, std::uint64_t index) {
    if (!model.has_block_split()) {
        throw LyapunovError(fmt::format(
            "system '{}' has no split into trace and traceless generators", model.name()));
    }
    const auto s0 = initial_state(model, opts.init, seed, index);
    SampleStream stream(seed ^ kTangentStreamKey, index);
    const std::size_t dim = s0.size();
    const std::vector<bool> all(model.generators(), true);
    const auto& traced = model.trace_slots();
    std::vector<std::vector<double>> tangents;
    tangents.push_back(random_direction(dim, stream, all, true));
    tangents.push_back(random_direction(dim, stream, traced, true));
    tangents.push_back(random_direction(dim, stream, traced, false));

    const auto rates = benettin(model, p, opts, s0, tangents);
    return {rates[0], rates[1], rates[2]};
}

MeanError mean_and_stderr(std::span<const double> values) {
    MeanError out;
    if (values.empty()) return {std::nan(""), std::nan("")};
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double n = static_cast<double>(values.size());
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

LyapunovEstimate summarize(std::span<const LyapunovRun> runs) {
    LyapunovEstimate est;
    est.n_samples = runs.size();
    std::vector<double> lmax, lu1, lsu2;
    for (const auto& r : runs) {
        lmax.push_back(r.lambda_max);
        if (r.lambda_u1) lu1.push_back(*r.lambda_u1);
        if (r.lambda_su2) lsu2.push_back(*r.lambda_su2);
    }
    const auto m = mean_and_stderr(lmax);
    est.lambda_max = m.mean;
    est.std_error = m.std_error;
    if (!runs.empty() && lu1.size() == runs.size() && lsu2.size() == runs.size()) {
        const auto a = mean_and_stderr(lu1);
        const auto b = mean_and_stderr(lsu2);
        est.lambda_u1 = a.mean;
        est.std_error_u1 = a.std_error;
        est.lambda_su2 = b.mean;
        est.std_error_su2 = b.std_error;
    }
    return est;
}

LyapunovEstimate estimate_lyapunov(const LorenzModel& model, const LorenzParams& p,
                                   const LyapunovOptions& opts, std::uint64_t seed,
                                   std::size_t n_samples, unsigned threads) {
    if (n_samples == 0) throw LyapunovError("n_samples must be >= 1");
    std::vector<LyapunovRun> runs(n_samples);
    const bool blocks = model.has_block_split();
    parallel_for(n_samples, threads, [&](std::size_t i) {
        if (blocks) {
            runs[i] = block_lyapunov(model, p, opts, seed, i);
        } else {
            runs[i].lambda_max = largest_lyapunov(model, p, opts, seed, i);
        }
    });
    return summarize(runs);
}

}  // namespace mlorenz
