#include <cmath>
#include <fmt/format.h>

#include "mlorenz/analysis.hpp"
#include "mlorenz/parallel.hpp"

namespace mlorenz {

namespace {

using Member = std::vector<double> ObservableSeries::*;

constexpr Member kSeries[] = {
    &ObservableSeries::tr_x,      &ObservableSeries::tr_y,      &ObservableSeries::tr_z,
    &ObservableSeries::comm_xy,   &ObservableSeries::comm_yz,   &ObservableSeries::comm_xz,
    &ObservableSeries::casimir_x, &ObservableSeries::casimir_y, &ObservableSeries::casimir_z,
};

void resize_all(ObservableSeries& s, std::size_t n) {
    s.times.assign(n, 0.0);
    for (auto member : kSeries) (s.*member).assign(n, 0.0);
}

}  // namespace

ObservableSeries observables(const Trajectory& traj, const AlgebraBasis& basis,
                             const StructureTensors& tensors) {
    const std::size_t m = basis.size();
    const auto traces = generator_traces(basis);

    ObservableSeries out;
    resize_all(out, traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        if (s.size() != 3 * m) {
            throw DynamicsError(fmt::format(
                "state {} has {} components, basis of {} generators needs {}", k, s.size(), m,
                3 * m));
        }
        CoefficientBlocks<const double> c{std::span<const double>(s)};

        double tx = 0.0, ty = 0.0, tz = 0.0, cx = 0.0, cy = 0.0, cz = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            tx += c.x[a] * traces[a];
            ty += c.y[a] * traces[a];
            tz += c.z[a] * traces[a];
            if (std::abs(traces[a]) <= 1e-12) {
                cx += c.x[a] * c.x[a];
                cy += c.y[a] * c.y[a];
                cz += c.z[a] * c.z[a];
            }
        }
        out.times[k] = traj.times[k];
        out.tr_x[k] = tx;
        out.tr_y[k] = ty;
        out.tr_z[k] = tz;
        out.comm_xy[k] = commutator_norm(tensors.f, tensors.kappa, c.x, c.y);
        out.comm_yz[k] = commutator_norm(tensors.f, tensors.kappa, c.y, c.z);
        out.comm_xz[k] = commutator_norm(tensors.f, tensors.kappa, c.x, c.z);
        out.casimir_x[k] = cx;
        out.casimir_y[k] = cy;
        out.casimir_z[k] = cz;
    }
    return out;
}

EnsembleObservables ensemble_average(const LorenzModel& model, const LorenzParams& p,
                                     const EnsembleSpec& spec, const IntegrationSpec& ispec,
                                     unsigned threads) {
    if (spec.n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
    validate(ispec);
    const auto& basis = model.basis();
    const auto& tensors = model.tensors();

    std::vector<ObservableSeries> members(spec.n_samples);
    parallel_for(spec.n_samples, threads, [&](std::size_t i) {
        const auto s0 = initial_state(model, spec.init, spec.seed, i);
        try {
            const auto traj = integrate(
                [&](double, std::span<const double> s, std::span<double> ds) {
                    model.rhs(s, p, ds);
                },
                s0, ispec);
            members[i] = observables(traj, basis, tensors);
        } catch (const IntegrationError& e) {
            throw EnsembleError(
                fmt::format("ensemble sample {} (seed {}) failed: {}", i, spec.seed, e.what()),
                i, spec.seed);
        }
    });

    const std::size_t len = members.front().size();
    const double n = static_cast<double>(spec.n_samples);
    EnsembleObservables out;
    out.n_samples = spec.n_samples;
    resize_all(out.mean, len);
    resize_all(out.spread, len);
    out.mean.times = members.front().times;
    out.spread.times = members.front().times;
    for (auto member : kSeries) {
        auto& mean = out.mean.*member;
        auto& sd = out.spread.*member;
        for (std::size_t k = 0; k < len; ++k) {
            double sum = 0.0;
            for (const auto& s : members) sum += (s.*member)[k];
            mean[k] = sum / n;
            if (spec.n_samples < 2) continue;
            double ss = 0.0;
            for (const auto& s : members) {
                const double d = (s.*member)[k] - mean[k];
                ss += d * d;
            }
            sd[k] = std::sqrt(ss / (n - 1.0));
        }
    }
    return out;
}

}  // namespace mlorenz
