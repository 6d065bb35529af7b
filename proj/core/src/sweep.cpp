#include <cmath>
#include <fmt/format.h>

#include "mlorenz/analysis.hpp"
#include "mlorenz/parallel.hpp"

namespace mlorenz {

std::vector<double> r_grid(double r_min, double r_max, double r_step) {
    if (!(r_step > 0.0) || !std::isfinite(r_step)) {
        throw std::invalid_argument("r_step must be positive");
    }
    if (!(r_max >= r_min)) throw std::invalid_argument("r_max must not be below r_min");
    const auto count = static_cast<std::size_t>(std::floor((r_max - r_min) / r_step + 0.5)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) grid[k] = r_min + static_cast<double>(k) * r_step;
    return grid;
}

PhaseDiagram sweep_r(const LorenzModel& model, const SweepSpec& spec) {
    if (spec.r_values.empty()) throw std::invalid_argument("r grid is empty");
    if (spec.samples_per_r == 0) throw std::invalid_argument("samples_per_r must be >= 1");
    for (std::size_t i = 1; i < spec.r_values.size(); ++i) {
        if (!(spec.r_values[i] > spec.r_values[i - 1])) {
            throw std::invalid_argument("r values must be strictly increasing");
        }
    }

    const std::size_t n_r = spec.r_values.size();
    const std::size_t n_s = spec.samples_per_r;
    struct Cell {
        std::optional<LyapunovRun> run;
        std::string error;
    };
    std::vector<Cell> cells(n_r * n_s);
    const bool blocks = model.has_block_split();

    parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
        const std::size_t ri = i / n_s;
        const std::size_t sample = i % n_s;
        const LorenzParams p{spec.sigma, spec.r_values[ri], spec.b};
        try {
            if (blocks) {
                cells[i].run = block_lyapunov(model, p, spec.lyapunov, spec.seed, sample);
            } else {
                LyapunovRun run;
                run.lambda_max = largest_lyapunov(model, p, spec.lyapunov, spec.seed, sample);
                cells[i].run = run;
            }
        } catch (const std::exception& e) {
            cells[i].error = e.what();
        }
    });

    PhaseDiagram diagram;
    diagram.sigma = spec.sigma;
    diagram.b = spec.b;
    diagram.r_values = spec.r_values;
    for (std::size_t ri = 0; ri < n_r; ++ri) {
        std::vector<LyapunovRun> ok;
        std::size_t failed = 0;
        for (std::size_t s = 0; s < n_s; ++s) {
            const auto& cell = cells[ri * n_s + s];
            if (cell.run) {
                ok.push_back(*cell.run);
            } else {
                ++failed;
                diagram.failures.push_back(
                    fmt::format("r={} sample={}: {}", spec.r_values[ri], s, cell.error));
            }
        }
        diagram.estimates.push_back(summarize(ok));
        diagram.n_ok.push_back(ok.size());
        diagram.n_failed.push_back(failed);
    }
    return diagram;
}

double detect_rcrit(const PhaseDiagram& diagram, double threshold, double noise_floor) {
    std::size_t prev = diagram.size();
    for (std::size_t i = 0; i < diagram.size(); ++i) {
        const auto& est = diagram.estimates[i];
        if (diagram.n_ok.empty() ? false : diagram.n_ok[i] == 0) continue;
        if (!std::isfinite(est.lambda_max)) continue;
        const bool above = est.lambda_max > threshold &&
                           est.lambda_max - est.std_error > noise_floor;
        if (!above) {
            prev = i;
            continue;
        }
        if (prev == diagram.size()) {
            throw TransitionError(fmt::format(
                "transition below range: exponent already positive at r = {}",
                diagram.r_values[i]));
        }
        const double r0 = diagram.r_values[prev];
        const double r1 = diagram.r_values[i];
        const double l0 = diagram.estimates[prev].lambda_max;
        const double l1 = est.lambda_max;
        // Predecessor already above threshold: no crossing inside the bracket.
        if (l0 >= threshold) return r1;
        return r0 + (threshold - l0) * (r1 - r0) / (l1 - l0);
    }
    throw TransitionError("no transition: exponent never rises above the threshold");
}

}  // namespace mlorenz
