// analysis.hpp
// Lyapunov exponents, observables of matrix trajectories, ensembles and r sweeps.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlorenz/integrator.hpp"
#include "mlorenz/models.hpp"

namespace mlorenz {

class LyapunovError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LyapunovOptions {
    double dt = 1e-3;
    double horizon = 2000.0;
    std::int64_t renorm_interval = 100;
    double burn_in_fraction = 0.1;
    InitialCondition init{};

    std::int64_t n_steps() const;
    std::int64_t burn_in_steps() const;
};

/// Single-trajectory Benettin estimates. `lambda_u1` / `lambda_su2` are set
/// only by block runs.
struct LyapunovRun {
    double lambda_max = 0.0;
    std::optional<double> lambda_u1;
    std::optional<double> lambda_su2;
};

/// Largest exponent from a given initial state and tangent direction.
double largest_lyapunov(const LorenzModel& model, const LorenzParams& p,
                        const LyapunovOptions& opts, std::span<const double> state0,
                        std::span<const double> tangent0);

/// Largest exponent from the seeded initial condition and tangent of sample `index`.
double largest_lyapunov(const LorenzModel& model, const LorenzParams& p,
                        const LyapunovOptions& opts, std::uint64_t seed,
                        std::uint64_t index = 0);

/// One Benettin run carrying three tangents: a generic one (lambda_max), one
/// starting on the trace (u(1)) coefficients and one starting on the traceless
/// (su(2)) coefficients. Each is renormalized by its own full-vector norm.
LyapunovRun block_lyapunov(const LorenzModel& model, const LorenzParams& p,
                           const LyapunovOptions& opts, std::uint64_t seed,
                           std::uint64_t index = 0);

struct LyapunovEstimate {
    double lambda_max = 0.0;
    // Standard error of the ensemble mean.
    double std_error = 0.0;
    std::optional<double> lambda_u1, lambda_su2;
    std::optional<double> std_error_u1, std_error_su2;
    std::size_t n_samples = 0;
};

struct MeanError {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n); zero for n < 2).
MeanError mean_and_stderr(std::span<const double> values);

/// Aggregates runs in index order.
LyapunovEstimate summarize(std::span<const LyapunovRun> runs);

/// Runs `n_samples` seeded samples (block runs when the model has a u(1) x
/// traceless split) and aggregates them.
LyapunovEstimate estimate_lyapunov(const LorenzModel& model, const LorenzParams& p,
                                   const LyapunovOptions& opts, std::uint64_t seed,
                                   std::size_t n_samples, unsigned threads = 1);

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> tr_x, tr_y, tr_z;
    std::vector<double> comm_xy, comm_yz, comm_xz;
    std::vector<double> casimir_x, casimir_y, casimir_z;

    std::size_t size() const { return times.size(); }
};

/// Traces, commutator Frobenius norms and traceless quadratic invariants of
/// every recorded matrix-Lorenz state.
ObservableSeries observables(const Trajectory& traj, const AlgebraBasis& basis,
                             const StructureTensors& tensors);

struct EnsembleSpec {
    std::size_t n_samples = 32;
    InitialCondition init{};
    std::uint64_t seed = 1;
};

struct EnsembleObservables {
    ObservableSeries mean;
    // Pointwise sample standard deviation; zero when n_samples == 1.
    ObservableSeries spread;
    std::size_t n_samples = 0;
};

class EnsembleError : public std::runtime_error {
public:
    EnsembleError(const std::string& what, std::size_t sample, std::uint64_t seed)
        : std::runtime_error(what), sample_(sample), seed_(seed) {}
    std::size_t sample() const { return sample_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::size_t sample_;
    std::uint64_t seed_;
};

EnsembleObservables ensemble_average(const LorenzModel& model, const LorenzParams& p,
                                     const EnsembleSpec& spec, const IntegrationSpec& ispec,
                                     unsigned threads = 1);

struct SweepSpec {
    std::vector<double> r_values;
    double sigma = 10.0;
    double b = 8.0 / 3.0;
    std::size_t samples_per_r = 4;
    std::uint64_t seed = 1;
    LyapunovOptions lyapunov{};
    unsigned threads = 1;
};

struct PhaseDiagram {
    std::vector<double> r_values;
    std::vector<LyapunovEstimate> estimates;
    std::vector<std::size_t> n_ok, n_failed;
    double sigma = 10.0;
    double b = 8.0 / 3.0;
    // "r=<r> sample=<k>: <reason>" for every failed cell.
    std::vector<std::string> failures;

    std::size_t size() const { return r_values.size(); }
};

/// r grid from r_min to r_max inclusive (within half a step) in steps of r_step.
std::vector<double> r_grid(double r_min, double r_max, double r_step);

PhaseDiagram sweep_r(const LorenzModel& model, const SweepSpec& spec);

class TransitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// First grid r whose mean exponent exceeds `threshold` with mean - std_error
/// above `noise_floor`. When the preceding grid point lies at or below the
/// threshold the crossing is linearly interpolated between the two; otherwise
/// the grid r itself is returned. Rows without successful samples are skipped.
double detect_rcrit(const PhaseDiagram& diagram, double threshold = 0.0,
                    double noise_floor = 0.01);

}  // namespace mlorenz
