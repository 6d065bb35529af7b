// models.hpp
// Named Lorenz systems over a coefficient space, plus seeded initial conditions.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlorenz/algebra.hpp"
#include "mlorenz/dynamics.hpp"

namespace mlorenz {

enum class SystemKind { classical, u1, su2, u2_derived, u2_paper, custom_basis };

std::string_view to_string(SystemKind kind);
std::optional<SystemKind> parse_system_kind(std::string_view name);

/// x' = sigma (y - x), y' = -y + r x - t(x, z), z' = -b z + t(x, y) over m
/// coefficients, with the basis (when there is one) used for observables.
class LorenzModel {
public:
    static LorenzModel classical();
    static LorenzModel u1();
    static LorenzModel su2();
    static LorenzModel u2(U2Convention convention);
    /// Coupling is the d tensor of `basis`.
    static LorenzModel from_basis(AlgebraBasis basis, std::string name = "custom_basis");
    static LorenzModel load(SystemKind kind, const std::filesystem::path& custom_basis = {});

    SystemKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    std::size_t generators() const { return coupling_.extent(); }
    std::size_t dimension() const { return 3 * coupling_.extent(); }
    const Tensor3& coupling() const { return coupling_; }

    bool has_basis() const { return basis_.has_value(); }
    const AlgebraBasis& basis() const;
    const StructureTensors& tensors() const;

    /// Generators with nonzero trace (the u(1) directions).
    const std::vector<bool>& trace_slots() const { return trace_slots_; }
    bool has_block_split() const;

    void rhs(std::span<const double> state, const LorenzParams& p, std::span<double> out) const {
        matrix_lorenz_rhs(state, p, coupling_, out);
    }
    void jvp(std::span<const double> state, std::span<const double> tangent,
             const LorenzParams& p, std::span<double> out) const {
        matrix_lorenz_jvp(state, tangent, p, coupling_, out);
    }

private:
    LorenzModel(SystemKind kind, std::string name, Tensor3 coupling,
                std::optional<AlgebraBasis> basis);

    SystemKind kind_;
    std::string name_;
    Tensor3 coupling_;
    std::optional<AlgebraBasis> basis_;
    std::optional<StructureTensors> tensors_;
    std::vector<bool> trace_slots_;
};

enum class InitSupport {
    // Every coefficient drawn.
    full,
    // Traceless coefficients set to zero.
    trace_only,
    // Traceless coefficients restricted to the last traceless generator.
    cartan,
};

struct InitialCondition {
    double scale = 10.0;
    InitSupport support = InitSupport::full;
};

/// Counter-based stream: the draw for (seed, index) never depends on which
/// other indices were drawn or in what order.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index);

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

/// Uniform[-scale, scale] coefficients for sample `index`.
std::vector<double> initial_state(const LorenzModel& model, const InitialCondition& ic,
                                  std::uint64_t seed, std::uint64_t index);

}  // namespace mlorenz
