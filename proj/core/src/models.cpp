#include "mlorenz/models.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>

namespace mlorenz {

namespace {

constexpr std::array<std::pair<SystemKind, std::string_view>, 6> kSystemNames{{
    {SystemKind::classical, "classical"},
    {SystemKind::u1, "u1"},
    {SystemKind::su2, "su2"},
    {SystemKind::u2_derived, "u2_derived"},
    {SystemKind::u2_paper, "u2_paper"},
    {SystemKind::custom_basis, "custom_basis"},
}};

}  // namespace

std::string_view to_string(SystemKind kind) {
    for (const auto& [k, name] : kSystemNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<SystemKind> parse_system_kind(std::string_view name) {
    for (const auto& [k, n] : kSystemNames)
        if (n == name) return k;
    return std::nullopt;
}

LorenzModel::LorenzModel(SystemKind kind, std::string name, Tensor3 coupling,
                         std::optional<AlgebraBasis> basis)
    : kind_(kind), name_(std::move(name)), coupling_(std::move(coupling)),
      basis_(std::move(basis)) {
    if (basis_) {
        if (basis_->size() != coupling_.extent()) {
            throw DynamicsError("coupling tensor extent differs from the basis size");
        }
        tensors_ = structure_tensors(*basis_);
        for (double tr : generator_traces(*basis_)) trace_slots_.push_back(std::abs(tr) > 1e-12);
    } else {
        // Without a basis the single coordinate plays the role of the trace.
        trace_slots_.assign(coupling_.extent(), true);
    }
}

LorenzModel LorenzModel::classical() {
    return {SystemKind::classical, "classical", classical_coupling(), std::nullopt};
}

LorenzModel LorenzModel::u1() {
    auto basis = u1_basis();
    auto d = d_tensor(basis);
    return {SystemKind::u1, "u1", std::move(d), std::move(basis)};
}

LorenzModel LorenzModel::su2() {
    auto basis = su2_basis();
    auto d = d_tensor(basis);
    return {SystemKind::su2, "su2", std::move(d), std::move(basis)};
}

LorenzModel LorenzModel::u2(U2Convention convention) {
    auto basis = u2_basis();
    if (convention == U2Convention::paper_eq7) {
        return {SystemKind::u2_paper, "u2_paper", u2_paper_coupling(), std::move(basis)};
    }
    auto d = d_tensor(basis);
    return {SystemKind::u2_derived, "u2_derived", std::move(d), std::move(basis)};
}

LorenzModel LorenzModel::from_basis(AlgebraBasis basis, std::string name) {
    auto d = d_tensor(basis);
    return {SystemKind::custom_basis, std::move(name), std::move(d), std::move(basis)};
}

LorenzModel LorenzModel::load(SystemKind kind, const std::filesystem::path& custom_basis) {
    switch (kind) {
        case SystemKind::classical: return classical();
        case SystemKind::u1: return u1();
        case SystemKind::su2: return su2();
        case SystemKind::u2_derived: return u2(U2Convention::derived_d);
        case SystemKind::u2_paper: return u2(U2Convention::paper_eq7);
        case SystemKind::custom_basis:
            if (custom_basis.empty()) throw DynamicsError("custom_basis needs a basis file");
            return from_basis(load_basis(custom_basis), "custom_basis");
    }
    throw DynamicsError("unknown system kind");
}

const AlgebraBasis& LorenzModel::basis() const {
    if (!basis_) throw DynamicsError(fmt::format("system '{}' has no algebra basis", name_));
    return *basis_;
}

const StructureTensors& LorenzModel::tensors() const {
    if (!tensors_) throw DynamicsError(fmt::format("system '{}' has no algebra basis", name_));
    return *tensors_;
}

bool LorenzModel::has_block_split() const {
    const bool any_trace = std::find(trace_slots_.begin(), trace_slots_.end(), true) !=
                           trace_slots_.end();
    const bool any_traceless = std::find(trace_slots_.begin(), trace_slots_.end(), false) !=
                               trace_slots_.end();
    return has_basis() && any_trace && any_traceless;
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
}

double SampleStream::uniform(double lo, double hi) {
    // 53 random mantissa bits; avoids the implementation-defined
    // std::uniform_real_distribution so draws are identical across libraries.
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::vector<double> initial_state(const LorenzModel& model, const InitialCondition& ic,
                                  std::uint64_t seed, std::uint64_t index) {
    if (!(ic.scale > 0.0)) throw DynamicsError("init_scale must be positive");
    const std::size_t m = model.generators();
    const auto& traced = model.trace_slots();
    std::size_t cartan_slot = m;
    for (std::size_t a = 0; a < m; ++a)
        if (!traced[a]) cartan_slot = a;

    SampleStream stream(seed, index);
    std::vector<double> s(3 * m);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = stream.uniform(-ic.scale, ic.scale);
        const std::size_t a = i % m;
        bool keep = true;
        if (!traced[a]) {
            keep = ic.support == InitSupport::full ||
                   (ic.support == InitSupport::cartan && a == cartan_slot);
        }
        s[i] = keep ? v : 0.0;
    }
    return s;
}

}  // namespace mlorenz
