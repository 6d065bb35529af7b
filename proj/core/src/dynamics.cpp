#include "mlorenz/dynamics.hpp"

#include <cmath>
#include <fmt/format.h>

namespace mlorenz {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// M_i / tau_i with tau_i = +inf meaning no damping.
double relax(double m, double tau) { return std::isinf(tau) ? 0.0 : m / tau; }

void require_matrix_state(std::size_t state_size, std::size_t out_size, const Tensor3& d) {
    if (state_size != 3 * d.extent() || out_size != state_size) {
        throw DynamicsError(fmt::format(
            "matrix Lorenz state of size {} (output {}) does not match coupling extent {}",
            state_size, out_size, d.extent()));
    }
}

}  // namespace

Vec3 lorenz_rhs(const Vec3& s, const LorenzParams& p) {
    const auto [x, y, z] = s;
    return {p.sigma * (y - x), x * (p.r - z) - y, x * y - p.b * z};
}

Vec3 lorenz_jvp(const Vec3& s, const Vec3& v, const LorenzParams& p) {
    const auto [x, y, z] = s;
    return {p.sigma * (v[1] - v[0]), (p.r - z) * v[0] - v[1] - x * v[2],
            y * v[0] + x * v[1] - p.b * v[2]};
}

ReducedParams material_to_reduced(const MaterialParams& mp) {
    if (!(mp.mu0 > 0.0) || !(mp.Ms > 0.0)) {
        throw DynamicsError("mu0 and Ms must both be positive");
    }
    ReducedParams rp{};
    const double energy_scale = mp.mu0 * mp.Ms * mp.Ms;
    const double field_scale = mp.mu0 * mp.Ms;
    for (int i = 0; i < 3; ++i) {
        rp.eta[i] = 2.0 * mp.K[i] / energy_scale;
        rp.beta[i] = mp.B[i] / field_scale;
    }
    return rp;
}

void validate(const LLGParams& p) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(std::sqrt(dot(p.axes[i], p.axes[i])) - 1.0) > 1e-12) {
            throw DynamicsError(fmt::format("anisotropy axis {} is not a unit vector", i));
        }
        if (!(p.tau[i] > 0.0)) {
            throw DynamicsError(fmt::format("damping time tau_{} must be positive", i + 1));
        }
    }
}

Vec3 llg_rhs(const Vec3& M, const LLGParams& p) {
    // omega = sum_i eta_i (n_i . M) n_i - beta
    Vec3 omega{-p.beta[0], -p.beta[1], -p.beta[2]};
    for (int i = 0; i < 3; ++i) {
        const double proj = p.eta[i] * dot(p.axes[i], M);
        for (int k = 0; k < 3; ++k) omega[k] += proj * p.axes[i][k];
    }
    Vec3 dM = cross(omega, M);
    for (int k = 0; k < 3; ++k) dM[k] -= relax(M[k], p.tau[k]);
    dM[2] += p.torque_d;
    return dM;
}

LLGParams llg_to_lorenz(const LorenzParams& p) {
    if (p.sigma == 0.0 || p.b == 0.0) {
        throw DynamicsError("sigma and b must be nonzero to map onto damping times");
    }
    LLGParams q;
    q.eta = {2.0, 1.0, 1.0};
    q.beta = {0.0, 0.0, p.sigma};
    q.tau = {1.0 / p.sigma, 1.0, 1.0 / p.b};
    q.torque_d = -p.b * (p.r + p.sigma);
    return q;
}

Vec3 map_state_lorenz_to_llg(const Vec3& xyz, const LorenzParams& p) {
    return {xyz[0], xyz[1], xyz[2] - p.r - p.sigma};
}

Vec3 map_state_llg_to_lorenz(const Vec3& M, const LorenzParams& p) {
    return {M[0], M[1], M[2] + p.r + p.sigma};
}

std::vector<double> MatrixLorenzState::flatten() const {
    if (y.size() != x.size() || z.size() != x.size()) {
        throw DynamicsError("x, y and z coefficient vectors differ in length");
    }
    std::vector<double> flat;
    flat.reserve(3 * x.size());
    flat.insert(flat.end(), x.begin(), x.end());
    flat.insert(flat.end(), y.begin(), y.end());
    flat.insert(flat.end(), z.begin(), z.end());
    return flat;
}

MatrixLorenzState MatrixLorenzState::unflatten(std::span<const double> flat) {
    if (flat.size() % 3 != 0) throw DynamicsError("flat state length is not a multiple of 3");
    CoefficientBlocks<const double> v(flat);
    return {{v.x.begin(), v.x.end()}, {v.y.begin(), v.y.end()}, {v.z.begin(), v.z.end()}};
}

void matrix_lorenz_rhs(std::span<const double> state, const LorenzParams& p, const Tensor3& d,
                       std::span<double> out) {
    require_matrix_state(state.size(), out.size(), d);
    const std::size_t m = d.extent();
    CoefficientBlocks<const double> s(state);
    CoefficientBlocks<double> ds(out);
    for (std::size_t a = 0; a < m; ++a) {
        ds.x[a] = p.sigma * (s.y[a] - s.x[a]);
        ds.y[a] = -s.y[a] + p.r * s.x[a];
        ds.z[a] = -p.b * s.z[a];
    }
    for (const auto& e : d.nonzeros()) {
        ds.y[e.a] -= e.value * s.x[e.b] * s.z[e.c];
        ds.z[e.a] += e.value * s.x[e.b] * s.y[e.c];
    }
}

MatrixLorenzState matrix_lorenz_rhs(const MatrixLorenzState& s, const LorenzParams& p,
                                    const Tensor3& d) {
    const auto flat = s.flatten();
    std::vector<double> out(flat.size());
    matrix_lorenz_rhs(flat, p, d, out);
    return MatrixLorenzState::unflatten(out);
}

void matrix_lorenz_jvp(std::span<const double> state, std::span<const double> tangent,
                       const LorenzParams& p, const Tensor3& d, std::span<double> out) {
    require_matrix_state(state.size(), out.size(), d);
    if (tangent.size() != state.size()) throw DynamicsError("tangent size mismatch");
    const std::size_t m = d.extent();
    CoefficientBlocks<const double> s(state);
    CoefficientBlocks<const double> v(tangent);
    CoefficientBlocks<double> dv(out);
    for (std::size_t a = 0; a < m; ++a) {
        dv.x[a] = p.sigma * (v.y[a] - v.x[a]);
        dv.y[a] = -v.y[a] + p.r * v.x[a];
        dv.z[a] = -p.b * v.z[a];
    }
    for (const auto& e : d.nonzeros()) {
        dv.y[e.a] -= e.value * (v.x[e.b] * s.z[e.c] + s.x[e.b] * v.z[e.c]);
        dv.z[e.a] += e.value * (v.x[e.b] * s.y[e.c] + s.x[e.b] * v.y[e.c]);
    }
}

namespace {

// The bilinear product printed for the split u(1) x su(2) system:
// q^0 = u^0 v^0 + 2 u.v,  q^a = u^0 v^a + u^a v^0.
std::array<double, 4> u2_paper_product(std::span<const double> u, std::span<const double> v) {
    return {u[0] * v[0] + 2.0 * (u[1] * v[1] + u[2] * v[2] + u[3] * v[3]),
            u[0] * v[1] + u[1] * v[0], u[0] * v[2] + u[2] * v[0], u[0] * v[3] + u[3] * v[0]};
}

const Tensor3& u2_derived_coupling() {
    static const Tensor3 d = d_tensor(u2_basis());
    return d;
}

}  // namespace

void u2_rhs(std::span<const double> state, const LorenzParams& p, U2Convention convention,
            std::span<double> out) {
    if (state.size() != 12 || out.size() != 12) {
        throw DynamicsError(fmt::format("u(2) state must have 12 components, got {}",
                                        state.size()));
    }
    if (convention == U2Convention::derived_d) {
        matrix_lorenz_rhs(state, p, u2_derived_coupling(), out);
        return;
    }
    CoefficientBlocks<const double> s(state);
    CoefficientBlocks<double> ds(out);
    const auto xz = u2_paper_product(s.x, s.z);
    const auto xy = u2_paper_product(s.x, s.y);
    for (std::size_t a = 0; a < 4; ++a) {
        ds.x[a] = p.sigma * (s.y[a] - s.x[a]);
        ds.y[a] = -s.y[a] + p.r * s.x[a] - xz[a];
        ds.z[a] = -p.b * s.z[a] + xy[a];
    }
}

Tensor3 u2_paper_coupling() {
    Tensor3 t(4);
    t.at(0, 0, 0) = 1.0;
    for (std::size_t b = 1; b < 4; ++b) {
        t.at(0, b, b) = 2.0;
        t.at(b, 0, b) = 1.0;
        t.at(b, b, 0) = 1.0;
    }
    t.compress();
    return t;
}

Tensor3 classical_coupling() {
    Tensor3 t(1);
    t.at(0, 0, 0) = 1.0;
    t.compress();
    return t;
}

}  // namespace mlorenz
