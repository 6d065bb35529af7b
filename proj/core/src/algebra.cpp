#include "mlorenz/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace mlorenz {

namespace {

using cd = std::complex<double>;

void require_same_extent(const Tensor3& t, std::size_t nu, std::size_t nv) {
    if (nu != t.extent() || nv != t.extent()) {
        throw AlgebraError(fmt::format(
            "dimension mismatch: tensor extent {}, vectors of length {} and {}",
            t.extent(), nu, nv));
    }
}

}  // namespace

void Tensor3::compress(double cutoff) {
    nonzeros_.clear();
    for (std::size_t a = 0; a < m_; ++a)
        for (std::size_t b = 0; b < m_; ++b)
            for (std::size_t c = 0; c < m_; ++c) {
                const double v = (*this)(a, b, c);
                if (std::abs(v) > cutoff) nonzeros_.push_back({a, b, c, v});
            }
}

double Tensor3::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

AlgebraBasis validate_basis(std::vector<ComplexMatrix> generators, const Tolerances& tol) {
    if (generators.empty()) throw AlgebraError("basis needs at least one generator");

    const auto n = static_cast<std::size_t>(generators.front().rows());
    if (n == 0) throw AlgebraError("generators must be non-empty matrices");
    for (std::size_t a = 0; a < generators.size(); ++a) {
        const auto& g = generators[a];
        if (static_cast<std::size_t>(g.rows()) != n || static_cast<std::size_t>(g.cols()) != n) {
            throw AlgebraError(fmt::format(
                "generator {} is {}x{}, expected {}x{}", a, g.rows(), g.cols(), n, n));
        }
        if ((g - g.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity) {
            throw AlgebraError(fmt::format("generator {} is not Hermitian", a));
        }
    }

    const double kappa = (generators[0] * generators[0]).trace().real();
    if (std::abs(kappa) <= tol.orthogonality) {
        throw AlgebraError("Tr(T^0 T^0) vanishes; kappa must be nonzero");
    }
    for (std::size_t a = 0; a < generators.size(); ++a) {
        for (std::size_t b = a; b < generators.size(); ++b) {
            const cd tr = (generators[a] * generators[b]).trace();
            const double expected = (a == b) ? kappa : 0.0;
            if (std::abs(tr - expected) > tol.orthogonality) {
                throw AlgebraError(fmt::format(
                    "Tr(T^{} T^{}) = {} + {}i is not kappa*delta with kappa = {}",
                    a, b, tr.real(), tr.imag(), kappa));
            }
        }
    }
    if (generators.size() > n * n) {
        throw AlgebraError("more generators than n^2");
    }

    AlgebraBasis basis;
    basis.n = n;
    basis.kappa = kappa;
    basis.has_identity_component = std::any_of(
        generators.begin(), generators.end(),
        [&](const ComplexMatrix& g) { return std::abs(g.trace()) > tol.orthogonality; });
    basis.generators = std::move(generators);
    return basis;
}

Tensor3 structure_constants(const AlgebraBasis& basis, const Tolerances& tol) {
    const std::size_t m = basis.size();
    const auto& T = basis.generators;
    const cd i_kappa{0.0, basis.kappa};
    Tensor3 f(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const ComplexMatrix comm = T[a] * T[b] - T[b] * T[a];
            for (std::size_t c = 0; c < m; ++c) {
                const cd v = (comm * T[c]).trace() / i_kappa;
                if (std::abs(v.imag()) > tol.imaginary_residual) {
                    throw AlgebraError(fmt::format(
                        "f^{{{}{}{}}} has imaginary part {}; basis does not close "
                        "into a real Lie algebra",
                        a, b, c, v.imag()));
                }
                f.at(a, b, c) = v.real();
            }
        }
    f.compress(1e-15);
    return f;
}

Tensor3 d_tensor(const AlgebraBasis& basis, const Tolerances& tol) {
    const std::size_t m = basis.size();
    const auto& T = basis.generators;
    Tensor3 d(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const ComplexMatrix anti = T[a] * T[b] + T[b] * T[a];
            for (std::size_t c = 0; c < m; ++c) {
                const cd v = (anti * T[c]).trace() / (2.0 * basis.kappa);
                if (std::abs(v.imag()) > tol.imaginary_residual) {
                    throw AlgebraError(fmt::format(
                        "d^{{{}{}{}}} has imaginary part {}", a, b, c, v.imag()));
                }
                d.at(a, b, c) = v.real();
            }
        }
    d.compress(1e-15);
    return d;
}

StructureTensors structure_tensors(const AlgebraBasis& basis, const Tolerances& tol) {
    return {structure_constants(basis, tol), d_tensor(basis, tol), basis.kappa};
}

bool is_anomaly_safe(const Tensor3& d, double tol) { return d.max_abs() <= tol; }

void sym_contract(const Tensor3& t, std::span<const double> u, std::span<const double> v,
                  std::span<double> out) {
    require_same_extent(t, u.size(), v.size());
    if (out.size() != t.extent()) throw AlgebraError("output length mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : t.nonzeros()) out[e.a] += e.value * u[e.b] * v[e.c];
}

std::vector<double> sym_contract(const Tensor3& t, std::span<const double> u,
                                 std::span<const double> v) {
    std::vector<double> w(t.extent());
    sym_contract(t, u, v, w);
    return w;
}

double commutator_norm(const Tensor3& f, double kappa, std::span<const double> u,
                       std::span<const double> v) {
    // [U,V] = i f^{abc} u^a v^b T^c, so ||[U,V]||_F^2 = kappa * sum_c (f^{abc} u^a v^b)^2.
    require_same_extent(f, u.size(), v.size());
    std::vector<double> w(f.extent(), 0.0);
    for (const auto& e : f.nonzeros()) w[e.c] += e.value * u[e.a] * v[e.b];
    double s = 0.0;
    for (double x : w) s += x * x;
    return std::sqrt(std::abs(kappa) * s);
}

double jacobi_residual(const Tensor3& f) {
    const std::size_t m = f.extent();
    double worst = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    double s = 0.0;
                    for (std::size_t e = 0; e < m; ++e) {
                        s += f(a, b, e) * f(e, c, d) + f(c, b, e) * f(a, e, d) +
                             f(d, b, e) * f(a, c, e);
                    }
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

double antisymmetry_residual(const Tensor3& f) {
    const std::size_t m = f.extent();
    double worst = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
                const double v = f(a, b, c);
                worst = std::max({worst, std::abs(v + f(b, a, c)), std::abs(v + f(a, c, b)),
                                  std::abs(v + f(c, b, a))});
            }
    return worst;
}

double symmetry_residual(const Tensor3& d) {
    const std::size_t m = d.extent();
    double worst = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
                const double v = d(a, b, c);
                worst = std::max({worst, std::abs(v - d(b, a, c)), std::abs(v - d(a, c, b)),
                                  std::abs(v - d(c, b, a))});
            }
    return worst;
}

std::vector<double> generator_traces(const AlgebraBasis& basis) {
    std::vector<double> tr;
    tr.reserve(basis.size());
    for (const auto& g : basis.generators) tr.push_back(g.trace().real());
    return tr;
}

ComplexMatrix expand(const AlgebraBasis& basis, std::span<const double> coefficients) {
    if (coefficients.size() != basis.size()) {
        throw AlgebraError("coefficient vector length does not match the basis");
    }
    const auto n = static_cast<Eigen::Index>(basis.n);
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    for (std::size_t a = 0; a < basis.size(); ++a) x += coefficients[a] * basis.generators[a];
    return x;
}

namespace {

ComplexMatrix pauli(int k) {
    ComplexMatrix s(2, 2);
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, cd(0, -1), cd(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: s = ComplexMatrix::Identity(2, 2); break;
    }
    return s;
}

}  // namespace

AlgebraBasis u1_basis() { return validate_basis({0.5 * pauli(0)}); }

AlgebraBasis su2_basis() {
    return validate_basis({0.5 * pauli(1), 0.5 * pauli(2), 0.5 * pauli(3)});
}

AlgebraBasis u2_basis() {
    return validate_basis({0.5 * pauli(0), 0.5 * pauli(1), 0.5 * pauli(2), 0.5 * pauli(3)});
}

AlgebraBasis named_basis(std::string_view name) {
    if (name == "u1") return u1_basis();
    if (name == "su2") return su2_basis();
    if (name == "u2") return u2_basis();
    throw AlgebraError(fmt::format("unknown basis '{}' (expected u1, su2 or u2)", name));
}

}  // namespace mlorenz
