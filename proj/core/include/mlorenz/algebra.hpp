// algebra.hpp
// Lie-algebra bases and the tensors f^{abc}, d^{abc} derived from them.
#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace mlorenz {

using ComplexMatrix = Eigen::MatrixXcd;

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double hermiticity = 1e-12;
    double orthogonality = 1e-12;
    double imaginary_residual = 1e-10;
};

/// A validated set of Hermitian generators with Tr(T^a T^b) = kappa delta^{ab}.
struct AlgebraBasis {
    std::size_t n = 0;
    std::vector<ComplexMatrix> generators;
    double kappa = 0.0;
    // False when every generator is traceless. The coefficient equations stay
    // well defined, the matrix-level ones do not.
    bool has_identity_component = false;

    std::size_t size() const { return generators.size(); }
};

/// Dense rank-3 real tensor of extent m in every index.
/// Keeps a list of its nonzero entries for fast contraction.
class Tensor3 {
public:
    struct Entry {
        std::size_t a, b, c;
        double value;
    };

    Tensor3() = default;
    explicit Tensor3(std::size_t m) : m_(m), data_(m * m * m, 0.0) {}

    std::size_t extent() const { return m_; }

    double operator()(std::size_t a, std::size_t b, std::size_t c) const {
        return data_[(a * m_ + b) * m_ + c];
    }
    double& at(std::size_t a, std::size_t b, std::size_t c) {
        return data_[(a * m_ + b) * m_ + c];
    }

    std::span<const double> data() const { return data_; }

    // Entries with |value| > cutoff; call after the last write.
    void compress(double cutoff = 0.0);
    std::span<const Entry> nonzeros() const { return nonzeros_; }

    double max_abs() const;

private:
    std::size_t m_ = 0;
    std::vector<double> data_;
    std::vector<Entry> nonzeros_;
};

struct StructureTensors {
    Tensor3 f;
    Tensor3 d;
    double kappa = 0.0;
};

AlgebraBasis validate_basis(std::vector<ComplexMatrix> generators,
                            const Tolerances& tol = {});

/// f^{abc} = Tr([T^a,T^b] T^c) / (i kappa).
Tensor3 structure_constants(const AlgebraBasis& basis, const Tolerances& tol = {});

/// d^{abc} = Tr({T^a,T^b} T^c) / (2 kappa).
Tensor3 d_tensor(const AlgebraBasis& basis, const Tolerances& tol = {});

StructureTensors structure_tensors(const AlgebraBasis& basis, const Tolerances& tol = {});

bool is_anomaly_safe(const Tensor3& d, double tol = 1e-12);

/// w^a = sum_{b,c} t^{abc} u^b v^c, written into `out`.
void sym_contract(const Tensor3& t, std::span<const double> u, std::span<const double> v,
                  std::span<double> out);
std::vector<double> sym_contract(const Tensor3& t, std::span<const double> u,
                                 std::span<const double> v);

/// Frobenius norm of [U, V] for U = u^a T^a, V = v^a T^a, evaluated in
/// coefficient space through f and kappa.
double commutator_norm(const Tensor3& f, double kappa, std::span<const double> u,
                       std::span<const double> v);

/// Largest |f^{abe} f^{ecd} + f^{cbe} f^{aed} + f^{dbe} f^{ace}| over all index tuples.
double jacobi_residual(const Tensor3& f);

double antisymmetry_residual(const Tensor3& f);
double symmetry_residual(const Tensor3& d);

/// Real parts of Tr(T^a).
std::vector<double> generator_traces(const AlgebraBasis& basis);

ComplexMatrix expand(const AlgebraBasis& basis, std::span<const double> coefficients);

// Built-in bases. All use kappa = 1/2 on 2x2 matrices, except u1 which is {I/2}.
AlgebraBasis u1_basis();
AlgebraBasis su2_basis();
AlgebraBasis u2_basis();

/// "u1", "su2" or "u2".
AlgebraBasis named_basis(std::string_view name);

/// {"n": int, "generators": [[[re, im], ...], ...]} with row-major entries.
AlgebraBasis basis_from_json(const nlohmann::json& doc, const Tolerances& tol = {});
AlgebraBasis load_basis(const std::filesystem::path& path, const Tolerances& tol = {});
nlohmann::json basis_to_json(const AlgebraBasis& basis);

}  // namespace mlorenz
