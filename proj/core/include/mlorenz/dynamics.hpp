// dynamics.hpp
// Vector fields for the classical Lorenz system, the LLG spin system and the
// Lie-algebra-valued (matrix) Lorenz system.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mlorenz/algebra.hpp"

namespace mlorenz {

using Vec3 = std::array<double, 3>;

class DynamicsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LorenzParams {
    double sigma = 10.0;
    double r = 28.0;
    double b = 8.0 / 3.0;
};

/// Reduced-unit parameters of a single macrospin with three anisotropy axes,
/// Bloch-Bloembergen damping and a torque d along z.
struct LLGParams {
    Vec3 eta{0.0, 0.0, 0.0};
    std::array<Vec3, 3> axes{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    Vec3 beta{0.0, 0.0, 0.0};
    // tau_i = +infinity disables damping along i.
    Vec3 tau{1.0, 1.0, 1.0};
    double torque_d = 0.0;
};

/// SI material constants: anisotropy energies K_i, applied field B.
struct MaterialParams {
    Vec3 K{0.0, 0.0, 0.0};
    Vec3 B{0.0, 0.0, 0.0};
    double mu0 = 1.0;
    double Ms = 1.0;
};

struct ReducedParams {
    Vec3 eta;
    Vec3 beta;
};

Vec3 lorenz_rhs(const Vec3& s, const LorenzParams& p);

/// Analytic Jacobian of the classical Lorenz field applied to v.
Vec3 lorenz_jvp(const Vec3& s, const Vec3& v, const LorenzParams& p);

ReducedParams material_to_reduced(const MaterialParams& mp);

Vec3 llg_rhs(const Vec3& M, const LLGParams& p);

/// Throws DynamicsError when any axis is not a unit vector or tau_i <= 0.
void validate(const LLGParams& p);

/// LLG parameters whose dynamics is the Lorenz flow under M = (x, y, z - r - sigma).
LLGParams llg_to_lorenz(const LorenzParams& p);

Vec3 map_state_lorenz_to_llg(const Vec3& xyz, const LorenzParams& p);
Vec3 map_state_llg_to_lorenz(const Vec3& M, const LorenzParams& p);

/// View of a flat matrix-Lorenz state laid out as [x^0..x^{m-1}, y^..., z^...].
template <typename T>
struct CoefficientBlocks {
    std::span<T> x, y, z;

    explicit CoefficientBlocks(std::span<T> flat)
        : x(flat.subspan(0, flat.size() / 3)),
          y(flat.subspan(flat.size() / 3, flat.size() / 3)),
          z(flat.subspan(2 * (flat.size() / 3), flat.size() / 3)) {}
};

struct MatrixLorenzState {
    std::vector<double> x, y, z;

    std::vector<double> flatten() const;
    static MatrixLorenzState unflatten(std::span<const double> flat);
};

/// ds/dt for the matrix Lorenz system with quadratic coupling tensor `d`:
///   x' = sigma (y - x),  y' = -y + r x - d(x, z),  z' = -b z + d(x, y)
/// with d(u, v)^a = d^{abc} u^b v^c. `out` must have the size of `state`.
void matrix_lorenz_rhs(std::span<const double> state, const LorenzParams& p, const Tensor3& d,
                       std::span<double> out);
MatrixLorenzState matrix_lorenz_rhs(const MatrixLorenzState& s, const LorenzParams& p,
                                    const Tensor3& d);

/// Directional derivative of matrix_lorenz_rhs at `state` along `tangent`.
void matrix_lorenz_jvp(std::span<const double> state, std::span<const double> tangent,
                       const LorenzParams& p, const Tensor3& d, std::span<double> out);

enum class U2Convention {
    // d tensor of the standard u(2) basis {I/2, sigma^a/2}.
    derived_d,
    // Coefficients as printed in the split u(1) x su(2) equations.
    paper_eq7,
};

/// u(2) right-hand side on a 12-component flat state.
void u2_rhs(std::span<const double> state, const LorenzParams& p, U2Convention convention,
            std::span<double> out);

/// Coupling tensor reproducing the printed u(2) coefficients:
/// t^{000} = 1, t^{0bb} = 2, t^{b0b} = t^{bb0} = 1 for b = 1..3.
/// Symmetric in its last two indices only.
Tensor3 u2_paper_coupling();

/// Single-entry coupling t^{000} = 1; matrix_lorenz_rhs with it is the classical field.
Tensor3 classical_coupling();

}  // namespace mlorenz
