#include <fmt/format.h>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mlorenz/algebra.hpp"

namespace mlorenz {

AlgebraBasis basis_from_json(const nlohmann::json& doc, const Tolerances& tol) {
    try {
        const auto n = doc.at("n").get<std::size_t>();
        const auto& gens = doc.at("generators");
        if (!gens.is_array() || gens.empty()) {
            throw AlgebraError("'generators' must be a non-empty array");
        }
        std::vector<ComplexMatrix> out;
        out.reserve(gens.size());
        for (std::size_t g = 0; g < gens.size(); ++g) {
            const auto& entries = gens[g];
            if (!entries.is_array() || entries.size() != n * n) {
                throw AlgebraError(fmt::format(
                    "generator {} must list {} row-major [re, im] entries", g, n * n));
            }
            ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t k = 0; k < n * n; ++k) {
                const auto& z = entries[k];
                if (!z.is_array() || z.size() != 2) {
                    throw AlgebraError(fmt::format(
                        "generator {} entry {} must be a [re, im] pair", g, k));
                }
                m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
                    {z[0].get<double>(), z[1].get<double>()};
            }
            out.push_back(std::move(m));
        }
        return validate_basis(std::move(out), tol);
    } catch (const nlohmann::json::exception& e) {
        throw AlgebraError(std::string("malformed basis document: ") + e.what());
    }
}

AlgebraBasis load_basis(const std::filesystem::path& path, const Tolerances& tol) {
    std::ifstream in(path);
    if (!in) throw AlgebraError(fmt::format("cannot open basis file '{}'", path.string()));
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw AlgebraError(fmt::format("'{}': {}", path.string(), e.what()));
    }
    return basis_from_json(doc, tol);
}

nlohmann::json basis_to_json(const AlgebraBasis& basis) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : basis.generators) {
        nlohmann::json entries = nlohmann::json::array();
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                entries.push_back({g(i, j).real(), g(i, j).imag()});
        gens.push_back(std::move(entries));
    }
    return {{"n", basis.n}, {"generators", std::move(gens)}};
}

}  // namespace mlorenz
