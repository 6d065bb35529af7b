// cli.hpp
// The mlorenz command-line front end as a callable library.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mlorenz::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kConfigError = 2 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully resolved settings for one subcommand. Unset optionals take the
/// subcommand's default.
struct RunConfig {
    std::string system = "classical";
    std::filesystem::path basis;
    double sigma = 10.0;
    double r = 28.0;
    double b = 8.0 / 3.0;
    double dt = 1e-3;
    std::optional<double> horizon;
    std::optional<std::int64_t> record_every;
    std::optional<std::size_t> samples;
    double init_scale = 10.0;
    std::string init = "full";
    std::optional<std::vector<double>> state;
    std::uint64_t seed = 1;
    double r_min = 20.0;
    double r_max = 30.0;
    double r_step = 0.5;
    double burn_in = 0.1;
    std::int64_t renorm = 100;
    unsigned threads = 0;
    std::filesystem::path out;
    std::optional<std::string> format;
};

/// Applies the keys of a JSON config document onto `cfg`. Unknown keys are
/// rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);

/// `args` excludes the program name. Writes results to `out` (or to --out)
/// and diagnostics to `err`; returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlorenz::cli
