#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <mlorenz/analysis.hpp>
#include <mlorenz/dynamics.hpp>
#include <mlorenz/integrator.hpp>
#include <mlorenz/models.hpp>

namespace mlorenz::cli {

namespace {

enum class Command { simulate, lyapunov, sweep, commutators, map_llg };

struct Defaults {
    double horizon;
    std::int64_t record_every;
    std::size_t samples;
    const char* format;
};

Defaults defaults_for(Command c) {
    switch (c) {
        case Command::simulate: return {100.0, 10, 1, "csv"};
        case Command::lyapunov: return {2000.0, 1, 8, "json"};
        case Command::sweep: return {500.0, 1, 4, "csv"};
        case Command::commutators: return {20.0, 100, 32, "csv"};
        case Command::map_llg: return {5.0, 1, 1, "csv"};
    }
    return {100.0, 10, 1, "csv"};
}

// Shortest text that reads back to the same double.
std::string num(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.17g}", v);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("nan"); }

nlohmann::json json_num(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

struct Resolved {
    RunConfig cfg;
    Command command;
    double horizon;
    std::int64_t record_every;
    std::size_t samples;
    std::string format;

    LorenzParams params() const { return {cfg.sigma, cfg.r, cfg.b}; }

    std::int64_t n_steps() const {
        return static_cast<std::int64_t>(std::llround(horizon / cfg.dt));
    }

    InitialCondition init() const {
        InitialCondition ic;
        ic.scale = cfg.init_scale;
        if (cfg.init == "full") {
            ic.support = InitSupport::full;
        } else if (cfg.init == "trace_only") {
            ic.support = InitSupport::trace_only;
        } else if (cfg.init == "cartan") {
            ic.support = InitSupport::cartan;
        } else {
            throw ConfigError("--init must be one of full, trace_only, cartan");
        }
        return ic;
    }

    IntegrationSpec integration() const {
        IntegrationSpec spec;
        spec.dt = cfg.dt;
        spec.n_steps = n_steps();
        spec.record_every = record_every;
        return spec;
    }

    LyapunovOptions lyapunov() const {
        LyapunovOptions o;
        o.dt = cfg.dt;
        o.horizon = horizon;
        o.renorm_interval = cfg.renorm;
        o.burn_in_fraction = cfg.burn_in;
        o.init = init();
        return o;
    }
};

Resolved resolve(const RunConfig& cfg, Command command) {
    const auto d = defaults_for(command);
    Resolved r{cfg, command, cfg.horizon.value_or(d.horizon),
               cfg.record_every.value_or(d.record_every), cfg.samples.value_or(d.samples),
               cfg.format.value_or(d.format)};
    if (r.format != "csv" && r.format != "json") throw ConfigError("--format must be csv or json");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("--dt must be positive");
    if (!(r.horizon >= 0.0) || !std::isfinite(r.horizon)) {
        throw ConfigError("--horizon must be non-negative");
    }
    if (r.horizon == 0.0 && command != Command::simulate) {
        throw ConfigError("--horizon must be positive");
    }
    if (r.record_every < 1) throw ConfigError("--record-every must be >= 1");
    if (r.samples < 1) throw ConfigError("--samples must be >= 1");
    if (!(cfg.init_scale > 0.0)) throw ConfigError("--init-scale must be positive");
    if (cfg.renorm < 1) throw ConfigError("--renorm must be >= 1");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) throw ConfigError("--burn-in must be in [0, 1)");
    r.init();
    return r;
}

bool is_llg(const std::string& system) { return system == "llg"; }

LorenzModel make_model(const RunConfig& cfg) {
    std::filesystem::path basis = cfg.basis;
    std::string name = cfg.system == "u2" ? "u2_paper" : cfg.system;
    if (!parse_system_kind(name) && std::filesystem::path(name).extension() == ".json") {
        basis = name;
        name = "custom_basis";
    }
    const auto kind = parse_system_kind(name);
    if (!kind) {
        throw ConfigError(fmt::format(
            "unknown system '{}' (classical, llg, u1, su2, u2 (= u2_paper), u2_derived, u2_paper, "
            "custom_basis or a basis .json path)",
            cfg.system));
    }
    if (*kind == SystemKind::custom_basis && basis.empty()) {
        throw ConfigError("custom_basis needs --basis <path>");
    }
    return LorenzModel::load(*kind, basis);
}

void warn_params(const LorenzParams& p, std::ostream& err) {
    if (!(p.sigma > 0.0) || !(p.b > 0.0)) {
        err << "warning: sigma and b should be positive for physically meaningful runs\n";
    }
}

void warn_basis(const LorenzModel& model, std::ostream& err) {
    if (model.has_basis() && !model.basis().has_identity_component) {
        err << "warning: basis of " << model.name()
            << " has no u(1) factor; the dynamics are linear when its d tensor vanishes\n";
    }
}

void emit(const Resolved& r, const std::string& text, std::ostream& out) {
    if (r.cfg.out.empty()) {
        out << text;
        return;
    }
    const auto tmp = std::filesystem::path(r.cfg.out.string() + ".partial");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", tmp.string()));
        f << text;
        if (!f.flush()) {
            std::filesystem::remove(tmp);
            throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, r.cfg.out);
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<const std::vector<double>*>& columns, const std::string& format,
                  const nlohmann::json& meta = nlohmann::json::object()) {
    const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    if (format == "json") {
        nlohmann::json doc = meta;
        for (std::size_t c = 0; c < header.size(); ++c) {
            auto& col = doc[header[c]] = nlohmann::json::array();
            for (double v : *columns[c]) col.push_back(json_num(v));
        }
        return doc.dump(2) + "\n";
    }
    fmt::memory_buffer buf;
    for (std::size_t c = 0; c < header.size(); ++c) {
        fmt::format_to(std::back_inserter(buf), "{}{}", c ? "," : "", header[c]);
    }
    buf.push_back('\n');
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            fmt::format_to(std::back_inserter(buf), "{}{}", c ? "," : "", num((*columns[c])[k]));
        }
        buf.push_back('\n');
    }
    return fmt::to_string(buf);
}

State starting_state(const Resolved& r, const LorenzModel& model) {
    if (r.cfg.state) {
        if (r.cfg.state->size() != model.dimension()) {
            throw ConfigError(fmt::format("--state needs {} values for {}, got {}",
                                          model.dimension(), model.name(), r.cfg.state->size()));
        }
        return *r.cfg.state;
    }
    return initial_state(model, r.init(), r.cfg.seed, 0);
}

int cmd_simulate(const Resolved& r, std::ostream& out, std::ostream& err) {
    const auto p = r.params();
    warn_params(p, err);
    const auto spec = r.integration();
    const nlohmann::json meta{{"system", r.cfg.system}};

    if (is_llg(r.cfg.system)) {
        const auto q = llg_to_lorenz(p);
        const auto classical = LorenzModel::classical();
        const auto xyz = starting_state(r, classical);
        const auto m0 = map_state_lorenz_to_llg({xyz[0], xyz[1], xyz[2]}, p);
        const auto traj = integrate(
            [&](double, std::span<const double> s, std::span<double> ds) {
                const auto v = llg_rhs({s[0], s[1], s[2]}, q);
                std::copy(v.begin(), v.end(), ds.begin());
            },
            State(m0.begin(), m0.end()), spec);
        std::vector<std::vector<double>> cols(3);
        for (const auto& s : traj.states)
            for (int i = 0; i < 3; ++i) cols[i].push_back(s[i]);
        emit(r, table({"t", "mx", "my", "mz"}, {&traj.times, &cols[0], &cols[1], &cols[2]},
                      r.format, meta),
             out);
        return kOk;
    }

    const auto model = make_model(r.cfg);
    warn_basis(model, err);
    const auto s0 = starting_state(r, model);
    const auto traj = integrate(
        [&](double, std::span<const double> s, std::span<double> ds) { model.rhs(s, p, ds); }, s0,
        spec);

    if (!model.has_basis()) {
        std::vector<std::vector<double>> cols(3);
        for (const auto& s : traj.states)
            for (int i = 0; i < 3; ++i) cols[i].push_back(s[i]);
        emit(r, table({"t", "x", "y", "z"}, {&traj.times, &cols[0], &cols[1], &cols[2]},
                      r.format, meta),
             out);
        return kOk;
    }

    const auto obs = observables(traj, model.basis(), model.tensors());
    emit(r,
         table({"t", "tr_x", "tr_y", "tr_z", "comm_xy", "comm_yz", "comm_xz", "cas_x", "cas_y",
                "cas_z"},
               {&obs.times, &obs.tr_x, &obs.tr_y, &obs.tr_z, &obs.comm_xy, &obs.comm_yz,
                &obs.comm_xz, &obs.casimir_x, &obs.casimir_y, &obs.casimir_z},
               r.format, meta),
         out);
    return kOk;
}

int cmd_lyapunov(const Resolved& r, std::ostream& out, std::ostream& err) {
    if (is_llg(r.cfg.system)) throw ConfigError("lyapunov does not support the llg system");
    const auto p = r.params();
    warn_params(p, err);
    const auto model = make_model(r.cfg);
    warn_basis(model, err);
    const auto est =
        estimate_lyapunov(model, p, r.lyapunov(), r.cfg.seed, r.samples, r.cfg.threads);

    std::string text;
    if (r.format == "json") {
        nlohmann::json rec{{"system", model.name()},
                           {"r", p.r},
                           {"lambda_max", est.lambda_max},
                           {"stderr", est.std_error},
                           {"lambda_u1", json_num(est.lambda_u1)},
                           {"lambda_su2", json_num(est.lambda_su2)},
                           {"stderr_u1", json_num(est.std_error_u1)},
                           {"stderr_su2", json_num(est.std_error_su2)},
                           {"n_samples", est.n_samples},
                           {"seed", r.cfg.seed}};
        if (est.lambda_u1) {
            rec["block_definition"] =
                "growth of tangents started on the trace / traceless coefficient slots under "
                "the full Jacobian";
        }
        text = rec.dump(2) + "\n";
    } else {
        text = fmt::format(
            "r,lambda_max,stderr,lambda_u1,lambda_su2,n_samples,seed\n{},{},{},{},{},{},{}\n",
            num(p.r), num(est.lambda_max), num(est.std_error), num(est.lambda_u1),
            num(est.lambda_su2), est.n_samples, r.cfg.seed);
    }
    emit(r, text, out);
    if (!r.cfg.out.empty()) {
        out << fmt::format("lambda_max = {:.6f} +- {:.6f} ({} samples)\n", est.lambda_max,
                           est.std_error, est.n_samples);
    }
    return kOk;
}

int cmd_sweep(const Resolved& r, std::ostream& out, std::ostream& err) {
    if (is_llg(r.cfg.system)) throw ConfigError("sweep does not support the llg system");
    SweepSpec spec;
    try {
        spec.r_values = r_grid(r.cfg.r_min, r.cfg.r_max, r.cfg.r_step);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("empty r grid: {}", e.what()));
    }
    spec.sigma = r.cfg.sigma;
    spec.b = r.cfg.b;
    spec.samples_per_r = r.samples;
    spec.seed = r.cfg.seed;
    spec.lyapunov = r.lyapunov();
    spec.threads = r.cfg.threads;
    warn_params({spec.sigma, r.cfg.r_min, spec.b}, err);

    const auto model = make_model(r.cfg);
    warn_basis(model, err);
    const auto diagram = sweep_r(model, spec);
    for (const auto& f : diagram.failures) err << "failed cell " << f << "\n";

    std::string rcrit_line;
    std::optional<double> rcrit;
    try {
        rcrit = detect_rcrit(diagram);
        rcrit_line = fmt::format("r_crit = {}", num(*rcrit));
    } catch (const TransitionError& e) {
        rcrit_line = fmt::format("r_crit = nan ({})", e.what());
    }

    std::string text;
    if (r.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < diagram.size(); ++i) {
            const auto& e = diagram.estimates[i];
            rows.push_back({{"r", diagram.r_values[i]},
                            {"lambda_mean", json_num(e.lambda_max)},
                            {"lambda_stderr", json_num(e.std_error)},
                            {"lambda_u1", json_num(e.lambda_u1)},
                            {"lambda_su2", json_num(e.lambda_su2)},
                            {"n_ok", diagram.n_ok[i]},
                            {"n_failed", diagram.n_failed[i]}});
        }
        nlohmann::json doc{{"system", model.name()}, {"sigma", spec.sigma}, {"b", spec.b},
                           {"samples_per_r", spec.samples_per_r}, {"seed", spec.seed},
                           {"rows", rows}, {"r_crit", json_num(rcrit)}};
        text = doc.dump(2) + "\n";
    } else {
        fmt::memory_buffer buf;
        fmt::format_to(std::back_inserter(buf),
                       "r,lambda_mean,lambda_stderr,lambda_u1,lambda_su2,n_ok,n_failed\n");
        for (std::size_t i = 0; i < diagram.size(); ++i) {
            const auto& e = diagram.estimates[i];
            const bool ok = diagram.n_ok[i] > 0;
            fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{}\n",
                           num(diagram.r_values[i]), ok ? num(e.lambda_max) : "nan",
                           ok ? num(e.std_error) : "nan", ok ? num(e.lambda_u1) : "nan",
                           ok ? num(e.lambda_su2) : "nan", diagram.n_ok[i], diagram.n_failed[i]);
        }
        text = fmt::to_string(buf);
    }
    emit(r, text, out);
    out << rcrit_line << "\n";
    return kOk;
}

int cmd_commutators(const Resolved& r, std::ostream& out, std::ostream& err) {
    if (is_llg(r.cfg.system)) throw ConfigError("commutators needs a matrix system");
    const auto p = r.params();
    warn_params(p, err);
    const auto model = make_model(r.cfg);
    warn_basis(model, err);
    if (!model.has_basis()) {
        throw ConfigError(fmt::format("commutators needs a matrix system, not {}", model.name()));
    }
    EnsembleSpec spec;
    spec.n_samples = r.samples;
    spec.init = r.init();
    spec.seed = r.cfg.seed;
    const auto ens = ensemble_average(model, p, spec, r.integration(), r.cfg.threads);
    const auto& m = ens.mean;
    const auto& s = ens.spread;
    emit(r,
         table({"t", "comm_xy_mean", "comm_xy_sd", "comm_yz_mean", "comm_yz_sd", "comm_xz_mean",
                "comm_xz_sd", "cas_x_mean", "cas_x_sd", "cas_y_mean", "cas_y_sd", "cas_z_mean",
                "cas_z_sd"},
               {&m.times, &m.comm_xy, &s.comm_xy, &m.comm_yz, &s.comm_yz, &m.comm_xz,
                &s.comm_xz, &m.casimir_x, &s.casimir_x, &m.casimir_y, &s.casimir_y,
                &m.casimir_z, &s.casimir_z},
               r.format,
               {{"system", model.name()}, {"n_samples", spec.n_samples}, {"seed", spec.seed}}),
         out);
    return kOk;
}

int cmd_map_llg(const Resolved& r, std::ostream& out, std::ostream&) {
    const auto p = r.params();
    LLGParams q;
    try {
        q = llg_to_lorenz(p);
    } catch (const DynamicsError& e) {
        throw ConfigError(e.what());
    }

    const auto classical = LorenzModel::classical();
    const auto xyz0 = starting_state(r, classical);
    const auto m0 = map_state_lorenz_to_llg({xyz0[0], xyz0[1], xyz0[2]}, p);
    const auto spec = r.integration();
    const auto lorenz = integrate(
        [&](double, std::span<const double> s, std::span<double> ds) {
            const auto v = lorenz_rhs({s[0], s[1], s[2]}, p);
            std::copy(v.begin(), v.end(), ds.begin());
        },
        xyz0, spec);
    const auto llg = integrate(
        [&](double, std::span<const double> s, std::span<double> ds) {
            const auto v = llg_rhs({s[0], s[1], s[2]}, q);
            std::copy(v.begin(), v.end(), ds.begin());
        },
        State(m0.begin(), m0.end()), spec);
    double deviation = 0.0;
    for (std::size_t k = 0; k < lorenz.size(); ++k) {
        const auto& m = llg.states[k];
        const auto back = map_state_llg_to_lorenz({m[0], m[1], m[2]}, p);
        for (int i = 0; i < 3; ++i) {
            deviation = std::max(deviation, std::abs(back[i] - lorenz.states[k][i]));
        }
    }

    auto vec = [](const Vec3& v) { return fmt::format("{}, {}, {}", num(v[0]), num(v[1]), num(v[2])); };
    std::string text;
    if (r.format == "json") {
        nlohmann::json doc{{"eta", q.eta},        {"beta", q.beta},
                           {"tau", q.tau},        {"d", q.torque_d},
                           {"horizon", r.horizon}, {"max_deviation", deviation}};
        text = doc.dump(2) + "\n";
    } else {
        text = fmt::format("eta = ({})\nbeta = ({})\ntau = ({})\nd = {}\nmax_deviation = {} "
                           "over {} time units\n",
                           vec(q.eta), vec(q.beta), vec(q.tau), num(q.torque_d), num(deviation),
                           num(r.horizon));
    }
    emit(r, text, out);
    return kOk;
}

}  // namespace

void apply_json(RunConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "system") cfg.system = v.get<std::string>();
        else if (key == "basis") cfg.basis = v.get<std::string>();
        else if (key == "sigma") cfg.sigma = v.get<double>();
        else if (key == "r") cfg.r = v.get<double>();
        else if (key == "b") cfg.b = v.get<double>();
        else if (key == "dt") cfg.dt = v.get<double>();
        else if (key == "horizon") cfg.horizon = v.get<double>();
        else if (key == "record_every") cfg.record_every = v.get<std::int64_t>();
        else if (key == "samples") cfg.samples = v.get<std::size_t>();
        else if (key == "init_scale") cfg.init_scale = v.get<double>();
        else if (key == "init") cfg.init = v.get<std::string>();
        else if (key == "state") cfg.state = v.get<std::vector<double>>();
        else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
        else if (key == "r_min") cfg.r_min = v.get<double>();
        else if (key == "r_max") cfg.r_max = v.get<double>();
        else if (key == "r_step") cfg.r_step = v.get<double>();
        else if (key == "burn_in") cfg.burn_in = v.get<double>();
        else if (key == "renorm") cfg.renorm = v.get<std::int64_t>();
        else if (key == "threads") cfg.threads = v.get<unsigned>();
        else if (key == "out") cfg.out = v.get<std::string>();
        else if (key == "format") cfg.format = v.get<std::string>();
        else if (key == "comment") continue;
        else throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classical, spin (LLG) and Lie-algebra-valued Lorenz systems"};
    app.require_subcommand(1);

    struct Flags {
        std::optional<std::string> config, system, basis, init, out, format;
        std::optional<double> sigma, r, b, dt, horizon, init_scale, r_min, r_max, r_step, burn_in;
        std::optional<std::int64_t> record_every, renorm;
        std::optional<std::size_t> samples;
        std::optional<std::uint64_t> seed;
        std::optional<unsigned> threads;
        std::vector<double> state;
    } f;

    const std::pair<Command, const char*> commands[] = {
        {Command::simulate, "simulate"},
        {Command::lyapunov, "lyapunov"},
        {Command::sweep, "sweep"},
        {Command::commutators, "commutators"},
        {Command::map_llg, "map-llg"},
    };
    const char* help[] = {
        "integrate one trajectory and write its observables",
        "ensemble estimate of the largest (and per-block) Lyapunov exponent",
        "Lyapunov phase diagram over an r grid plus the detected transition",
        "ensemble-averaged commutator norms and Casimirs",
        "print the LLG parameters realizing a Lorenz system and check the map",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* s = app.add_subcommand(commands[i].second, help[i]);
        s->add_option("--config", f.config, "JSON config; flags override its keys");
        s->add_option("--system", f.system,
                      "classical | llg | u1 | su2 | u2_derived | u2_paper | custom_basis | "
                      "<basis.json>");
        s->add_option("--basis", f.basis, "generator basis JSON for custom_basis");
        s->add_option("--sigma", f.sigma);
        s->add_option("--r", f.r);
        s->add_option("--b", f.b);
        s->add_option("--dt", f.dt);
        s->add_option("--horizon", f.horizon, "time units");
        s->add_option("--record-every", f.record_every, "steps between recorded samples");
        s->add_option("--samples", f.samples, "ensemble size (per r for sweep)");
        s->add_option("--init-scale", f.init_scale, "initial coefficients ~ U[-s, s]");
        s->add_option("--init", f.init, "full | trace_only | cartan");
        s->add_option("--state", f.state, "explicit initial coefficients")->delimiter(',');
        s->add_option("--seed", f.seed);
        s->add_option("--r-min", f.r_min);
        s->add_option("--r-max", f.r_max);
        s->add_option("--r-step", f.r_step);
        s->add_option("--burn-in", f.burn_in, "discarded fraction of Lyapunov runs");
        s->add_option("--renorm", f.renorm, "steps between tangent renormalizations");
        s->add_option("--threads", f.threads, "0 = available parallelism");
        s->add_option("--out", f.out, "output file (default: standard output)");
        s->add_option("--format", f.format, "csv | json");
        subs.push_back(s);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    Command command = Command::simulate;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) command = commands[i].first;

    try {
        RunConfig cfg;
        if (f.config) {
            std::ifstream in(*f.config);
            if (!in) throw ConfigError(fmt::format("cannot open config {}", *f.config));
            try {
                apply_json(cfg, nlohmann::json::parse(in));
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(fmt::format("config {}: {}", *f.config, e.what()));
            }
        }
        if (f.system) cfg.system = *f.system;
        if (f.basis) cfg.basis = *f.basis;
        if (f.sigma) cfg.sigma = *f.sigma;
        if (f.r) cfg.r = *f.r;
        if (f.b) cfg.b = *f.b;
        if (f.dt) cfg.dt = *f.dt;
        if (f.horizon) cfg.horizon = f.horizon;
        if (f.record_every) cfg.record_every = f.record_every;
        if (f.samples) cfg.samples = f.samples;
        if (f.init_scale) cfg.init_scale = *f.init_scale;
        if (f.init) cfg.init = *f.init;
        if (!f.state.empty()) cfg.state = f.state;
        if (f.seed) cfg.seed = *f.seed;
        if (f.r_min) cfg.r_min = *f.r_min;
        if (f.r_max) cfg.r_max = *f.r_max;
        if (f.r_step) cfg.r_step = *f.r_step;
        if (f.burn_in) cfg.burn_in = *f.burn_in;
        if (f.renorm) cfg.renorm = *f.renorm;
        if (f.threads) cfg.threads = *f.threads;
        if (f.out) cfg.out = *f.out;
        if (f.format) cfg.format = f.format;

        const auto resolved = resolve(cfg, command);
        switch (command) {
            case Command::simulate: return cmd_simulate(resolved, out, err);
            case Command::lyapunov: return cmd_lyapunov(resolved, out, err);
            case Command::sweep: return cmd_sweep(resolved, out, err);
            case Command::commutators: return cmd_commutators(resolved, out, err);
            case Command::map_llg: return cmd_map_llg(resolved, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const AlgebraError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return kOk;
}

}  // namespace mlorenz::cli
