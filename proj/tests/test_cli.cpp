#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using mlorenz::cli::run_cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::out_of_range(name);
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    auto lines = split(text, '\n');
    REQUIRE_FALSE(lines.empty());
    csv.header = split(lines[0], ',');
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i].rfind("r_crit", 0) == 0) continue;
        std::vector<double> row;
        for (const auto& cell : split(lines[i], ',')) row.push_back(std::stod(cell));
        csv.rows.push_back(row);
    }
    return csv;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fmt_state(double c) {
    std::ostringstream s;
    s.precision(17);
    s << c << ',' << c << ',' << 27.0;
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "mlorenz_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("map-llg prints the parameter map and a small deviation") {
    const auto res = run({"map-llg", "--sigma", "10", "--r", "28", "--b", "2.6666666666666665"});
    REQUIRE(res.code == 0);
    CHECK(res.out.find("d = -101.33333333333333") != std::string::npos);
    CHECK(res.out.find("tau = (0.10000000000000001, 1, 0.375)") !=
          std::string::npos);

    const auto js = run({"map-llg", "--format", "json"});
    REQUIRE(js.code == 0);
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc.at("max_deviation").get<double>() < 1e-9);
    CHECK(doc.at("eta") == nlohmann::json::array({2.0, 1.0, 1.0}));

    const auto unit = run({"map-llg", "--sigma", "1", "--r", "0", "--b", "1", "--format", "json"});
    REQUIRE(unit.code == 0);
    CHECK(nlohmann::json::parse(unit.out).at("tau") == nlohmann::json::array({1.0, 1.0, 1.0}));

    const auto bad = run({"map-llg", "--sigma", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("sigma") != std::string::npos);
}

TEST_CASE("simulate schemas and trivial runs") {
    SUBCASE("horizon 0 writes the initial state with 17 significant digits") {
        const auto res = run({"simulate", "--horizon", "0", "--state", "0.1,0.2,0.3"});
        REQUIRE(res.code == 0);
        CHECK(res.out == "t,x,y,z\n0,0.10000000000000001,0.20000000000000001,"
                         "0.29999999999999999\n");
    }
    SUBCASE("classical fixed point stays put") {
        const double c = std::sqrt(8.0 / 3.0 * 27.0);
        const auto state = fmt_state(c);
        const auto res = run({"simulate", "--horizon", "5", "--state", state});
        REQUIRE(res.code == 0);
        const auto csv = parse_csv(res.out);
        REQUIRE(csv.rows.size() == 501);
        for (const auto& row : csv.rows) {
            CHECK(std::abs(row[1] - c) <= 1e-10);
            CHECK(std::abs(row[3] - 27.0) <= 1e-10);
        }
    }
    SUBCASE("u2 traces stay bounded") {
        const auto res = run({"simulate", "--system", "u2_paper", "--horizon", "100"});
        REQUIRE(res.code == 0);
        const auto csv = parse_csv(res.out);
        CHECK(csv.header == std::vector<std::string>{"t", "tr_x", "tr_y", "tr_z", "comm_xy",
                                                     "comm_yz", "comm_xz", "cas_x", "cas_y",
                                                     "cas_z"});
        CHECK(csv.rows.size() == 10001);
        for (const auto& row : csv.rows)
            for (std::size_t c = 1; c <= 3; ++c) CHECK(std::abs(row[c]) < 100.0);
    }
    SUBCASE("u2 selects the u2_paper convention") {
        const auto alias = run({"simulate", "--system", "u2", "--horizon", "1"});
        const auto named = run({"simulate", "--system", "u2_paper", "--horizon", "1"});
        REQUIRE(alias.code == 0);
        CHECK(alias.out == named.out);
    }
    SUBCASE("llg trajectory") {
        const auto res = run({"simulate", "--system", "llg", "--horizon", "1"});
        REQUIRE(res.code == 0);
        CHECK(res.out.rfind("t,mx,my,mz\n", 0) == 0);
    }
    SUBCASE("json output") {
        const auto res =
            run({"simulate", "--system", "su2", "--horizon", "0.1", "--r", "0.5", "--format",
                 "json"});
        REQUIRE(res.code == 0);
        const auto doc = nlohmann::json::parse(res.out);
        CHECK(doc.at("t").size() == 11);
        CHECK(doc.at("comm_xy").size() == 11);
    }
}

TEST_CASE("divergence exits 1 and leaves no file") {
    const auto path = scratch("diverge.csv");
    fs::remove(path);
    const auto res = run({"simulate", "--system", "su2", "--r", "28", "--horizon", "20", "--out",
                          path.string()});
    CHECK(res.code == 1);
    CHECK(res.err.find("step") != std::string::npos);
    CHECK_FALSE(fs::exists(path));
    CHECK_FALSE(fs::exists(path.string() + ".partial"));
}

TEST_CASE("lyapunov record") {
    const auto res = run({"lyapunov", "--system", "u2_paper", "--horizon", "5", "--samples", "2",
                          "--seed", "3"});
    REQUIRE(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    for (const auto* key : {"r", "lambda_max", "stderr", "lambda_u1", "lambda_su2", "n_samples",
                            "seed"})
        CHECK(doc.contains(key));
    CHECK(doc.at("n_samples") == 2);
    CHECK(doc.at("seed") == 3);
    CHECK(doc.at("lambda_u1").is_number());
    CHECK(doc.contains("block_definition"));

    const auto classical = run({"lyapunov", "--horizon", "5", "--samples", "1", "--format",
                                "csv"});
    REQUIRE(classical.code == 0);
    const auto csv = parse_csv(classical.out);
    CHECK(csv.header == std::vector<std::string>{"r", "lambda_max", "stderr", "lambda_u1",
                                                 "lambda_su2", "n_samples", "seed"});
    CHECK(std::isnan(csv.rows.at(0)[3]));
}

TEST_CASE("config file with flag overrides") {
    const auto cfg = scratch("config.json");
    {
        std::ofstream out(cfg);
        out << R"({"system": "classical", "r": 15.0, "horizon": 2.0, "samples": 1,
                   "format": "csv"})";
    }
    const auto from_file = run({"lyapunov", "--config", cfg.string()});
    REQUIRE(from_file.code == 0);
    CHECK(parse_csv(from_file.out).rows.at(0)[0] == 15.0);
    const auto overridden = run({"lyapunov", "--config", cfg.string(), "--r", "20"});
    REQUIRE(overridden.code == 0);
    CHECK(parse_csv(overridden.out).rows.at(0)[0] == 20.0);

    {
        std::ofstream out(cfg);
        out << R"({"sigmaa": 3})";
    }
    CHECK(run({"lyapunov", "--config", cfg.string()}).code == 2);
    CHECK(run({"lyapunov", "--config", "/nonexistent.json"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--system", "so5"}).code == 2);
    CHECK(run({"simulate", "--format", "xml"}).code == 2);
    CHECK(run({"simulate", "--bogus"}).code == 2);
    CHECK(run({"sweep", "--r-min", "30", "--r-max", "20"}).code == 2);
    CHECK(run({"sweep", "--r-step", "0"}).code == 2);
    CHECK(run({"commutators", "--system", "classical"}).code == 2);
    CHECK(run({"lyapunov", "--horizon", "0"}).code == 2);
    CHECK(run({"simulate", "--system", "custom_basis"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep output is independent of the thread count") {
    const auto a = scratch("sweep_1.csv");
    const auto b = scratch("sweep_3.csv");
    const std::vector<std::string> base{"sweep",    "--system",  "u2_paper", "--r-min", "10",
                                        "--r-max",  "28",        "--r-step", "9",       "--samples",
                                        "2",        "--horizon", "5"};
    auto with = [&](const std::string& threads, const fs::path& out) {
        auto args = base;
        args.insert(args.end(), {"--threads", threads, "--out", out.string()});
        return run(args);
    };
    const auto r1 = with("1", a);
    const auto r3 = with("3", b);
    REQUIRE(r1.code == 0);
    REQUIRE(r3.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(r1.out.rfind("r_crit = ", 0) == 0);
    const auto csv = parse_csv(slurp(a));
    CHECK(csv.header == std::vector<std::string>{"r", "lambda_mean", "lambda_stderr", "lambda_u1",
                                                 "lambda_su2", "n_ok", "n_failed"});
    CHECK(csv.rows.size() == 3);
}

TEST_CASE("sweep records failed cells") {
    const auto res = run({"sweep", "--system", "su2", "--r-min", "0.5", "--r-max", "28",
                          "--r-step", "27.5", "--samples", "1", "--horizon", "10"});
    REQUIRE(res.code == 0);
    const auto csv = parse_csv(res.out);
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.rows[0][5] == 1.0);
    CHECK(csv.rows[1][6] == 1.0);
    CHECK(std::isnan(csv.rows[1][1]));
    CHECK(res.err.find("failed cell r=28") != std::string::npos);
}

TEST_CASE("commutators") {
    SUBCASE("single sample has zero spread") {
        const auto res = run({"commutators", "--system", "u2_paper", "--r", "15", "--samples", "1",
                              "--horizon", "2"});
        REQUIRE(res.code == 0);
        const auto csv = parse_csv(res.out);
        CHECK(csv.header.size() == 13);
        CHECK(csv.header[1] == "comm_xy_mean");
        CHECK(csv.header[12] == "cas_z_sd");
        for (const auto& row : csv.rows)
            for (std::size_t c = 2; c < 13; c += 2) CHECK(row[c] == 0.0);
    }
    SUBCASE("Cartan-aligned ensemble has vanishing commutators") {
        const auto res = run({"commutators", "--system", "u2_derived", "--r", "15", "--samples",
                              "4", "--horizon", "10", "--init", "cartan"});
        REQUIRE(res.code == 0);
        const auto csv = parse_csv(res.out);
        for (const auto& row : csv.rows)
            for (std::size_t c = 1; c <= 6; ++c) CHECK(row[c] <= 1e-10);
    }
}

TEST_CASE("shipped recipes parse and run") {
    const fs::path dir = MLORENZ_RECIPES_DIR;
    CHECK(run({"simulate", "--config", (dir / "fig1.json").string(), "--horizon", "1"}).code == 0);
    CHECK(run({"sweep", "--config", (dir / "fig2.json").string(), "--r-min", "28", "--r-max",
               "28", "--samples", "1", "--horizon", "2"})
              .code == 0);
    CHECK(run({"commutators", "--config", (dir / "fig3.json").string(), "--samples", "2",
               "--horizon", "1"})
              .code == 0);
}
