#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using liouspec::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "liouspec");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("liouspec_cli_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("range parsing") {
    const auto r = liouspec::cli::parse_range("0.1:0.5:5");
    CHECK(r.n == 5);
    CHECK(r.values()[2] == doctest::Approx(0.3));
    CHECK(liouspec::cli::parse_range("2:2:1").values().size() == 1);
    CHECK_THROWS_AS(liouspec::cli::parse_range("0.5:0.1:3"), std::invalid_argument);
    CHECK_THROWS_AS(liouspec::cli::parse_range("0.1:0.5:0"), std::invalid_argument);
    CHECK_THROWS_AS(liouspec::cli::parse_range("0.1:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(liouspec::cli::parse_range("a:0.5:3"), std::invalid_argument);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    CHECK(invoke({"spectrum", "--eta-range", "0.3:0.1:4", "--out", scratch("u1").string()}).code == 2);
    CHECK(invoke({"spectrum", "--out", scratch("u2").string()}).code == 2);
    CHECK(invoke({"classical", "--format", "png", "--out", scratch("u3").string()}).code == 2);
    CHECK(invoke({"classical", "--preset", "fig9", "--out", scratch("u4").string()}).code == 2);
    CHECK(invoke({"wigner", "--preset", "fig4", "--out", scratch("u5").string()}).code == 2);
    CHECK(invoke({"classical", "--nmax", "ten", "--out", scratch("u6").string()}).code == 2);
    CHECK(invoke({"classical", "--gamma2", "-1", "--out", scratch("u7").string()}).code == 2);
    CHECK(invoke({"evolve", "--eta", "0.01", "--out", scratch("u8").string()}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("computation failures exit with 1") {
    // Pure gain with no saturation runs away in the mean-field integration.
    const auto r = invoke({"classical", "--gamma2", "0", "--eta", "0", "--out", scratch("f1").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("classical run writes its outputs and echoes the configuration") {
    const fs::path dir = scratch("classical");
    const auto r = invoke({"classical", "--gamma2", "1", "--eta", "0.75", "--nmax", "16", "--paths", "2000", "--samples",
                           "20", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"config.json", "classical.json", "mean_field.csv", "mean_field.svg", "telegraph.csv"})
        CHECK(fs::exists(dir / f));
    const auto cfg = nlohmann::json::parse(slurp(dir / "config.json"));
    CHECK(cfg["subcommand"] == "classical");
    CHECK(cfg["gamma2"] == 1.0);
    CHECK(cfg["nmax"] == "16");
    CHECK(cfg["paths"] == 2000);
    const auto out = nlohmann::json::parse(slurp(dir / "classical.json"));
    CHECK(out["regime"] == "bistable");
    CHECK(slurp(dir / "mean_field.csv").rfind("t,re_alpha,im_alpha\n", 0) == 0);
}

TEST_CASE("runs are deterministic and formats are selectable") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> base{"gapmap", "--gamma2-range", "0.5:1:2", "--eta-range", "0.02:0.4:3", "--nmax", "12",
                                        "--format", "csv,json"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string(), "--workers", "2"});
    REQUIRE(invoke(args_a).code == 0);
    REQUIRE(invoke(args_b).code == 0);
    CHECK(slurp(a / "gapmap.csv") == slurp(b / "gapmap.csv"));
    CHECK(!fs::exists(a / "gapmap.svg"));
    CHECK(fs::exists(a / "gapmap.json"));
    // Re-running into the same directory succeeds and reproduces the file.
    const std::string first = slurp(a / "gapmap.csv");
    REQUIRE(invoke(args_a).code == 0);
    CHECK(slurp(a / "gapmap.csv") == first);
    CHECK(first.rfind("gamma2_ratio,eta_ratio,Gamma1,Gamma2,nu1,nu2,log10_gap_ratio,n_max_used\n", 0) == 0);
}

TEST_CASE("spectrum, correlate, wigner and evolve at small truncation") {
    const fs::path dir = scratch("small");
    CHECK(invoke({"spectrum", "--gamma2", "1", "--eta-range", "0.05:0.2:4", "--nmax", "12", "--out", (dir / "s").string()}).code == 0);
    CHECK(slurp(dir / "s" / "spectrum.csv").rfind("eta_ratio,re_lambda1,im_lambda1,", 0) == 0);
    CHECK(invoke({"correlate", "--gamma2", "1", "--eta", "0.75", "--nmax", "14", "--samples", "20", "--out", (dir / "c").string()}).code == 0);
    CHECK(slurp(dir / "c" / "spectrum_g1_e0.75.csv").rfind("omega_over_gamma1,S,S_mode1_only\n", 0) == 0);
    CHECK(invoke({"wigner", "--gamma2", "3", "--eta", "2", "--nmax", "14", "--points", "21", "--out", (dir / "w").string()}).code == 0);
    const auto w = nlohmann::json::parse(slurp(dir / "w" / "wigner.json"));
    CHECK(w.contains("g3_e2_mu1_half"));
    CHECK(w["g3_e2_mu1_half"]["normalization"].get<double>() == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(invoke({"evolve", "--gamma2", "1", "--eta", "0.75", "--alpha-scale", "1", "--nmax", "16", "--samples", "10",
                  "--out", (dir / "e").string()})
              .code == 0);
    CHECK(fs::exists(dir / "e" / "trajectory_g1_e0.75.csv"));
    CHECK(fs::exists(dir / "e" / "metastable_g1_e0.75.csv"));
}
