// cli.hpp: the liouspec command-line front end, callable in-process.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace liouspec::cli {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    std::vector<double> values() const;
};

// Parses "LO:HI:N"; throws std::invalid_argument.
Range parse_range(const std::string& text);

struct RunConfig {
    std::string subcommand;
    std::string preset;
    double gamma2 = 0.1;
    double eta = 0.2;
    double delta = 0.1;
    double omega_s = 0.0;
    std::optional<Range> eta_range;
    std::optional<Range> gamma2_range;
    std::string nmax = "auto"; // integer or "auto"
    std::string out = "out";
    std::uint64_t seed = 12345;
    int workers = 1;
    std::set<std::string> formats{"csv", "json", "svg"};
    double alpha_scale = 1.2; // initial coherent state at alpha_scale * alpha_plus
    int points = 161;         // Wigner grid points per axis
    int samples = 400;        // time / tau samples
    int paths = 10000;        // telegraph Monte Carlo paths

    bool wants(const std::string& format) const { return formats.count(format) > 0; }
};

enum ExitCode : int { kOk = 0, kComputeFailure = 1, kUsage = 2 };

// Full command line (argv[0] included). Messages go to `out` / `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace liouspec::cli
