#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "liouspec/classical.hpp"
#include "liouspec/correlations.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/evolution.hpp"
#include "liouspec/io.hpp"
#include "liouspec/metastable.hpp"
#include "liouspec/parallel.hpp"
#include "liouspec/phasespace.hpp"
#include "liouspec/spectral.hpp"

namespace liouspec::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using io::fmt;

std::vector<double> Range::values() const {
    if (n < 1) return {};
    if (n == 1) return {lo};
    return linear_spaced(lo, hi, n);
}

Range parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("range must look like LO:HI:N, got '" + text + "'");
    Range r;
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("bad LO in '" + text + "'");
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("bad HI in '" + text + "'");
    r.n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("bad N in '" + text + "'");
    if (r.n < 1 || !(r.hi >= r.lo) || (r.n > 1 && !(r.hi > r.lo)))
        throw std::invalid_argument("empty sweep range '" + text + "'");
    return r;
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json range_json(const std::optional<Range>& r) {
    if (!r) return nullptr;
    return {{"lo", r->lo}, {"hi", r->hi}, {"n", r->n}};
}

json config_json(const RunConfig& c) {
    return {{"subcommand", c.subcommand},
            {"preset", c.preset},
            {"gamma2", c.gamma2},
            {"eta", c.eta},
            {"delta", c.delta},
            {"omega_s", c.omega_s},
            {"eta_range", range_json(c.eta_range)},
            {"gamma2_range", range_json(c.gamma2_range)},
            {"nmax", c.nmax},
            {"out", c.out},
            {"seed", c.seed},
            {"workers", c.workers},
            {"formats", std::vector<std::string>(c.formats.begin(), c.formats.end())},
            {"alpha_scale", c.alpha_scale},
            {"points", c.points},
            {"samples", c.samples},
            {"paths", c.paths}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream o(path);
    if (!o) throw Error("cannot open " + path.string() + " for writing");
    o << j.dump(2) << '\n';
}

json complex_json(Complex z) { return {z.real(), z.imag()}; }


ModelParams params_of(const RunConfig& c, double gamma2, double eta) {
    ModelParams p;
    p.gamma2 = gamma2;
    p.eta = eta;
    p.delta = c.delta;
    p.omega_s = c.omega_s;
    return p;
}

TruncationPolicy policy_of(const RunConfig& c) {
    TruncationPolicy t;
    if (c.nmax == "auto") {
        t.automatic = true;
    } else {
        t.automatic = false;
        t.fixed = std::stoi(c.nmax);
    }
    return t;
}

// Truncation for one parameter point, raised to `floor` if needed.
int resolve_nmax(const RunConfig& c, const ModelParams& p, int floor = 0) {
    const int n = choose_truncation(p, policy_of(c)).n_max;
    return std::max(n, floor);
}

std::string tag_of(double gamma2, double eta) {
    std::ostringstream s;
    s << "g" << gamma2 << "_e" << eta;
    return s.str();
}

struct Outputs {
    fs::path dir;
    const RunConfig& cfg;

    fs::path operator()(const std::string& name) const { return dir / name; }
};

Outputs prepare(const RunConfig& c) {
    fs::create_directories(c.out);
    write_json(fs::path(c.out) / "config.json", config_json(c));
    return {fs::path(c.out), c};
}

// ---- spectrum ----------------------------------------------------------------

int cmd_spectrum(RunConfig c, std::ostream& out, std::ostream& err) {
    if (c.preset == "fig1c") {
        c.gamma2 = 0.1;
        c.delta = 0.1;
        if (!c.eta_range) c.eta_range = Range{0.01, 0.3, 59};
    }
    if (!c.eta_range) throw UsageError("spectrum needs --eta-range LO:HI:N");
    const auto etas = c.eta_range->values();
    if (etas.empty()) throw UsageError("empty sweep range");
    const auto o = prepare(c);

    struct Row {
        GapPoint g;
        std::optional<std::string> error;
    };
    const auto rows = parallel_map(etas.size(), c.workers, [&](std::size_t k) {
        Row r;
        ModelParams p = params_of(c, c.gamma2, etas[k]);
        try {
            p.n_max = resolve_nmax(c, p);
            r.g = gap_point(p);
        } catch (const std::exception& e) {
            r.g.eta_ratio = etas[k];
            r.error = e.what();
        }
        return r;
    });

    std::optional<double> eta_ep;
    const double tol = EpOptions{}.imag_tolerance;
    for (std::size_t k = 0; k + 1 < rows.size() && !eta_ep; ++k) {
        if (rows[k].error || rows[k + 1].error) continue;
        if (std::abs(rows[k].g.nu1) > tol && std::abs(rows[k + 1].g.nu1) <= tol) {
            ModelParams p = params_of(c, c.gamma2, etas[k]);
            p.n_max = rows[k + 1].g.n_max_used;
            try {
                eta_ep = find_exceptional_point(p, etas[k], etas[k + 1]);
            } catch (const std::exception& e) {
                err << "exceptional point refinement failed: " << e.what() << "\n";
            }
        }
    }

    int failures = 0;
    for (const auto& r : rows)
        if (r.error) {
            ++failures;
            err << "eta = " << r.g.eta_ratio << ": " << *r.error << "\n";
        }

    if (c.wants("csv")) {
        io::CsvWriter w(o("spectrum.csv"), {"eta_ratio", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2", "Gamma1",
                                            "Gamma2", "nu1", "nu2", "n_max_used"});
        for (const auto& r : rows) {
            if (r.error) continue;
            const auto& g = r.g;
            w.row(std::vector<double>{g.eta_ratio, -g.Gamma1, g.nu1, -g.Gamma2, g.nu2, g.Gamma1, g.Gamma2, g.nu1, g.nu2,
                                      static_cast<double>(g.n_max_used)});
        }
    }
    if (c.wants("json")) {
        json j;
        j["gamma2_ratio"] = c.gamma2;
        j["delta_ratio"] = c.delta;
        j["eta_ep"] = eta_ep ? json(*eta_ep) : json(nullptr);
        j["failures"] = failures;
        write_json(o("spectrum.json"), j);
    }
    if (c.wants("svg")) {
        io::LinePlot rates{"Decay rates of the two slowest modes", "eta / gamma1", "Gamma / gamma1"};
        io::LinePlot freqs{"Frequencies of the two slowest modes", "eta / gamma1", "nu / gamma1"};
        io::Series g1{"Gamma1"}, g2{"Gamma2", {}, {}, "#d62728", true}, n1{"nu1"}, n2{"nu2", {}, {}, "#d62728", true};
        for (const auto& r : rows) {
            if (r.error) continue;
            g1.xs.push_back(r.g.eta_ratio);
            g1.ys.push_back(r.g.Gamma1);
            g2.xs.push_back(r.g.eta_ratio);
            g2.ys.push_back(r.g.Gamma2);
            n1.xs.push_back(r.g.eta_ratio);
            n1.ys.push_back(r.g.nu1);
            n2.xs.push_back(r.g.eta_ratio);
            n2.ys.push_back(r.g.nu2);
        }
        rates.series = {g1, g2};
        freqs.series = {n1, n2};
        if (eta_ep) {
            rates.x_markers.push_back({*eta_ep, "EP"});
            freqs.x_markers.push_back({*eta_ep, "EP"});
        }
        io::write_lineplot_svg(o("spectrum_rates.svg"), rates);
        io::write_lineplot_svg(o("spectrum_frequencies.svg"), freqs);
    }
    out << "spectrum: " << rows.size() - failures << " points";
    if (eta_ep) out << ", eta_EP = " << fmt(*eta_ep);
    out << "\n";
    if (failures) {
        err << failures << " of " << rows.size() << " points failed\n";
        return kComputeFailure;
    }
    return kOk;
}

// ---- maps --------------------------------------------------------------------

std::vector<std::pair<std::vector<std::pair<double, double>>, std::string>>
contour_lines(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& log_gap) {
    std::vector<std::pair<std::vector<std::pair<double, double>>, std::string>> out;
    for (const auto& pl : extract_contour(xs, ys, log_gap, std::log10(1.0 - 1e-6))) out.push_back({pl.points, "#2ca02c"});
    for (const auto& pl : extract_contour(xs, ys, log_gap, -1.0)) out.push_back({pl.points, "#d62728"});
    return out;
}

// Heat maps index values as [i_x * ny + j_y] with x = gamma2; the lattice
// stores (gamma2, eta) in that order already.
int cmd_gapmap(RunConfig c, std::ostream& out, std::ostream& err) {
    if (!c.gamma2_range) c.gamma2_range = Range{0.1, 1.0, 10};
    if (!c.eta_range) c.eta_range = Range{0.02, 0.5, 10};
    GapMapRequest req;
    req.gamma2_ratios = c.gamma2_range->values();
    req.eta_ratios = c.eta_range->values();
    if (req.gamma2_ratios.empty() || req.eta_ratios.empty()) throw UsageError("empty sweep range");
    req.delta_ratio = c.delta;
    req.truncation = policy_of(c);
    req.workers = c.workers;
    const auto o = prepare(c);
    const GapMap map = gap_map(req);

    int failures = 0;
    std::vector<double> field;
    for (const auto& g : map.points) {
        if (g.error) {
            ++failures;
            err << "gamma2 = " << g.gamma2_ratio << ", eta = " << g.eta_ratio << ": " << *g.error << "\n";
            field.push_back(std::nan(""));
        } else {
            field.push_back(g.log10_gap_ratio());
        }
    }
    if (c.wants("csv")) {
        io::CsvWriter w(o("gapmap.csv"),
                        {"gamma2_ratio", "eta_ratio", "Gamma1", "Gamma2", "nu1", "nu2", "log10_gap_ratio", "n_max_used"});
        for (const auto& g : map.points)
            w.row(std::vector<double>{g.gamma2_ratio, g.eta_ratio, g.Gamma1, g.Gamma2, g.nu1, g.nu2,
                                      g.error ? std::nan("") : g.log10_gap_ratio(), static_cast<double>(g.n_max_used)});
    }
    if (c.wants("json")) {
        json pts = json::array();
        for (const auto& g : map.points) {
            json p{{"gamma2_ratio", g.gamma2_ratio}, {"eta_ratio", g.eta_ratio}, {"Gamma1", g.Gamma1},
                   {"Gamma2", g.Gamma2},            {"nu1", g.nu1},             {"nu2", g.nu2},
                   {"n_max_used", g.n_max_used}};
            p["log10_gap_ratio"] = g.error ? json(nullptr) : json(g.log10_gap_ratio());
            if (g.error) p["error"] = *g.error;
            pts.push_back(p);
        }
        json contours = json::array();
        for (const auto& ct : map.contours)
            for (const auto& pl : ct.lines) contours.push_back({{"level", ct.level}, {"points", pl.points}});
        write_json(o("gapmap.json"), {{"points", pts}, {"contours", contours}});
    }
    if (c.wants("svg")) {
        io::HeatMap h{"log10(Gamma1 / Gamma2)", "gamma2 / gamma1", "eta / gamma1", map.gamma2_ratios, map.eta_ratios, field};
        h.polylines = contour_lines(map.gamma2_ratios, map.eta_ratios, field);
        io::write_heatmap_svg(o("gapmap.svg"), h);
    }
    out << "gapmap: " << map.points.size() << " points, " << failures << " failed\n";
    return failures ? kComputeFailure : kOk;
}

int cmd_emsmap(RunConfig c, std::ostream& out, std::ostream& err) {
    if (c.preset == "fig4") {
        c.delta = 0.1;
        if (!c.gamma2_range) c.gamma2_range = Range{0.1, 1.0, 10};
        if (!c.eta_range) c.eta_range = Range{0.05, 0.5, 10};
    }
    if (!c.gamma2_range) c.gamma2_range = Range{0.1, 1.0, 10};
    if (!c.eta_range) c.eta_range = Range{0.05, 0.5, 10};
    EmsMapRequest req;
    req.gamma2_ratios = c.gamma2_range->values();
    req.eta_ratios = c.eta_range->values();
    if (req.gamma2_ratios.empty() || req.eta_ratios.empty()) throw UsageError("empty sweep range");
    req.delta_ratio = c.delta;
    req.truncation = policy_of(c);
    req.workers = c.workers;
    const auto o = prepare(c);
    const EmsMap map = ems_approximation_map(req);

    int failures = 0;
    std::vector<double> field, gap;
    for (const auto& e : map.points) {
        if (e.error) {
            ++failures;
            err << "gamma2 = " << e.gamma2_ratio << ", eta = " << e.eta_ratio << ": " << *e.error << "\n";
        }
        field.push_back(e.error || !e.applicable ? std::nan("") : e.log10_distance);
        gap.push_back(e.error ? std::nan("") : std::log10(e.gap_ratio));
    }
    if (c.wants("csv")) {
        io::CsvWriter w(o("emsmap.csv"),
                        {"gamma2_ratio", "eta_ratio", "applicable", "gap_ratio", "log10_distance", "n_max_used"});
        for (const auto& e : map.points)
            w.row(std::vector<double>{e.gamma2_ratio, e.eta_ratio, e.applicable ? 1.0 : 0.0,
                                      e.error ? std::nan("") : e.gap_ratio,
                                      e.error ? std::nan("") : e.log10_distance, static_cast<double>(e.n_max_used)});
    }
    if (c.wants("json")) {
        json pts = json::array();
        for (const auto& e : map.points) {
            json p{{"gamma2_ratio", e.gamma2_ratio}, {"eta_ratio", e.eta_ratio}, {"applicable", e.applicable},
                   {"gap_ratio", e.gap_ratio},       {"log10_distance", e.log10_distance},
                   {"n_max_used", e.n_max_used}};
            if (e.error) p["error"] = *e.error;
            pts.push_back(p);
        }
        write_json(o("emsmap.json"), {{"points", pts}});
    }
    if (c.wants("svg")) {
        io::HeatMap h{"log10 D(mu1, rho_ss + rho1)", "gamma2 / gamma1", "eta / gamma1", map.gamma2_ratios,
                      map.eta_ratios, field};
        h.polylines = contour_lines(map.gamma2_ratios, map.eta_ratios, gap);
        io::write_heatmap_svg(o("emsmap.svg"), h);
    }
    out << "emsmap: " << map.points.size() << " points, " << failures << " failed\n";
    return failures ? kComputeFailure : kOk;
}

// ---- evolve ------------------------------------------------------------------

struct EvolveRun {
    double gamma2, eta, scale;
};

int cmd_evolve(RunConfig c, std::ostream& out, std::ostream& err) {
    std::vector<EvolveRun> runs;
    if (c.preset == "fig3a") {
        c.delta = 0.1;
        if (c.omega_s == 0.0) c.omega_s = 20.0 * std::numbers::pi;
        runs = {{0.1, 0.2, 1.2}, {1.0, 1.5, 1.5}, {3.0, 2.5, 0.5}};
    } else {
        runs = {{c.gamma2, c.eta, c.alpha_scale}};
    }
    if (c.samples < 2) throw UsageError("--samples must be at least 2");
    for (const auto& r : runs)
        if (!(r.eta > std::abs(c.delta) / 2.0)) throw UsageError("evolve needs eta above |delta| / 2 (bistable regime)");
    const auto o = prepare(c);

    io::LinePlot plot{"Im <a(t)>, rotating frame", "gamma1 t", "Im <a>"};
    plot.log_x = true;
    static const char* colors[] = {"#d62728", "#1f77b4", "#ff7f0e", "#2ca02c"};
    json summary = json::array();
    int k = 0;
    for (const auto& r : runs) {
        ModelParams p = params_of(c, r.gamma2, r.eta);
        const ClassicalFixedPoints fp = classical_fixed_points(p);
        const Complex alpha0 = r.scale * fp.alpha_plus;
        p.n_max = resolve_nmax(c, p, static_cast<int>(std::ceil(4.0 * std::norm(alpha0))));
        const DensityMatrix rho0 = coherent_state(alpha0, p.n_max);
        const LiouvillianSpectrum s = eigendecompose(build_liouvillian(p));
        const double G1 = -s.eigenvalue(1).real();
        const double G2 = -s.eigenvalue(2).real();
        const auto times = log_spaced(1e-2, 10.0 / G1, c.samples);
        Trajectory traj;
        try {
            traj = evolve_eigenexpansion(s, rho0.matrix(), times);
        } catch (const NearDefectiveError&) {
            traj = evolve_ode(build_liouvillian(p), rho0.matrix(), times);
            traj.tau1 = 1.0 / G1;
            traj.tau2 = 1.0 / G2;
        }
        const auto amp = amplitude_series(traj);
        const auto num = number_series(traj);
        const auto lab = lab_frame_amplitude(amp, times, c.omega_s);

        std::optional<MetastableManifold> m;
        if (std::abs(s.eigenvalue(1).imag()) <= ManifoldOptions{}.real_tolerance) m = extract_manifold(s);
        std::vector<double> p1(times.size(), std::nan(""));
        std::vector<Complex> approx;
        if (m) {
            for (std::size_t i = 0; i < times.size(); ++i) {
                try {
                    p1[i] = project_onto_manifold(*m, traj.states[i]).p1();
                } catch (const OutsideManifoldError&) {
                }
            }
            approx = amplitude_metastable(*m, project_onto_manifold(*m, rho0.matrix()), times);
        }
        const std::string tag = tag_of(r.gamma2, r.eta);
        if (c.wants("csv")) {
            io::CsvWriter w(o("trajectory_" + tag + ".csv"), {"t", "re_a", "im_a", "n", "p1", "p2", "frame"});
            for (std::size_t i = 0; i < times.size(); ++i)
                w.row({fmt(times[i]), fmt(amp[i].real()), fmt(amp[i].imag()), fmt(num[i]), fmt(p1[i]), fmt(1.0 - p1[i]), "rot"});
            for (std::size_t i = 0; i < times.size(); ++i)
                w.row({fmt(times[i]), fmt(lab[i].real()), fmt(lab[i].imag()), fmt(num[i]), fmt(p1[i]), fmt(1.0 - p1[i]), "lab"});
            if (m) {
                io::CsvWriter a(o("metastable_" + tag + ".csv"), {"t", "re_a", "im_a", "frame"});
                for (std::size_t i = 0; i < times.size(); ++i)
                    a.row({fmt(times[i]), fmt(approx[i].real()), fmt(approx[i].imag()), "rot"});
            }
        }
        json js{{"gamma2_ratio", r.gamma2}, {"eta_ratio", r.eta},  {"alpha_scale", r.scale},
                {"alpha0", complex_json(alpha0)}, {"n_max", p.n_max}, {"tau1", 1.0 / G1},
                {"tau2", 1.0 / G2}};
        if (m) {
            const auto ms = summarize(s, *m);
            js["c_max"] = ms.c_max;
            js["c_min"] = ms.c_min;
            js["amplitude1"] = complex_json(ms.amplitude1);
        }
        summary.push_back(js);

        const char* color = colors[k % 4];
        io::Series exact{"exact " + tag, times, {}, color};
        for (const auto& a : amp) exact.ys.push_back(a.imag());
        plot.series.push_back(exact);
        if (m) {
            io::Series ov{"two-state " + tag, times, {}, "#000000", true};
            for (const auto& a : approx) ov.ys.push_back(a.imag());
            plot.series.push_back(ov);
        }
        plot.x_markers.push_back({1.0 / G1, "t1"});
        plot.x_markers.push_back({1.0 / G2, "t2"});
        out << "evolve " << tag << ": n_max " << p.n_max << ", tau1 " << fmt(1.0 / G1) << ", tau2 " << fmt(1.0 / G2) << "\n";
        ++k;
    }
    if (c.wants("json")) write_json(o("evolve.json"), summary);
    if (c.wants("svg")) io::write_lineplot_svg(o("evolve.svg"), plot);
    (void)err;
    return kOk;
}

// ---- correlate ---------------------------------------------------------------

struct SpectrumRun {
    double gamma2, eta;
};

void emit_spectrum(const RunConfig& c, const Outputs& o, const SpectrumRun& r, io::LinePlot& plot, json& summary,
                   const char* color, std::ostream& out) {
    ModelParams p = params_of(c, r.gamma2, r.eta);
    p.n_max = resolve_nmax(c, p);
    const LiouvillianSpectrum s = eigendecompose(build_liouvillian(p));
    const double G2 = -s.eigenvalue(2).real();
    const auto grid = default_omega_grid(c.delta, G2);
    const SpectrumCurve curve = emission_spectrum(s, grid);
    const double w_obs = observed_frequency(curve, 1e-6 * (c.delta != 0.0 ? std::abs(c.delta) : 1.0));
    const std::string tag = tag_of(r.gamma2, r.eta);
    if (c.wants("csv")) {
        io::CsvWriter w(o("spectrum_" + tag + ".csv"), {"omega_over_gamma1", "S", "S_mode1_only"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row(std::vector<double>{grid[i], curve.S[i], curve.S_mode1.empty() ? std::nan("") : curve.S_mode1[i]});
        const double G1 = -s.eigenvalue(1).real();
        const auto taus = linear_spaced(0.0, 10.0 / G1, c.samples);
        const auto corr = correlation_by_modes(s, taus);
        io::CsvWriter cw(o("correlation_" + tag + ".csv"), {"tau", "re_C", "im_C"});
        for (std::size_t i = 0; i < taus.size(); ++i)
            cw.row(std::vector<double>{taus[i], corr[i].real(), corr[i].imag()});
    }
    summary.push_back({{"gamma2_ratio", r.gamma2},
                       {"eta_ratio", r.eta},
                       {"n_max", p.n_max},
                       {"Gamma1", -s.eigenvalue(1).real()},
                       {"Gamma2", G2},
                       {"omega_obs", w_obs}});
    io::Series exact{"exact " + tag, grid, curve.S, color};
    plot.series.push_back(exact);
    if (!curve.S_mode1.empty()) plot.series.push_back({"j=1 " + tag, grid, curve.S_mode1, "#000000", true});
    out << "correlate " << tag << ": omega_obs / delta = " << fmt(w_obs / c.delta) << "\n";
}

struct ObservedRow {
    double eta = 0.0;
    double exact = std::nan("");
    double approx = std::nan("");
    std::optional<std::string> error;
};

ObservedRow observed_point(const RunConfig& c, double gamma2, double eta) {
    ObservedRow row;
    row.eta = eta;
    try {
        ModelParams p = params_of(c, gamma2, eta);
        p.n_max = resolve_nmax(c, p);
        const LiouvillianSpectrum s = eigendecompose(build_liouvillian(p));
        const auto grid = default_omega_grid(c.delta, -s.eigenvalue(2).real());
        const double res = 1e-6 * (c.delta != 0.0 ? std::abs(c.delta) : 1.0);
        row.exact = observed_frequency(emission_spectrum(s, grid), res);
        if (std::abs(s.eigenvalue(1).imag()) <= ManifoldOptions{}.real_tolerance) {
            ManifoldOptions quiet;
            quiet.tol_meta = std::numeric_limits<double>::infinity();
            row.approx = observed_frequency(metastable_spectrum(extract_manifold(s, quiet), grid), res);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_correlate(RunConfig c, std::ostream& out, std::ostream& err) {
    static const char* colors[] = {"#d62728", "#1f77b4", "#ff7f0e"};
    if (c.preset == "fig3de") {
        c.delta = 0.1;
        const auto o = prepare(c);
        const std::vector<std::pair<double, Range>> sweeps{
            {0.1, Range{0.01, 0.3, 30}}, {1.0, Range{0.01, 1.0, 30}}, {3.0, Range{0.01, 2.0, 30}}};
        io::LinePlot plot{"Observed frequency", "eta / gamma1", "omega_obs / delta"};
        int failures = 0, k = 0;
        for (const auto& [g2, range] : sweeps) {
            const auto etas = (c.eta_range ? *c.eta_range : range).values();
            const auto rows = parallel_map(etas.size(), c.workers, [&](std::size_t i) { return observed_point(c, g2, etas[i]); });
            const std::string tag = tag_of(g2, 0).substr(0, tag_of(g2, 0).find("_e"));
            io::Series ex{"exact " + tag, {}, {}, colors[k % 3]}, ap{"two-state " + tag, {}, {}, "#000000", true};
            if (c.wants("csv")) {
                io::CsvWriter w(o("omega_obs_" + tag + ".csv"),
                                {"eta_ratio", "omega_obs_over_delta", "omega_obs_approx_over_delta"});
                for (const auto& r : rows) w.row(std::vector<double>{r.eta, r.exact / c.delta, r.approx / c.delta});
            }
            for (const auto& r : rows) {
                if (r.error) {
                    ++failures;
                    err << "gamma2 = " << g2 << ", eta = " << r.eta << ": " << *r.error << "\n";
                    continue;
                }
                ex.xs.push_back(r.eta);
                ex.ys.push_back(r.exact / c.delta);
                if (!std::isnan(r.approx)) {
                    ap.xs.push_back(r.eta);
                    ap.ys.push_back(r.approx / c.delta);
                }
            }
            plot.series.push_back(ex);
            plot.series.push_back(ap);
            ++k;
        }
        if (c.wants("svg")) io::write_lineplot_svg(o("omega_obs.svg"), plot);
        out << "correlate: observed-frequency sweeps written\n";
        return failures ? kComputeFailure : kOk;
    }

    std::vector<SpectrumRun> runs;
    if (c.preset == "fig3c") {
        c.delta = 0.1;
        runs = {{0.1, 0.15}, {1.0, 0.75}, {3.0, 1.875}};
    } else if (c.eta_range) {
        const auto etas = c.eta_range->values();
        const auto o = prepare(c);
        const auto rows = parallel_map(etas.size(), c.workers, [&](std::size_t i) { return observed_point(c, c.gamma2, etas[i]); });
        int failures = 0;
        if (c.wants("csv")) {
            io::CsvWriter w(o("omega_obs_" + tag_of(c.gamma2, 0).substr(0, tag_of(c.gamma2, 0).find("_e")) + ".csv"),
                            {"eta_ratio", "omega_obs_over_delta", "omega_obs_approx_over_delta"});
            for (const auto& r : rows) w.row(std::vector<double>{r.eta, r.exact / c.delta, r.approx / c.delta});
        }
        for (const auto& r : rows)
            if (r.error) {
                ++failures;
                err << "eta = " << r.eta << ": " << *r.error << "\n";
            }
        out << "correlate: " << rows.size() << " points, " << failures << " failed\n";
        return failures ? kComputeFailure : kOk;
    } else {
        runs = {{c.gamma2, c.eta}};
    }
    const auto o = prepare(c);
    io::LinePlot plot{"Emission spectrum", "omega / gamma1", "S(omega)"};
    json summary = json::array();
    int k = 0;
    for (const auto& r : runs) emit_spectrum(c, o, r, plot, summary, colors[k++ % 3], out);
    if (c.wants("json")) write_json(o("correlate.json"), summary);
    if (c.wants("svg")) io::write_lineplot_svg(o("spectrum.svg"), plot);
    return kOk;
}

// ---- wigner ------------------------------------------------------------------

void emit_wigner(const RunConfig& c, const Outputs& o, const std::string& name, const OperatorMatrix& rho,
                 const GridSpec& grid, json& summary) {
    const WignerGrid w = wigner(rho, grid, c.workers);
    const auto lobes = lobe_extract(w);
    if (c.wants("csv")) {
        io::CsvWriter csv(o("wigner_" + name + ".csv"), {"re_alpha", "im_alpha", "W"});
        for (std::size_t i = 0; i < w.re_alpha.size(); ++i)
            for (std::size_t j = 0; j < w.im_alpha.size(); ++j)
                csv.row(std::vector<double>{w.re_alpha[i], w.im_alpha[j],
                                            w.W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
    json lj = json::array();
    for (const auto& l : lobes) lj.push_back({{"location", complex_json(l.location)}, {"height", l.height}});
    summary[name] = {{"normalization", w.normalization()}, {"degraded", w.degraded}, {"lobes", lj}};
    if (c.wants("svg")) {
        io::HeatMap h{"W(alpha) " + name, "Re alpha", "Im alpha", w.re_alpha, w.im_alpha, {}};
        h.diverging = true;
        h.values.reserve(w.re_alpha.size() * w.im_alpha.size());
        for (std::size_t i = 0; i < w.re_alpha.size(); ++i)
            for (std::size_t j = 0; j < w.im_alpha.size(); ++j)
                h.values.push_back(w.W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        for (const auto& l : lobes) h.markers.push_back({l.location.real(), l.location.imag(), ""});
        io::write_heatmap_svg(o("wigner_" + name + ".svg"), h);
    }
}

int cmd_wigner(RunConfig c, std::ostream& out, std::ostream& err) {
    std::vector<SpectrumRun> runs;
    if (c.preset == "fig2") {
        c.delta = 0.1;
        runs = {{3.0, 2.0}, {0.1, 0.2}};
    } else {
        runs = {{c.gamma2, c.eta}};
    }
    if (c.points < 3) throw UsageError("--points must be at least 3");
    const auto o = prepare(c);
    json summary;
    for (const auto& r : runs) {
        ModelParams p = params_of(c, r.gamma2, r.eta);
        p.n_max = resolve_nmax(c, p);
        const LiouvillianSpectrum s = eigendecompose(build_liouvillian(p));
        const GridSpec grid = default_grid(s.rho_ss, c.points);
        const std::string tag = tag_of(r.gamma2, r.eta);
        emit_wigner(c, o, tag + "_rho_ss", s.rho_ss, grid, summary);
        if (std::abs(s.eigenvalue(1).imag()) <= ManifoldOptions{}.real_tolerance) {
            const MetastableManifold m = extract_manifold(s);
            // Halved for display.
            emit_wigner(c, o, tag + "_mu1_half", OperatorMatrix(0.5 * m.mu1), grid, summary);
            emit_wigner(c, o, tag + "_mu2_half", OperatorMatrix(0.5 * m.mu2), grid, summary);
        } else {
            err << tag << ": lambda_1 is complex, no metastable states to draw\n";
        }
        out << "wigner " << tag << ": n_max " << p.n_max << ", radius " << fmt(grid.radius) << "\n";
    }
    if (c.wants("json")) write_json(o("wigner.json"), summary);
    return kOk;
}

// ---- classical ---------------------------------------------------------------

int cmd_classical(RunConfig c, std::ostream& out, std::ostream& err) {
    if (c.samples < 2) throw UsageError("--samples must be at least 2");
    const auto o = prepare(c);
    ModelParams p = params_of(c, c.gamma2, c.eta);
    const RegimeInfo info = classify_regime(p);
    json j{{"eta_c", info.eta_c}, {"regime", to_string(info.regime)}};
    Complex alpha0{c.alpha_scale, 0.0};
    if (info.regime == Regime::LimitCycle) j["Omega"] = info.Omega;
    if (info.fixed_points) {
        const auto& fp = *info.fixed_points;
        j["alpha_plus"] = complex_json(fp.alpha_plus);
        j["alpha_minus"] = complex_json(fp.alpha_minus);
        j["R"] = fp.R;
        j["phi"] = fp.phi;
        alpha0 = c.alpha_scale * fp.alpha_plus;
    }
    const auto times = linear_spaced(0.0, 50.0, c.samples);
    const auto traj = integrate_mean_field(alpha0, p, times);
    if (c.wants("csv")) {
        io::CsvWriter w(o("mean_field.csv"), {"t", "re_alpha", "im_alpha"});
        for (std::size_t i = 0; i < times.size(); ++i) w.row(std::vector<double>{times[i], traj[i].real(), traj[i].imag()});
    }

    // Telegraph oracle from the quantum metastable manifold.
    if (info.regime == Regime::Bistable) {
        p.n_max = resolve_nmax(c, p);
        const LiouvillianSpectrum s = eigendecompose(build_liouvillian(p));
        if (std::abs(s.eigenvalue(1).imag()) <= ManifoldOptions{}.real_tolerance) {
            const MetastableManifold m = extract_manifold(s);
            const Complex a1 = expectation(annihilation(p.n_max), m.mu1);
            const TwoStateTelegraph t = make_telegraph(a1, m.Gamma1);
            const auto taus = linear_spaced(0.0, 3.0 / m.Gamma1, 31);
            const auto stats = telegraph_statistics(t, taus);
            const auto est = telegraph_monte_carlo(t, c.paths, taus.back(), c.seed, taus, c.workers);
            if (c.wants("csv")) {
                io::CsvWriter w(o("telegraph.csv"), {"tau", "C_analytic", "C_empirical", "stderr"});
                for (std::size_t i = 0; i < taus.size(); ++i)
                    w.row(std::vector<double>{taus[i], stats.C[i].real(), est.C[i].real(), est.C_stderr[i]});
            }
            j["telegraph"] = {{"alpha1", complex_json(a1)},
                              {"Gamma1", m.Gamma1},
                              {"quantum_prefactor", complex_json(metastable_prefactor(m))},
                              {"classical_prefactor", std::norm(a1)}};
        } else {
            err << "lambda_1 is complex at these parameters; telegraph oracle skipped\n";
        }
    }
    if (c.wants("json")) write_json(o("classical.json"), j);
    if (c.wants("svg")) {
        io::LinePlot plot{"Mean-field amplitude", "gamma1 t", "alpha"};
        io::Series re{"Re alpha", times, {}}, im{"Im alpha", times, {}, "#d62728"};
        for (const auto& a : traj) {
            re.ys.push_back(a.real());
            im.ys.push_back(a.imag());
        }
        plot.series = {re, im};
        io::write_lineplot_svg(o("mean_field.svg"), plot);
    }
    out << "classical: regime " << to_string(info.regime) << "\n";
    return kOk;
}

const std::map<std::string, std::string> kPresetCommand{{"fig1c", "spectrum"}, {"fig2", "wigner"},
                                                        {"fig3a", "evolve"},   {"fig3c", "correlate"},
                                                        {"fig3de", "correlate"}, {"fig4", "emsmap"}};

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    cfg.workers = default_workers();
    std::string eta_range, gamma2_range, formats;

    CLI::App app{"Liouvillian spectral analysis of a squeezed quantum van der Pol oscillator", "liouspec"};
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"spectrum", "eta sweep of the two slowest eigenvalues with the exceptional point"},
        {"gapmap", "lattice of log10(Gamma1/Gamma2) with contours"},
        {"emsmap", "lattice of the trace distance between exact and approximate metastable states"},
        {"evolve", "amplitude dynamics from a coherent state, exact and two-state"},
        {"correlate", "emission spectra and observed frequencies"},
        {"wigner", "Wigner distributions of the stationary and metastable states"},
        {"classical", "mean-field fixed points and the telegraph oracle"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--gamma2", cfg.gamma2, "gamma2 / gamma1");
        sub->add_option("--eta", cfg.eta, "eta / gamma1");
        sub->add_option("--eta-range", eta_range, "eta sweep LO:HI:N");
        sub->add_option("--gamma2-range", gamma2_range, "gamma2 sweep LO:HI:N (maps)");
        sub->add_option("--delta", cfg.delta, "Delta / gamma1");
        sub->add_option("--nmax", cfg.nmax, "Fock truncation, integer or auto");
        sub->add_option("--omega-s", cfg.omega_s, "omega_s / gamma1 for lab-frame output");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
        sub->add_option("--preset", cfg.preset, "fig1c, fig2, fig3a, fig3c, fig3de or fig4");
        sub->add_option("--workers", cfg.workers, "worker threads (default LIOUSPEC_WORKERS or 1)");
        sub->add_option("--format", formats, "comma-separated subset of csv,json,svg");
        sub->add_option("--alpha-scale", cfg.alpha_scale, "initial coherent amplitude in units of alpha_plus");
        sub->add_option("--points", cfg.points, "Wigner grid points per axis");
        sub->add_option("--samples", cfg.samples, "number of time samples");
        sub->add_option("--paths", cfg.paths, "telegraph Monte Carlo paths");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return e.get_exit_code() == 0 ? kOk : kUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        if (!eta_range.empty()) cfg.eta_range = parse_range(eta_range);
        if (!gamma2_range.empty()) cfg.gamma2_range = parse_range(gamma2_range);
        if (!formats.empty()) {
            cfg.formats.clear();
            std::stringstream ss(formats);
            for (std::string f; std::getline(ss, f, ',');) {
                if (f != "csv" && f != "json" && f != "svg") throw UsageError("unknown format '" + f + "'");
                cfg.formats.insert(f);
            }
        }
        if (cfg.nmax != "auto") {
            std::size_t used = 0;
            const int n = std::stoi(cfg.nmax, &used);
            if (used != cfg.nmax.size() || n < 2) throw UsageError("--nmax must be an integer >= 2 or auto");
        }
        if (cfg.workers < 1) throw UsageError("--workers must be positive");
        if (cfg.paths < 1000) throw UsageError("--paths must be at least 1000");
        if (!cfg.preset.empty()) {
            const auto it = kPresetCommand.find(cfg.preset);
            if (it == kPresetCommand.end()) throw UsageError("unknown preset '" + cfg.preset + "'");
            if (it->second != cfg.subcommand)
                throw UsageError("preset " + cfg.preset + " belongs to the " + it->second + " subcommand");
        }
        params_of(cfg, cfg.gamma2, cfg.eta).validate();
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg, out, err);
        if (cfg.subcommand == "gapmap") return cmd_gapmap(cfg, out, err);
        if (cfg.subcommand == "emsmap") return cmd_emsmap(cfg, out, err);
        if (cfg.subcommand == "evolve") return cmd_evolve(cfg, out, err);
        if (cfg.subcommand == "correlate") return cmd_correlate(cfg, out, err);
        if (cfg.subcommand == "wigner") return cmd_wigner(cfg, out, err);
        if (cfg.subcommand == "classical") return cmd_classical(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kComputeFailure;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace liouspec::cli
