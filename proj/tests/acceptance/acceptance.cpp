// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "liouspec/classical.hpp"
#include "liouspec/correlations.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/evolution.hpp"
#include "liouspec/metastable.hpp"
#include "liouspec/phasespace.hpp"
#include "liouspec/spectral.hpp"

using namespace liouspec;

namespace {

constexpr double kDelta = 0.1;

ModelParams point(double gamma2, double eta, int n_max = 20) {
    ModelParams p;
    p.gamma2 = gamma2;
    p.eta = eta;
    p.delta = kDelta;
    p.n_max = n_max;
    return p;
}

// Eigendecompositions are reused across criteria.
const LiouvillianSpectrum& spectrum(double gamma2, double eta, int n_max) {
    static std::map<std::tuple<double, double, int>, LiouvillianSpectrum> cache;
    const auto key = std::make_tuple(gamma2, eta, n_max);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, eigendecompose(build_liouvillian(point(gamma2, eta, n_max)))).first;
    return it->second;
}

int converged_nmax(double gamma2, double eta) {
    TruncationPolicy t;
    t.automatic = true;
    return choose_truncation(point(gamma2, eta), t).n_max;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        detail << (ok ? "" : "[x] ") << what << "; ";
    }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << " (" << num(seconds_since(t0), 3)
              << " s)\n    " << o.detail.str() << "\n"
              << std::flush;
}

struct Fig3Point {
    double gamma2, eta;
};
const std::vector<Fig3Point> kCaptionPoints{{0.1, 0.15}, {1.0, 0.75}, {3.0, 1.875}};
const std::vector<double> kCaptionGamma1{0.017, 0.087, 0.152};

std::map<double, int> caption_nmax;

double Gamma(const LiouvillianSpectrum& s, int j) { return -s.eigenvalue(j).real(); }

// ---- criteria -----------------------------------------------------------------

void dominant_rates(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < kCaptionPoints.size(); ++k) {
        const auto [g2, eta] = kCaptionPoints[k];
        const int n = converged_nmax(g2, eta);
        caption_nmax[g2] = n;
        const double G1 = Gamma(spectrum(g2, eta, n), 1);
        const double rel = std::abs(G1 - kCaptionGamma1[k]) / kCaptionGamma1[k];
        o.check(rel <= 0.10, "gamma2=" + num(g2) + " n_max=" + std::to_string(n) + " Gamma1=" + num(G1, 6) +
                                 " vs " + num(kCaptionGamma1[k]) + " (rel " + num(rel, 3) + ")");
    }
    const double t = seconds_since(t0);
    o.check(t <= 300.0, "runtime " + num(t, 3) + " s <= 300 s");
}

void gap_calibration(Outcome& o) {
    for (const auto& [g2, eta] : kCaptionPoints) {
        const auto& s = spectrum(g2, eta, caption_nmax.at(g2));
        const double r = Gamma(s, 1) / Gamma(s, 2);
        o.check(std::abs(r - 0.05) <= 0.2 * 0.05, "gamma2=" + num(g2) + " Gamma1/Gamma2=" + num(r, 4));
    }
}

std::map<double, double> eta_ep;

void exceptional_points(Outcome& o) {
    const int n = 30;
    for (double g2 : {3.0, 1.0, 0.3, 0.1}) eta_ep[g2] = find_exceptional_point(point(g2, 0.0, n), 0.051, 0.5);
    const double ep = eta_ep[0.1];
    o.check(true, "eta_EP(gamma2=0.1)=" + num(ep, 6));

    double worst_pair = 0.0;
    for (double f : {0.3, 0.6, 0.9, 0.99}) {
        const auto ev = liouvillian_eigenvalues(build_liouvillian(point(0.1, f * ep, n)));
        worst_pair = std::max(worst_pair, std::abs(ev(1) - std::conj(ev(2))));
        o.check(std::abs(ev(1).imag()) > 1e-8, "complex pair at eta=" + num(f * ep));
    }
    o.check(worst_pair < 1e-8, "below EP |lambda1 - conj(lambda2)| max " + num(worst_pair, 3));

    double prev_G1 = INFINITY, prev_G2 = 0.0, worst_imag = 0.0;
    bool monotone = true;
    for (double f : {1.01, 1.2, 1.5, 2.0, 3.0}) {
        const auto ev = liouvillian_eigenvalues(build_liouvillian(point(0.1, f * ep, n)));
        worst_imag = std::max({worst_imag, std::abs(ev(1).imag()), std::abs(ev(2).imag())});
        const double G1 = -ev(1).real(), G2 = -ev(2).real();
        monotone = monotone && G1 < prev_G1 && G2 > prev_G2;
        prev_G1 = G1;
        prev_G2 = G2;
    }
    o.check(worst_imag <= 1e-8, "above EP max |Im lambda_1,2| " + num(worst_imag, 3));
    o.check(monotone, "Gamma1 decreasing and Gamma2 increasing above EP");

    std::ostringstream seq;
    bool ordered = true;
    double last = INFINITY;
    for (double g2 : {3.0, 1.0, 0.3, 0.1}) {
        seq << num(g2) << ":" << num(eta_ep[g2], 5) << " ";
        ordered = ordered && eta_ep[g2] < last && eta_ep[g2] > 0.05;
        last = eta_ep[g2];
    }
    o.check(ordered, "eta_EP decreasing toward 0.05 over gamma2 {3,1,0.3,0.1}: " + seq.str());
}

double observed(const LiouvillianSpectrum& s, bool approx) {
    const auto grid = default_omega_grid(kDelta, Gamma(s, 2));
    if (!approx) return observed_frequency(emission_spectrum(s, grid), 1e-6 * kDelta);
    ManifoldOptions quiet;
    quiet.tol_meta = INFINITY;
    return observed_frequency(metastable_spectrum(extract_manifold(s, quiet), grid), 1e-6 * kDelta);
}

void entrainment(Outcome& o) {
    for (double g2 : {0.1, 1.0, 3.0}) {
        const double lo = 0.01;
        const double hi = 2.0 * eta_ep.at(g2);
        const double w_lo = observed(spectrum(g2, lo, converged_nmax(g2, lo)), false) / kDelta;
        o.check(w_lo >= 0.9 && w_lo <= 1.1, "gamma2=" + num(g2) + " eta=0.01 omega_obs/Delta=" + num(w_lo));
        const auto& s = spectrum(g2, hi, converged_nmax(g2, hi));
        const double w_hi = observed(s, false) / kDelta;
        o.check(w_hi < 0.05, "gamma2=" + num(g2) + " eta=2eta_EP=" + num(hi) + " omega_obs/Delta=" + num(w_hi));
    }
    // Well-entrained region: sampled eta where the exact omega_obs/Delta < 0.05.
    int tracked = 0;
    for (const auto& [g2, eta] : std::vector<Fig3Point>{{0.1, 0.15}, {0.1, 0.2}, {1.0, 0.75}, {1.0, 1.0}, {3.0, 1.875}, {3.0, 2.5}}) {
        const auto& s = spectrum(g2, eta, converged_nmax(g2, eta));
        const double exact = observed(s, false);
        if (exact / kDelta >= 0.05) continue;
        ++tracked;
        const double approx = observed(s, true);
        const double rel = std::abs(approx - exact) / std::abs(exact);
        o.check(rel <= 0.10, "gamma2=" + num(g2) + " eta=" + num(eta) + " approx/exact omega_obs " + num(approx / kDelta) +
                                 "/" + num(exact / kDelta) + " (rel " + num(rel, 3) + ")");
    }
    o.check(tracked > 0, std::to_string(tracked) + " well-entrained samples compared");
}

void oracle_equivalence(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 20;
    const ModelParams p = point(1.0, 0.75, n);
    const Superoperator l = build_liouvillian(p);
    const LiouvillianSpectrum s = eigendecompose(l);
    const auto times = linear_spaced(0.0, 10.0, 101);
    const OperatorMatrix a = annihilation(n);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const DensityMatrix rho0 = random_density_matrix(n, 1000 + k);
        const auto modal = amplitude_eigenexpansion(s, rho0.matrix(), times);
        const auto ode = propagate_ode(l, vectorize(rho0.matrix()), times);
        for (std::size_t i = 0; i < times.size(); ++i)
            worst = std::max(worst, std::abs(modal[i] - expectation(a, devectorize(ode[i]))));
    }
    o.check(worst <= 1e-6, "20 random states, max |<a>_eig - <a>_ode| = " + num(worst, 3));
    const double t = seconds_since(t0);
    o.check(t <= 120.0, "runtime " + num(t, 3) + " s <= 120 s");
}

struct Fig3aRun {
    double gamma2, eta, scale;
    int n_max;
};
const std::vector<Fig3aRun> kFig3a{{0.1, 0.2, 1.2, 52}, {1.0, 1.5, 1.5, 32}, {3.0, 2.5, 0.5, 25}};

void metastable_reduction(Outcome& o) {
    for (const auto& r : kFig3a) {
        const ModelParams p = point(r.gamma2, r.eta, r.n_max);
        const Complex alpha0 = r.scale * classical_fixed_points(p).alpha_plus;
        const DensityMatrix rho0 = coherent_state(alpha0, r.n_max);
        const auto& s = spectrum(r.gamma2, r.eta, r.n_max);
        const MetastableManifold m = extract_manifold(s);
        const double t_lo = 5.0 / m.Gamma2, t_hi = 10.0 / m.Gamma1;
        const auto times = log_spaced(t_lo, t_hi, 200);
        const auto exact = amplitude_eigenexpansion(s, rho0.matrix(), times);
        const auto p0 = project_onto_manifold(m, rho0.matrix());
        const auto approx = amplitude_metastable(m, p0, times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            worst = std::max(worst, std::abs(approx[i] - exact[i]) / std::abs(exact[i]));
        const std::string tag = "gamma2=" + num(r.gamma2) + " ";
        o.check(worst <= 0.05, tag + "two-state vs exact max rel " + num(worst, 3));

        // Plateau modulus at the start of the window, lab frame.
        const double omega_s = 20.0 * 3.141592653589793;
        const std::vector<double> tp{t_lo};
        const auto lab = lab_frame_amplitude(amplitude_eigenexpansion(s, rho0.matrix(), tp), tp, omega_s);
        const Complex a1 = expectation(annihilation(r.n_max), m.mu1);
        const double predicted = std::abs(a1 * (p0.p1() - p0.p2()));
        const double rel = std::abs(std::abs(lab[0]) - predicted) / predicted;
        o.check(rel <= 0.05, tag + "plateau |<a>| at 5/Gamma2 " + num(std::abs(lab[0])) + " vs " + num(predicted) + " (rel " +
                                 num(rel, 3) + ")");
    }
}

void manifold_structure(Outcome& o) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool exact_sum = true;
    for (int k = 0; k < 100000; ++k) {
        const TwoStateProbabilities p(u(rng));
        exact_sum = exact_sum && p.p1() + p.p2() == 1.0;
    }
    o.check(exact_sum, "p1 + p2 == 1 exactly (1e5 draws)");

    struct Sample {
        double gamma2, eta;
        int n;
    };
    std::vector<Sample> samples;
    for (const auto& [g2, eta] : kCaptionPoints) samples.push_back({g2, eta, caption_nmax.at(g2)});
    for (const auto& r : kFig3a) samples.push_back({r.gamma2, r.eta, r.n_max});
    double worst_half = 0.0, worst_z2 = 0.0, worst_a = 0.0;
    for (const auto& sm : samples) {
        const auto& s = spectrum(sm.gamma2, sm.eta, sm.n);
        const double ratio = Gamma(s, 1) / Gamma(s, 2);
        ManifoldOptions quiet;
        quiet.tol_meta = INFINITY;
        const MetastableManifold m = extract_manifold(s, quiet);
        const auto pinf = project_onto_manifold(m, m.rho_ss);
        worst_half = std::max(worst_half, std::abs(pinf.p1() - 0.5));
        const auto late = evolve_probabilities(TwoStateProbabilities(1.0), m.Gamma1, 60.0 / m.Gamma1);
        worst_half = std::max(worst_half, std::abs(late.p1() - 0.5));
        const OperatorMatrix z = parity_operator(sm.n);
        worst_z2 = std::max(worst_z2, max_abs(z * m.mu1 * z - m.mu2));
        const OperatorMatrix a = annihilation(sm.n);
        worst_a = std::max(worst_a, std::abs(expectation(a, m.mu1) + expectation(a, m.mu2)));
        if (ratio <= 0.1) {
            const double d = trace_distance(m.mu1, m.rho_ss + m.rho1);
            o.check(d < 0.05, "gamma2=" + num(sm.gamma2) + " eta=" + num(sm.eta) + " Gamma1/Gamma2=" + num(ratio, 3) +
                                  " D(mu1, rho_ss+rho1)=" + num(d, 3));
        }
    }
    o.check(worst_half <= 1e-10, "p(inf) = 1/2 max deviation " + num(worst_half, 3));
    o.check(worst_z2 <= 1e-8, "Z2 mu1 Z2 = mu2 max deviation " + num(worst_z2, 3));
    o.check(worst_a <= 1e-8, "Tr[a mu1] + Tr[a mu2] max " + num(worst_a, 3));
}

void wigner_suite(Outcome& o) {
    // Stationary state at the closed-form comparison point.
    const int n = 40;
    const ModelParams p = point(0.1, 0.2, n);
    const OperatorMatrix rho_ss = steady_state(build_liouvillian(p));
    const GridSpec grid = default_grid(rho_ss, 121);
    const WignerGrid w = wigner(rho_ss, grid);
    o.check(std::abs(w.normalization() - 1.0) <= 1e-3, "rho_ss normalization " + num(w.normalization(), 10));
    const auto fp = classical_fixed_points(p);
    const auto lobes = lobe_extract(w);
    o.check(lobes.size() == 2, std::to_string(lobes.size()) + " lobes");
    for (std::size_t k = 0; k < std::min<std::size_t>(lobes.size(), 2); ++k) {
        const Complex target = std::abs(lobes[k].location - fp.alpha_plus) < std::abs(lobes[k].location - fp.alpha_minus)
                                   ? fp.alpha_plus
                                   : fp.alpha_minus;
        const double rel = std::abs(lobes[k].location - target) / fp.R;
        o.check(rel <= 0.15, "lobe at (" + num(lobes[k].location.real()) + ", " + num(lobes[k].location.imag()) +
                                 ") vs (" + num(target.real()) + ", " + num(target.imag()) + ") rel " + num(rel, 3));
    }
    if (lobes.size() == 2) o.check(std::abs(lobes[0].location + lobes[1].location) < 0.1 * fp.R, "lobes antipodal");

    // Metastable states at a cheaper bistable point.
    const auto& s = spectrum(1.0, 0.75, caption_nmax.at(1.0));
    ManifoldOptions quiet;
    quiet.tol_meta = INFINITY;
    const MetastableManifold m = extract_manifold(s, quiet);
    const WignerGrid w1 = wigner(m.mu1, default_grid(m.rho_ss, 61));
    const WignerGrid w2 = wigner(m.mu2, default_grid(m.rho_ss, 61));
    o.check(std::abs(w1.normalization() - 1.0) <= 1e-3, "mu1 normalization " + num(w1.normalization(), 10));
    o.check(std::abs(w2.normalization() - 1.0) <= 1e-3, "mu2 normalization " + num(w2.normalization(), 10));
    // The grid is symmetric, so alpha -> -alpha is index reversal.
    const auto last = w1.W.rows() - 1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i <= last; ++i)
        for (Eigen::Index j = 0; j <= last; ++j) worst = std::max(worst, std::abs(w1.W(last - i, last - j) - w2.W(i, j)));
    o.check(worst <= 1e-6, "W_mu1(-alpha) vs W_mu2(alpha) max " + num(worst, 3));
}

void classical_oracle(Outcome& o) {
    const auto& s = spectrum(1.0, 0.75, caption_nmax.at(1.0));
    ManifoldOptions quiet;
    quiet.tol_meta = INFINITY;
    const MetastableManifold m = extract_manifold(s, quiet);
    const Complex a1 = expectation(annihilation(s.n_max), m.mu1);
    const TwoStateTelegraph t = make_telegraph(a1, m.Gamma1);
    const auto taus = linear_spaced(0.0, 3.0 / m.Gamma1, 31);
    const auto est = telegraph_monte_carlo(t, 10000, taus.back(), 12345, taus);
    const auto exact = telegraph_statistics(t, taus);
    double worst = 0.0;
    for (std::size_t k = 1; k < taus.size(); ++k)
        worst = std::max(worst, std::abs(est.C[k] - exact.C[k]) / est.C_stderr[k]);
    o.check(worst <= 3.0, "10^4 paths, max |C_mc - C| / stderr = " + num(worst, 3));

    const ModelParams p = point(0.1, 0.2);
    const auto fp = classical_fixed_points(p);
    const std::vector<double> times{200.0};
    const Complex end = integrate_mean_field(1.2 * fp.alpha_plus, p, times).back();
    o.check(std::abs(end - fp.alpha_plus) <= 1e-6, "mean field from 1.2 alpha_plus ends " + num(std::abs(end - fp.alpha_plus), 3) +
                                                       " from alpha_plus");
}

void structural(Outcome& o) {
    std::vector<std::tuple<double, double, int>> builds{{1.0, 0.75, 20}};
    for (const auto& [g2, eta] : kCaptionPoints) builds.emplace_back(g2, eta, caption_nmax.at(g2));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const auto& [g2, eta, n] : builds) {
        const Superoperator l = build_liouvillian(point(g2, eta, n));
        const VectorizedOperator id = vectorize(identity_operator(n));
        const double trace = (id.adjoint() * l).cwiseAbs().maxCoeff();
        OperatorMatrix x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x(i, j) = Complex{g(rng), g(rng)};
        const OperatorMatrix lx = devectorize(l * vectorize(x));
        const OperatorMatrix lxd = devectorize(l * vectorize(OperatorMatrix(x.adjoint())));
        const double herm = max_abs(lxd - lx.adjoint()) / std::max(1.0, max_abs(lx));
        const Superoperator z = parity_superop(n);
        const double comm = max_abs(z * l - l * z);
        const auto& s = spectrum(g2, eta, n);
        const double bio = max_abs(s.left.adjoint() * s.right - Eigen::MatrixXcd::Identity(s.size(), s.size()));
        const double l0 = std::abs(s.eigenvalue(0));
        const std::string tag = "n_max=" + std::to_string(n) + " gamma2=" + num(g2) + ": ";
        o.check(trace <= 1e-10, tag + "trace " + num(trace, 3));
        o.check(herm <= 1e-10, tag + "hermiticity " + num(herm, 3));
        o.check(comm < 1e-10, tag + "[Z2,L] " + num(comm, 3));
        o.check(bio <= 1e-8, tag + "biorthonormality " + num(bio, 3));
        o.check(l0 <= 1e-9, tag + "|lambda0| " + num(l0, 3));
    }
}

} // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    report(1, "dominant decay rates", dominant_rates);
    report(2, "gap calibration", gap_calibration);
    report(3, "exceptional-point structure", exceptional_points);
    report(4, "entrainment curve", entrainment);
    report(5, "eigenexpansion vs ODE oracle", oracle_equivalence);
    report(6, "metastable reduction", metastable_reduction);
    report(7, "manifold structure", manifold_structure);
    report(8, "Wigner suite", wigner_suite);
    report(9, "classical oracle", classical_oracle);
    report(10, "structural invariants", structural);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
