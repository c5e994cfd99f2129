#include "liouspec/classical.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "liouspec/errors.hpp"
#include "liouspec/parallel.hpp"

namespace liouspec {

Complex mean_field_rhs(Complex alpha, const ModelParams& p) {
    return -kI * p.delta * alpha + 0.5 * p.gamma1 * alpha - p.gamma2 * std::norm(alpha) * alpha -
           2.0 * p.eta * std::conj(alpha);
}

const char* to_string(Regime r) {
    switch (r) {
    case Regime::LimitCycle: return "limit_cycle";
    case Regime::Critical: return "critical";
    case Regime::Bistable: return "bistable";
    }
    return "unknown";
}

ClassicalFixedPoints classical_fixed_points(const ModelParams& p) {
    const double eta_c = std::abs(p.delta) / 2.0;
    if (!(p.eta > eta_c)) throw InvalidParameterError("classical fixed points need eta > |Delta| / 2");
    if (!(p.gamma2 > 0.0)) throw InvalidParameterError("classical fixed points need gamma2 > 0");
    ClassicalFixedPoints fp;
    const double root = std::sqrt(4.0 * p.eta * p.eta - p.delta * p.delta);
    fp.R = std::sqrt(p.gamma1 / (2.0 * p.gamma2) + root / p.gamma2);
    fp.phi = 0.5 * (std::numbers::pi - std::asin(p.delta / (2.0 * p.eta)));
    fp.alpha_plus = std::polar(fp.R, fp.phi);
    fp.alpha_minus = -fp.alpha_plus;
    return fp;
}

RegimeInfo classify_regime(const ModelParams& p) {
    RegimeInfo info;
    info.eta_c = std::abs(p.delta) / 2.0;
    const double slack = 1e-12 * std::max(1.0, info.eta_c);
    if (std::abs(p.eta - info.eta_c) <= slack) {
        info.regime = Regime::Critical;
    } else if (p.eta < info.eta_c) {
        info.regime = Regime::LimitCycle;
        const double x = 2.0 * p.eta / p.delta;
        info.Omega = p.delta * std::sqrt(1.0 - x * x);
    } else {
        info.regime = Regime::Bistable;
        info.fixed_points = classical_fixed_points(p);
    }
    return info;
}

std::vector<Complex> integrate_mean_field(Complex alpha0, const ModelParams& p, std::span<const double> times,
                                          const MeanFieldOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()))
        throw InvalidParameterError("integrate_mean_field: alpha0 must be finite");
    using State = std::array<double, 2>;
    auto rhs = [&](const State& x, State& dx, double) {
        const Complex d = mean_field_rhs({x[0], x[1]}, p);
        dx = {d.real(), d.imag()};
    };
    State x{alpha0.real(), alpha0.imag()};
    std::vector<Complex> out;
    out.reserve(times.size());
    auto observer = [&](const State& s, double t) {
        if (std::hypot(s[0], s[1]) > opts.divergence) {
            std::ostringstream msg;
            msg << "mean-field flow diverged past |alpha| = " << opts.divergence << " at t = " << t;
            throw IntegrationError(msg.str());
        }
        out.emplace_back(s[0], s[1]);
    };
    std::vector<double> grid(times.begin(), times.end());
    const bool prepend = grid.empty() || grid.front() > 0.0;
    if (prepend) grid.insert(grid.begin(), 0.0);
    if (grid.size() == 1) {
        observer(x, 0.0);
        return out;
    }
    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), 1e-3, observer);
    if (prepend) out.erase(out.begin());
    return out;
}

TwoStateTelegraph make_telegraph(Complex alpha1, double Gamma1) {
    if (!(Gamma1 > 0.0)) throw InvalidParameterError("telegraph switching rate must be positive");
    return {alpha1, Gamma1 / 2.0};
}

TelegraphStatistics telegraph_statistics(const TwoStateTelegraph& t, std::span<const double> taus, double p1_initial) {
    TelegraphStatistics s;
    s.mean.reserve(taus.size());
    s.C.reserve(taus.size());
    const double a2 = std::norm(t.alpha1);
    for (double tau : taus) {
        const double e = std::exp(-t.Gamma1() * tau);
        const double p1 = 0.5 * (1.0 + (2.0 * p1_initial - 1.0) * e);
        s.mean.push_back(t.alpha1 * p1 + t.alpha2() * (1.0 - p1));
        s.C.push_back(a2 * e);
    }
    return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ChunkSums {
    std::vector<double> s;  // sum of s(tau) with s = +1 in state 1, -1 in state 2
    std::vector<double> s2; // sum of s(tau)^2 (always 1, kept for the variance formula)
    double horizon_in1 = 0.0;
};

} // namespace

TelegraphEstimate telegraph_monte_carlo(const TwoStateTelegraph& t, int n_paths, double horizon, std::uint64_t seed,
                                        std::span<const double> taus, int workers) {
    if (!(t.switch_rate > 0.0)) throw InvalidParameterError("telegraph switching rate must be positive");
    if (n_paths < 1000) throw InvalidParameterError("telegraph_monte_carlo needs at least 1000 paths");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidParameterError("invalid horizon");
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] < 0.0 || taus[k] > horizon) throw InvalidParameterError("tau outside [0, horizon]");
        if (k > 0 && taus[k] < taus[k - 1]) throw InvalidParameterError("taus must be non-decreasing");
    }
    constexpr int chunk = 256;
    const int chunks = (n_paths + chunk - 1) / chunk;
    const std::size_t nt = taus.size();
    const auto sums = parallel_map(static_cast<std::size_t>(chunks), workers, [&](std::size_t c) {
        ChunkSums cs;
        cs.s.assign(nt, 0.0);
        cs.s2.assign(nt, 0.0);
        const int first = static_cast<int>(c) * chunk;
        const int last = std::min(n_paths, first + chunk);
        for (int path = first; path < last; ++path) {
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(path))));
            std::exponential_distribution<double> hold(t.switch_rate);
            int state = 1;
            double next_flip = hold(rng);
            auto advance = [&](double until) {
                while (next_flip <= until) {
                    state = -state;
                    next_flip += hold(rng);
                }
            };
            for (std::size_t k = 0; k < nt; ++k) {
                advance(taus[k]);
                cs.s[k] += state;
                cs.s2[k] += 1.0;
            }
            advance(horizon);
            if (state == 1) cs.horizon_in1 += 1.0;
        }
        return cs;
    });

    std::vector<double> s(nt, 0.0), s2(nt, 0.0);
    double in1 = 0.0;
    for (const auto& cs : sums) {
        for (std::size_t k = 0; k < nt; ++k) {
            s[k] += cs.s[k];
            s2[k] += cs.s2[k];
        }
        in1 += cs.horizon_in1;
    }
    const double n = n_paths;
    const double a2 = std::norm(t.alpha1);
    TelegraphEstimate est;
    est.taus.assign(taus.begin(), taus.end());
    for (std::size_t k = 0; k < nt; ++k) {
        const double mean = s[k] / n;
        const double var = std::max(s2[k] / n - mean * mean, 0.0) * n / (n - 1.0);
        // s(0) = +1 on every path, so s(0) s(tau) = s(tau).
        est.C.emplace_back(a2 * mean, 0.0);
        est.C_stderr.push_back(a2 * std::sqrt(var / n));
        est.mean.push_back(t.alpha1 * mean);
    }
    est.occupancy1 = in1 / n;
    est.occupancy_stderr = std::sqrt(est.occupancy1 * (1.0 - est.occupancy1) / (n - 1.0));
    return est;
}

} // namespace liouspec
