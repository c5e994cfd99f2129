// classical.hpp: mean-field limit and the classical two-state telegraph oracle.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "liouspec/liouvillian.hpp"

namespace liouspec {

// d alpha/dt = -i Delta alpha + (gamma1/2) alpha - gamma2 |alpha|^2 alpha - 2 eta alpha*
Complex mean_field_rhs(Complex alpha, const ModelParams& p);

enum class Regime { LimitCycle, Critical, Bistable };
const char* to_string(Regime r);

// alpha_pm = +-R e^{i phi}; 2 phi = pi - asin(Delta / (2 eta)) on the principal
// branch, so phi lies in (pi/4, pi/2] for Delta >= 0.
struct ClassicalFixedPoints {
    Complex alpha_plus;
    Complex alpha_minus;
    double R = 0.0;
    double phi = 0.0;
};

struct RegimeInfo {
    double eta_c = 0.0;
    Regime regime = Regime::LimitCycle;
    double Omega = 0.0; // limit-cycle frequency, when regime == LimitCycle
    std::optional<ClassicalFixedPoints> fixed_points;
};

RegimeInfo classify_regime(const ModelParams& p);
// Throws InvalidParameterError outside the bistable regime.
ClassicalFixedPoints classical_fixed_points(const ModelParams& p);

struct MeanFieldOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double divergence = 1e3;
};

// Adaptive integration of the mean-field flow; throws IntegrationError past |alpha| > divergence.
std::vector<Complex> integrate_mean_field(Complex alpha0, const ModelParams& p, std::span<const double> times,
                                          const MeanFieldOptions& opts = {});

struct TwoStateTelegraph {
    Complex alpha1;
    double switch_rate = 0.0; // Gamma1 / 2

    Complex alpha2() const { return -alpha1; }
    double Gamma1() const { return 2.0 * switch_rate; }
};

TwoStateTelegraph make_telegraph(Complex alpha1, double Gamma1);

struct TelegraphStatistics {
    std::vector<Complex> mean; // sum_j alpha_j p_j(tau) from p0
    std::vector<Complex> C;    // |alpha1|^2 e^{-Gamma1 tau}
};

TelegraphStatistics telegraph_statistics(const TwoStateTelegraph& t, std::span<const double> taus,
                                         double p1_initial = 1.0);

struct TelegraphEstimate {
    std::vector<double> taus;
    std::vector<Complex> C;        // empirical stationary C(tau)
    std::vector<double> C_stderr;
    std::vector<Complex> mean;     // empirical mean at tau, paths started in state 1
    double occupancy1 = 0.0;       // fraction in state 1 at the horizon, started in state 1
    double occupancy_stderr = 0.0;
};

// Exact exponential holding times; path k uses a seed derived from (seed, k).
TelegraphEstimate telegraph_monte_carlo(const TwoStateTelegraph& t, int n_paths, double horizon,
                                        std::uint64_t seed, std::span<const double> taus, int workers = 1);

} // namespace liouspec
