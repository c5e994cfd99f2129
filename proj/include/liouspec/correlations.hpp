// correlations.hpp: stationary two-time correlations, emission spectra and
// the observed frequency.
#pragma once

#include <span>
#include <vector>

#include "liouspec/metastable.hpp"

namespace liouspec {

struct ModeAmplitude {
    Complex A;      // Tr[sigma_j^dagger a rho_ss] Tr[a^dagger rho_j]
    Complex lambda; // eigenvalue of the mode
    int parity = 0;
    int index = 0;
};

// Mode amplitudes of <a^dagger(tau) a(0)>_ss for j >= 1. Throws if the
// stationary amplitude <a>_ss is not zero (the coherent delta term would be
// missing otherwise).
std::vector<ModeAmplitude> correlation_modes(const LiouvillianSpectrum& s);

// sum_j A_j e^{lambda_j tau}
std::vector<Complex> correlation_by_modes(const LiouvillianSpectrum& s, std::span<const double> taus);
std::vector<Complex> correlation_by_modes(std::span<const ModeAmplitude> modes, std::span<const double> taus);

enum class Propagation { Ode, StepExponential };

// Tr[a^dagger e^{L tau}(a rho_ss)] by propagating the perturbed operator.
// Throws NonStationaryError when |L rho_ss|_max > 1e-8.
std::vector<Complex> correlation_by_propagation(const Superoperator& l, const OperatorMatrix& rho_ss,
                                                std::span<const double> taus,
                                                Propagation method = Propagation::Ode);

// <a^dagger(0) a(tau)>_ss = Tr[a e^{L tau}(rho_ss a^dagger)], the tau < 0 branch.
std::vector<Complex> reversed_correlation_by_propagation(const Superoperator& l, const OperatorMatrix& rho_ss,
                                                         std::span<const double> taus);

struct TwoTimeCorrelation {
    std::vector<double> taus;
    std::vector<Complex> propagated;
    std::vector<Complex> modal;
    double max_discrepancy = 0.0;
};

// Both routes; throws Error when they disagree by more than `tolerance` anywhere.
TwoTimeCorrelation two_time_correlation(const Superoperator& l, const LiouvillianSpectrum& s,
                                        std::span<const double> taus, double tolerance = 1e-6,
                                        Propagation method = Propagation::Ode);

struct SpectrumCurve {
    std::vector<double> omega; // units of gamma1, rotating frame
    std::vector<double> S;
    std::vector<double> S_mode1; // j = 1 term alone (empty when unavailable)
    std::vector<ModeAmplitude> modes;

    // 2 Re sum_j A_j / (i omega - lambda_j)
    double evaluate(double omega) const;
};

// [-3|Delta| - 5 Gamma2, 3|Delta| + 5 Gamma2] with 2001 points by default.
std::vector<double> default_omega_grid(double delta, double Gamma2, int points = 2001);

SpectrumCurve emission_spectrum(const LiouvillianSpectrum& s, std::span<const double> omegas);
SpectrumCurve spectrum_from_modes(std::vector<ModeAmplitude> modes, std::span<const double> omegas);

// 2 Re int_0^inf e^{-i omega tau} C(tau) d tau for samples of C on a
// (possibly nonuniform) grid starting at 0; C is linear between samples and the
// oscillating factor is integrated exactly.
std::vector<double> spectrum_from_correlation(std::span<const double> taus, std::span<const Complex> c,
                                              std::span<const double> omegas);

// Relative L2 distance |a - b|_2 / |b|_2.
double relative_l2(std::span<const double> a, std::span<const double> b);

// argmax of S: coarse grid search, then golden section on the closed form.
// Ties go to the smaller |omega|. Throws DegenerateSpectrumError for flat S.
double observed_frequency(const SpectrumCurve& curve, double resolution);

// Tr[sigma_1 a rho_ss] Tr[a^dagger rho_1] e^{-Gamma1 tau}
Complex metastable_prefactor(const MetastableManifold& m);
std::vector<Complex> metastable_correlation(const MetastableManifold& m, std::span<const double> taus);
SpectrumCurve metastable_spectrum(const MetastableManifold& m, std::span<const double> omegas);

} // namespace liouspec
