// evolution.hpp: exact and metastable time evolution, lab-frame transform,
// initial-state builders.
#pragma once

#include <span>
#include <vector>

#include "liouspec/metastable.hpp"

namespace liouspec {

struct Trajectory {
    std::vector<double> times; // units of 1/gamma1, strictly increasing
    std::vector<OperatorMatrix> states;
    double tau1 = 0.0; // 1 / Gamma1 (0 when unknown)
    double tau2 = 0.0; // 1 / Gamma2
};

// Requires |alpha|^2 <= n_max / 4.
DensityMatrix coherent_state(Complex alpha, int n_max);

// Random full-rank state from a seeded Ginibre draw (test and sweep helper).
DensityMatrix random_density_matrix(int n_max, unsigned long long seed);

// Eigenmode sum rho(t) = rho_ss + sum_j Tr[sigma_j^dagger rho0] rho_j e^{lambda_j t}.
// Rejects spectra whose slowest pair (lambda_1, lambda_2) has a normalizer below
// near_ep_threshold.
Trajectory evolve_eigenexpansion(const LiouvillianSpectrum& s, const OperatorMatrix& rho0,
                                 std::span<const double> times, double near_ep_threshold = 1e-6);

struct OdeOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    long max_steps = 5'000'000;
};

// Adaptive Dormand-Prince integration of d vec(X)/dt = L vec(X). Works for any
// operator X (not only states); trace drift is reported through `trace_drift`.
std::vector<VectorizedOperator> propagate_ode(const Superoperator& l, const VectorizedOperator& x0,
                                              std::span<const double> times, const OdeOptions& opts = {},
                                              double* trace_drift = nullptr);

Trajectory evolve_ode(const Superoperator& l, const OperatorMatrix& rho0, std::span<const double> times,
                      const OdeOptions& opts = {});

// <a(t)> = Tr[a rho(t)] per stored state.
std::vector<Complex> amplitude_series(const Trajectory& traj);
std::vector<double> number_series(const Trajectory& traj);

// <a(t)> from the mode sum without building states. With odd_only, modes of
// even parity are dropped.
std::vector<Complex> amplitude_eigenexpansion(const LiouvillianSpectrum& s, const OperatorMatrix& rho0,
                                              std::span<const double> times, bool odd_only = false);

// <a>_1 p1(t) + <a>_2 p2(t)
std::vector<Complex> amplitude_metastable(const MetastableManifold& m, TwoStateProbabilities p0,
                                          std::span<const double> times);

// e^{-i omega_s t} <a(t)>
std::vector<Complex> lab_frame_amplitude(std::span<const Complex> rot_amp, std::span<const double> times,
                                         double omega_s);

std::vector<double> log_spaced(double t0, double t1, int n);
std::vector<double> linear_spaced(double t0, double t1, int n);

} // namespace liouspec
