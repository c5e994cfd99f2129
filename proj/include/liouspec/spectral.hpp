// spectral.hpp: Liouvillian eigendecomposition, exceptional points and gap maps.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouspec/fockspace.hpp"
#include "liouspec/liouvillian.hpp"

namespace liouspec {

// Eigenmodes sorted by non-increasing real part (ties: descending imaginary
// part). Column j of `right` / `left` is vec(rho_j) / vec(sigma_j) with
// Tr[sigma_j^dagger rho_k] = delta_jk.
//
// Gauge: rho_0 = rho_ss, sigma_0 = I. For j >= 1 every rho_j has unit trace
// norm; for real eigenvalues rho_j is Hermitian; the partner of a complex
// eigenvalue stores rho_j^dagger. Left modes are then re-fitted to keep the
// biorthonormality, so sigma_j carries the same symmetries only up to the
// conditioning of the mode. The pair (rho_1, sigma_1) is signed
// so that c_max >= |c_min| for the eigenvalues c of sigma_1, and when those
// coincide, so that Im Tr[a rho_1] > 0.
struct LiouvillianSpectrum {
    int n_max = 0;
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd right;
    Eigen::MatrixXcd left;
    std::vector<int> parity;
    OperatorMatrix rho_ss;
    // Smallest |Tr[sigma_j^dagger rho_j]| over unit-norm eigenvectors before
    // rescaling; collapses toward zero at exceptional points.
    double min_normalizer = 1.0;
    // The same quantity per mode.
    Eigen::VectorXd normalizers;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    Complex eigenvalue(int j) const { return eigenvalues(j); }
    OperatorMatrix right_mode(int j) const;
    OperatorMatrix left_mode(int j) const;
};

struct EigenOptions {
    // Normalizer magnitude below which the basis is reported near-defective.
    double defect_threshold = 1e-10;
    // Real parts closer than this are sort ties.
    double tie_tolerance = 1e-9;
    // |Im lambda| below this counts as real for gauge fixing.
    double real_tolerance = 1e-8;
};

// Throws NearDefectiveError when a normalizer falls below defect_threshold.
LiouvillianSpectrum eigendecompose(const Superoperator& l, const EigenOptions& opts = {});

// Eigenvalues only, same ordering as eigendecompose.
Eigen::VectorXcd liouvillian_eigenvalues(const Superoperator& l, const EigenOptions& opts = {});

// Solves L rho = 0 with Tr rho = 1 directly (no eigendecomposition).
OperatorMatrix steady_state(const Superoperator& l);

struct DecayRate {
    double Gamma = 0.0;
    double nu = 0.0;
};
DecayRate decay_rate(Complex lambda);
std::vector<DecayRate> decay_rates(const LiouvillianSpectrum& s);

// Returns +1 or -1; throws MixedParityError when neither sign fits.
int parity_of_mode(const OperatorMatrix& rho_j, const Superoperator& z2, double tol = 1e-6);

// ---- truncation ------------------------------------------------------------

struct TruncationPolicy {
    bool automatic = false;
    int fixed = 20;
    int start = 10;
    int step = 5;
    int cap = 50;
    double lambda_tol = 1e-6;     // |lambda_1(n) - lambda_1(n - step)|, units of gamma1
    double population_tol = 1e-8; // stationary weight of the top `step` Fock levels
};

struct TruncationResult {
    int n_max = 0;
    bool converged = false;
    Complex lambda1;
    double lambda1_change = 0.0;
    double top_population = 0.0;
};

// Walks n_max upward by `step` until both criteria hold or the cap is reached.
// A fixed policy returns its n_max unchecked.
TruncationResult choose_truncation(const ModelParams& p, const TruncationPolicy& policy);

// ---- exceptional points ----------------------------------------------------

struct EpOptions {
    double imag_tolerance = 1e-8; // |Im lambda_1| threshold, units of gamma1
    double relative_width = 1e-4;
    int max_iterations = 200;
};

// Slowest decaying eigenvalue lambda_1 (eigenvalues only).
Complex slowest_mode_eigenvalue(const ModelParams& p);

// Bisection on eta for the collision of lambda_1 and lambda_2 onto the real
// axis. The eta of `base` is ignored. Throws NoBracketError.
double find_exceptional_point(const ModelParams& base, double eta_lo, double eta_hi,
                              const EpOptions& opts = {});

// ---- gap maps --------------------------------------------------------------

struct GapPoint {
    double gamma2_ratio = 0.0;
    double eta_ratio = 0.0;
    double Gamma1 = 0.0;
    double Gamma2 = 0.0;
    double nu1 = 0.0;
    double nu2 = 0.0;
    double gap_ratio = 0.0;
    int n_max_used = 0;
    std::optional<std::string> error;

    double log10_gap_ratio() const;
};

struct Polyline {
    std::vector<std::pair<double, double>> points; // (gamma2_ratio, eta_ratio)
};

struct Contour {
    double level = 0.0; // level of Gamma1 / Gamma2
    std::vector<Polyline> lines;
};

struct GapMapRequest {
    std::vector<double> gamma2_ratios;
    std::vector<double> eta_ratios;
    double delta_ratio = 0.1;
    TruncationPolicy truncation;
    int workers = 1;
};

struct GapMap {
    std::vector<double> gamma2_ratios;
    std::vector<double> eta_ratios;
    // Row-major: index = i_gamma2 * eta_ratios.size() + i_eta.
    std::vector<GapPoint> points;
    std::vector<Contour> contours; // levels 1 and 0.1
};

GapPoint gap_point(const ModelParams& p);
GapMap gap_map(const GapMapRequest& req);

// Marching squares over a rectilinear lattice; values row-major as in GapMap.
// NaN cells are skipped.
std::vector<Polyline> extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const std::vector<double>& values, double level);

// Internal structure shared with tests: indices of vec(|m><n|) with m + n even / odd.
std::vector<int> parity_sector_indices(int n_max, int parity);

} // namespace liouspec
