// metastable.hpp: metastable manifold, extreme metastable states (EMS) and
// the effective two-state dynamics between them.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouspec/spectral.hpp"

namespace liouspec {

struct MetastableManifold {
    OperatorMatrix rho_ss;
    OperatorMatrix rho1;
    OperatorMatrix sigma1;
    double c_max = 0.0;
    double c_min = 0.0;
    OperatorMatrix mu1;
    OperatorMatrix mu2;
    OperatorMatrix P1;
    OperatorMatrix P2;
    double Gamma1 = 0.0;
    double Gamma2 = 0.0;
    double mu1_min_eigenvalue = 0.0;
    double mu2_min_eigenvalue = 0.0;

    int dim() const { return static_cast<int>(rho_ss.rows()); }
};

struct ManifoldOptions {
    double real_tolerance = 1e-8;
    double tol_meta = 1e-2; // EMS positivity slack, logged not fatal
};

// Throws NotMetastableError when lambda_1 is not real.
MetastableManifold extract_manifold(const LiouvillianSpectrum& s, const ManifoldOptions& opts = {});

// p1 + p2 = 1 exactly: only p1 is stored.
class TwoStateProbabilities {
public:
    TwoStateProbabilities() = default;
    explicit TwoStateProbabilities(double p1);

    double p1() const { return p1_; }
    double p2() const { return 1.0 - p1_; }

private:
    double p1_ = 0.5;
};

// p_i = Tr[P_i rho]; values within 1e-6 outside [0, 1] are clamped, larger
// excursions throw OutsideManifoldError.
TwoStateProbabilities project_onto_manifold(const MetastableManifold& m, const OperatorMatrix& rho);

// Solution of p1' = -(Gamma1 / 2)(p1 - p2).
TwoStateProbabilities evolve_probabilities(TwoStateProbabilities p0, double Gamma1, double t);

// p1 mu1 + p2 mu2
OperatorMatrix reconstruct_state(const MetastableManifold& m, TwoStateProbabilities p);

// Tr sqrt((A - B)^dagger (A - B)) / 2
double trace_distance(const OperatorMatrix& a, const OperatorMatrix& b);

struct ManifoldSummary {
    Complex lambda1;
    Complex lambda2;
    double c_max = 0.0;
    double c_min = 0.0;
    Complex amplitude1; // <a>_1
    double mu1_min_eigenvalue = 0.0;
    double mu2_min_eigenvalue = 0.0;
    double distance_mu1_approx = 0.0; // D(mu1, rho_ss + rho1)
    double distance_mu2_approx = 0.0; // D(mu2, rho_ss - rho1)
};
ManifoldSummary summarize(const LiouvillianSpectrum& s, const MetastableManifold& m);

struct EmsPoint {
    double gamma2_ratio = 0.0;
    double eta_ratio = 0.0;
    bool applicable = false; // false below the exceptional point
    double gap_ratio = 1.0;
    double log10_distance = 0.0;
    int n_max_used = 0;
    std::optional<std::string> error;
};

struct EmsMapRequest {
    std::vector<double> gamma2_ratios;
    std::vector<double> eta_ratios;
    double delta_ratio = 0.1;
    TruncationPolicy truncation;
    int workers = 1;
};

struct EmsMap {
    std::vector<double> gamma2_ratios;
    std::vector<double> eta_ratios;
    std::vector<EmsPoint> points; // row-major like GapMap
};

EmsPoint ems_point(const ModelParams& p);
EmsMap ems_approximation_map(const EmsMapRequest& req);

} // namespace liouspec
