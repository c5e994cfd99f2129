#include "liouspec/metastable.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "liouspec/errors.hpp"
#include "liouspec/parallel.hpp"

namespace liouspec {

MetastableManifold extract_manifold(const LiouvillianSpectrum& s, const ManifoldOptions& opts) {
    if (s.size() < 3) throw Error("extract_manifold: spectrum too small");
    const Complex l1 = s.eigenvalue(1);
    if (std::abs(l1.imag()) > opts.real_tolerance) {
        std::ostringstream msg;
        msg << "not in metastable basis: lambda_1 = " << l1 << " is complex";
        throw NotMetastableError(msg.str());
    }
    MetastableManifold m;
    m.rho_ss = s.rho_ss;
    m.rho1 = s.right_mode(1);
    m.sigma1 = s.left_mode(1);
    m.rho1 = 0.5 * (m.rho1 + m.rho1.adjoint());
    m.sigma1 = 0.5 * (m.sigma1 + m.sigma1.adjoint());
    const Eigen::VectorXd c = hermitian_eigenvalues(m.sigma1);
    m.c_min = c.minCoeff();
    m.c_max = c.maxCoeff();
    m.mu1 = m.rho_ss + m.c_max * m.rho1;
    m.mu2 = m.rho_ss + m.c_min * m.rho1;
    const int dim = m.dim();
    const OperatorMatrix id = OperatorMatrix::Identity(dim, dim);
    const double dc = m.c_max - m.c_min;
    m.P1 = (m.sigma1 - m.c_min * id) / dc;
    m.P2 = (m.c_max * id - m.sigma1) / dc;
    m.Gamma1 = -l1.real();
    m.Gamma2 = -s.eigenvalue(2).real();
    m.mu1_min_eigenvalue = hermitian_eigenvalues(m.mu1).minCoeff();
    m.mu2_min_eigenvalue = hermitian_eigenvalues(m.mu2).minCoeff();
    const double worst = std::min(m.mu1_min_eigenvalue, m.mu2_min_eigenvalue);
    if (worst < -opts.tol_meta)
        std::clog << "liouspec: EMS minimum eigenvalue " << worst << " below -" << opts.tol_meta << "\n";
    return m;
}

TwoStateProbabilities::TwoStateProbabilities(double p1) : p1_(p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvalidParameterError("two-state probability outside [0, 1]");
}

TwoStateProbabilities project_onto_manifold(const MetastableManifold& m, const OperatorMatrix& rho) {
    if (rho.rows() != m.dim() || rho.cols() != m.dim())
        throw DimensionError("project_onto_manifold: state dimension does not match the manifold");
    double p1 = expectation(m.P1, rho).real();
    constexpr double slack = 1e-6;
    if (p1 < -slack || p1 > 1.0 + slack) {
        std::ostringstream msg;
        msg << "outside manifold regime: p1 = " << p1;
        throw OutsideManifoldError(msg.str());
    }
    p1 = std::clamp(p1, 0.0, 1.0);
    return TwoStateProbabilities(p1);
}

TwoStateProbabilities evolve_probabilities(TwoStateProbabilities p0, double Gamma1, double t) {
    if (t < 0.0) throw InvalidParameterError("evolve_probabilities: negative time");
    const double e = std::exp(-Gamma1 * t);
    const double p1 = 0.5 * p0.p1() * (1.0 + e) + 0.5 * p0.p2() * (1.0 - e);
    return TwoStateProbabilities(std::clamp(p1, 0.0, 1.0));
}

OperatorMatrix reconstruct_state(const MetastableManifold& m, TwoStateProbabilities p) {
    return p.p1() * m.mu1 + p.p2() * m.mu2;
}

double trace_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance: shape mismatch");
    return 0.5 * trace_norm(a - b);
}

ManifoldSummary summarize(const LiouvillianSpectrum& s, const MetastableManifold& m) {
    ManifoldSummary out;
    out.lambda1 = s.eigenvalue(1);
    out.lambda2 = s.eigenvalue(2);
    out.c_max = m.c_max;
    out.c_min = m.c_min;
    out.amplitude1 = expectation(annihilation(m.dim()), m.mu1);
    out.mu1_min_eigenvalue = m.mu1_min_eigenvalue;
    out.mu2_min_eigenvalue = m.mu2_min_eigenvalue;
    out.distance_mu1_approx = trace_distance(m.mu1, m.rho_ss + m.rho1);
    out.distance_mu2_approx = trace_distance(m.mu2, m.rho_ss - m.rho1);
    return out;
}

EmsPoint ems_point(const ModelParams& p) {
    EmsPoint out;
    const ModelParams q = p.normalized();
    out.gamma2_ratio = q.gamma2;
    out.eta_ratio = q.eta;
    out.n_max_used = q.n_max;
    try {
        const LiouvillianSpectrum s = eigendecompose(build_liouvillian(q));
        const Complex l1 = s.eigenvalue(1);
        const Complex l2 = s.eigenvalue(2);
        out.gap_ratio = l1.real() / l2.real();
        if (std::abs(l1.imag()) > ManifoldOptions{}.real_tolerance) {
            out.applicable = false;
            out.log10_distance = 0.0; // masked, D = 1
            return out;
        }
        ManifoldOptions quiet;
        quiet.tol_meta = std::numeric_limits<double>::infinity();
        const MetastableManifold m = extract_manifold(s, quiet);
        out.applicable = true;
        out.log10_distance = std::log10(trace_distance(m.mu1, m.rho_ss + m.rho1));
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

EmsMap ems_approximation_map(const EmsMapRequest& req) {
    EmsMap out;
    out.gamma2_ratios = req.gamma2_ratios;
    out.eta_ratios = req.eta_ratios;
    const std::size_t ne = req.eta_ratios.size();
    const std::size_t n = req.gamma2_ratios.size() * ne;
    out.points = parallel_map(n, req.workers, [&](std::size_t k) {
        ModelParams p;
        p.gamma2 = req.gamma2_ratios[k / ne];
        p.eta = req.eta_ratios[k % ne];
        p.delta = req.delta_ratio;
        EmsPoint pt;
        try {
            p.n_max = choose_truncation(p, req.truncation).n_max;
            pt = ems_point(p);
        } catch (const std::exception& e) {
            pt.gamma2_ratio = p.gamma2;
            pt.eta_ratio = p.eta;
            pt.error = e.what();
        }
        return pt;
    });
    return out;
}

} // namespace liouspec
