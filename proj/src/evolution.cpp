#include "liouspec/evolution.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/SparseCore>
#include <boost/numeric/odeint.hpp>

#include "liouspec/errors.hpp"

namespace liouspec {

namespace odeint = boost::numeric::odeint;

DensityMatrix coherent_state(Complex alpha, int n_max) {
    if (n_max < 1) throw InvalidParameterError("coherent_state: n_max must be positive");
    if (std::norm(alpha) > n_max / 4.0) {
        std::ostringstream msg;
        msg << "coherent_state: |alpha|^2 = " << std::norm(alpha) << " exceeds n_max / 4 = " << n_max / 4.0;
        throw InvalidParameterError(msg.str());
    }
    Eigen::VectorXcd psi(n_max);
    psi(0) = 1.0;
    for (int n = 1; n < n_max; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    psi.normalize();
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix random_density_matrix(int n_max, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    OperatorMatrix x(n_max, n_max);
    for (int c = 0; c < n_max; ++c)
        for (int r = 0; r < n_max; ++r) x(r, c) = Complex{g(rng), g(rng)};
    OperatorMatrix rho = x * x.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho);
}

namespace {

void check_times(std::span<const double> times) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || !std::isfinite(times[k])) throw InvalidParameterError("times must be finite and >= 0");
        if (k > 0 && times[k] <= times[k - 1]) throw InvalidParameterError("times must be strictly increasing");
    }
}

void mark_timescales(Trajectory& traj, const LiouvillianSpectrum& s) {
    if (s.size() > 2) {
        const double g1 = -s.eigenvalue(1).real();
        const double g2 = -s.eigenvalue(2).real();
        traj.tau1 = g1 > 0.0 ? 1.0 / g1 : 0.0;
        traj.tau2 = g2 > 0.0 ? 1.0 / g2 : 0.0;
    }
}

Eigen::VectorXcd mode_coefficients(const LiouvillianSpectrum& s, const OperatorMatrix& rho0) {
    if (rho0.rows() != s.n_max || rho0.cols() != s.n_max) throw DimensionError("initial state does not match the spectrum");
    return s.left.adjoint() * vectorize(rho0);
}

} // namespace

Trajectory evolve_eigenexpansion(const LiouvillianSpectrum& s, const OperatorMatrix& rho0,
                                 std::span<const double> times, double near_ep_threshold) {
    check_times(times);
    const double slow = s.size() > 2 ? std::min(s.normalizers(1), s.normalizers(2)) : s.min_normalizer;
    if (slow < near_ep_threshold) {
        std::ostringstream msg;
        msg << "eigenexpansion rejected near an exceptional point (normalizer " << slow
            << "); use the ODE route";
        throw NearDefectiveError(msg.str());
    }
    const Eigen::VectorXcd c = mode_coefficients(s, rho0);
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    for (double t : times) {
        const Eigen::VectorXcd w = c.array() * (s.eigenvalues.array() * t).exp();
        traj.states.push_back(devectorize(s.right * w));
    }
    mark_timescales(traj, s);
    return traj;
}

std::vector<VectorizedOperator> propagate_ode(const Superoperator& l, const VectorizedOperator& x0,
                                              std::span<const double> times, const OdeOptions& opts,
                                              double* trace_drift) {
    check_times(times);
    if (l.rows() != x0.size()) throw DimensionError("propagate_ode: generator and state sizes differ");
    const Eigen::SparseMatrix<Complex> ls = l.sparseView();
    const int dim = fock_dim_of(l);

    using State = std::vector<Complex>;
    State x(x0.data(), x0.data() + x0.size());
    auto rhs = [&](const State& in, State& out, double) {
        out.resize(in.size());
        Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size())) =
            ls * Eigen::Map<const Eigen::VectorXcd>(in.data(), static_cast<Eigen::Index>(in.size()));
    };

    std::vector<double> grid;
    const bool prepend = times.empty() || times.front() > 0.0;
    if (prepend) grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());

    auto trace_of = [dim](const State& v) {
        Complex tr{};
        for (int k = 0; k < dim; ++k) tr += v[static_cast<std::size_t>(k) * dim + k];
        return tr;
    };
    const Complex tr0 = trace_of(x);
    double drift = 0.0;

    std::vector<VectorizedOperator> out;
    out.reserve(times.size());
    std::size_t seen = 0;
    auto observer = [&](const State& v, double) {
        drift = std::max(drift, std::abs(trace_of(v) - tr0));
        if (!(prepend && seen == 0)) out.emplace_back(Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size())));
        ++seen;
    };

    if (grid.size() > 1) {
        auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
        try {
            odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), opts.initial_step, observer,
                                    odeint::max_step_checker(static_cast<int>(std::min<long>(opts.max_steps, INT32_MAX))));
        } catch (const std::exception& e) {
            throw IntegrationError(std::string("ODE integration failed: ") + e.what());
        }
    } else {
        observer(x, 0.0);
    }
    if (trace_drift) *trace_drift = drift;
    return out;
}

Trajectory evolve_ode(const Superoperator& l, const OperatorMatrix& rho0, std::span<const double> times,
                      const OdeOptions& opts) {
    double drift = 0.0;
    const auto vs = propagate_ode(l, vectorize(rho0), times, opts, &drift);
    if (drift > 1e-8) std::clog << "liouspec: ODE trace drift " << drift << " (not renormalized)\n";
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(vs.size());
    for (const auto& v : vs) traj.states.push_back(devectorize(v));
    return traj;
}

std::vector<Complex> amplitude_series(const Trajectory& traj) {
    std::vector<Complex> out;
    out.reserve(traj.states.size());
    if (traj.states.empty()) return out;
    const OperatorMatrix a = annihilation(static_cast<int>(traj.states.front().rows()));
    for (const auto& rho : traj.states) out.push_back(expectation(a, rho));
    return out;
}

std::vector<double> number_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    if (traj.states.empty()) return out;
    const OperatorMatrix n = number_operator(static_cast<int>(traj.states.front().rows()));
    for (const auto& rho : traj.states) out.push_back(expectation(n, rho).real());
    return out;
}

std::vector<Complex> amplitude_eigenexpansion(const LiouvillianSpectrum& s, const OperatorMatrix& rho0,
                                              std::span<const double> times, bool odd_only) {
    check_times(times);
    const Eigen::VectorXcd c = mode_coefficients(s, rho0);
    // Tr[a rho_j] = vec(a^dagger)^dagger vec(rho_j)
    const Eigen::VectorXcd amp = s.right.transpose() * vectorize(annihilation(s.n_max).transpose());
    Eigen::VectorXcd weight = c.cwiseProduct(amp);
    if (odd_only)
        for (int j = 0; j < s.size(); ++j)
            if (s.parity[static_cast<std::size_t>(j)] == 1) weight(j) = 0.0;
    std::vector<Complex> out;
    out.reserve(times.size());
    for (double t : times) out.push_back((weight.array() * (s.eigenvalues.array() * t).exp()).sum());
    return out;
}

std::vector<Complex> amplitude_metastable(const MetastableManifold& m, TwoStateProbabilities p0,
                                          std::span<const double> times) {
    check_times(times);
    const OperatorMatrix a = annihilation(m.dim());
    const Complex a1 = expectation(a, m.mu1);
    const Complex a2 = expectation(a, m.mu2);
    std::vector<Complex> out;
    out.reserve(times.size());
    for (double t : times) {
        const auto p = evolve_probabilities(p0, m.Gamma1, t);
        out.push_back(a1 * p.p1() + a2 * p.p2());
    }
    return out;
}

std::vector<Complex> lab_frame_amplitude(std::span<const Complex> rot_amp, std::span<const double> times,
                                         double omega_s) {
    if (rot_amp.size() != times.size()) throw DimensionError("lab_frame_amplitude: series and times differ in length");
    if (omega_s < 0.0) throw InvalidParameterError("omega_s must be >= 0");
    std::vector<Complex> out(rot_amp.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::polar(1.0, -omega_s * times[k]) * rot_amp[k];
    return out;
}

std::vector<double> log_spaced(double t0, double t1, int n) {
    if (!(t0 > 0.0 && t1 > t0) || n < 2) throw InvalidParameterError("log_spaced: need 0 < t0 < t1 and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(t0), b = std::log(t1);
    for (int k = 0; k < n; ++k) out[k] = std::exp(a + (b - a) * k / (n - 1));
    out.front() = t0;
    out.back() = t1;
    return out;
}

std::vector<double> linear_spaced(double t0, double t1, int n) {
    if (!(t1 > t0) || n < 2) throw InvalidParameterError("linear_spaced: need t0 < t1 and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[k] = t0 + (t1 - t0) * k / (n - 1);
    out.back() = t1;
    return out;
}

} // namespace liouspec
