#include "liouspec/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "liouspec/errors.hpp"
#include "liouspec/evolution.hpp"

namespace liouspec {

std::vector<ModeAmplitude> correlation_modes(const LiouvillianSpectrum& s) {
    const int dim = s.n_max;
    const OperatorMatrix a = annihilation(dim);
    const Complex mean = expectation(a, s.rho_ss);
    if (std::abs(mean) > 1e-8) {
        std::ostringstream msg;
        msg << "stationary amplitude <a>_ss = " << mean << " is not zero; the coherent term is not modelled";
        throw Error(msg.str());
    }
    // Tr[sigma_j^dagger a rho_ss] and Tr[a^dagger rho_j] (a is real, so vec(conj(a)) = vec(a)).
    const Eigen::VectorXcd left_part = s.left.adjoint() * vectorize(OperatorMatrix(a * s.rho_ss));
    const Eigen::VectorXcd right_part = s.right.transpose() * vectorize(a);
    std::vector<ModeAmplitude> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    for (int j = 1; j < s.size(); ++j)
        out.push_back({left_part(j) * right_part(j), s.eigenvalue(j), s.parity[static_cast<std::size_t>(j)], j});
    return out;
}

std::vector<Complex> correlation_by_modes(std::span<const ModeAmplitude> modes, std::span<const double> taus) {
    std::vector<Complex> out(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        Complex c{};
        for (const auto& m : modes) c += m.A * std::exp(m.lambda * taus[k]);
        out[k] = c;
    }
    return out;
}

std::vector<Complex> correlation_by_modes(const LiouvillianSpectrum& s, std::span<const double> taus) {
    const auto modes = correlation_modes(s);
    return correlation_by_modes(std::span<const ModeAmplitude>(modes), taus);
}

namespace {

void require_stationary(const Superoperator& l, const OperatorMatrix& rho_ss) {
    const double residual = (l * vectorize(rho_ss)).cwiseAbs().maxCoeff();
    if (residual > 1e-8) {
        std::ostringstream msg;
        msg << "rho_ss is not stationary: |L rho_ss|_max = " << residual;
        throw NonStationaryError(msg.str());
    }
}

// Indices where x is supported, provided L maps that set into itself.
std::vector<int> invariant_support(const Superoperator& l, const VectorizedOperator& x) {
    const int dim = fock_dim_of(l);
    for (int parity : {0, 1}) {
        const auto idx = parity_sector_indices(dim, parity);
        std::vector<char> in(static_cast<std::size_t>(l.rows()), 0);
        for (int i : idx) in[static_cast<std::size_t>(i)] = 1;
        bool supported = true;
        for (Eigen::Index i = 0; i < x.size() && supported; ++i)
            if (!in[static_cast<std::size_t>(i)] && x(i) != Complex{}) supported = false;
        if (!supported) continue;
        bool closed = true;
        for (Eigen::Index r = 0; r < l.rows() && closed; ++r) {
            if (in[static_cast<std::size_t>(r)]) continue;
            for (int c : idx)
                if (l(r, c) != Complex{}) {
                    closed = false;
                    break;
                }
        }
        if (closed) return idx;
    }
    std::vector<int> all(static_cast<std::size_t>(l.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
}

// x(tau_k) for every tau_k by repeated application of e^{L h}; one exponential
// per distinct step h.
std::vector<VectorizedOperator> propagate_exponential(const Superoperator& l, const VectorizedOperator& x0,
                                                      std::span<const double> taus) {
    const auto idx = invariant_support(l, x0);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd block(k, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < k; ++r) block(r, c) = l(idx[r], idx[c]);
    Eigen::VectorXcd y(k);
    for (Eigen::Index r = 0; r < k; ++r) y(r) = x0(idx[r]);

    std::map<long long, Eigen::MatrixXcd> cache;
    auto step = [&](double h) -> const Eigen::MatrixXcd& {
        const auto key = std::llround(h * 1e12);
        auto it = cache.find(key);
        if (it == cache.end()) {
            if (cache.size() > 8) cache.clear();
            it = cache.emplace(key, Eigen::MatrixXcd((block * h).exp())).first;
        }
        return it->second;
    };

    std::vector<VectorizedOperator> out;
    out.reserve(taus.size());
    double t = 0.0;
    for (double tau : taus) {
        if (tau < t) throw InvalidParameterError("tau grid must be non-decreasing and start at >= 0");
        if (tau > t) y = step(tau - t) * y;
        t = tau;
        VectorizedOperator full = VectorizedOperator::Zero(l.rows());
        for (Eigen::Index r = 0; r < k; ++r) full(idx[r]) = y(r);
        out.push_back(std::move(full));
    }
    return out;
}

std::vector<Complex> traced_with(const OperatorMatrix& op, const std::vector<VectorizedOperator>& xs) {
    // Tr[op X] = vec(op^T)^T vec(X)
    const VectorizedOperator w = vectorize(op.transpose());
    std::vector<Complex> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(w.transpose() * x);
    return out;
}

} // namespace

std::vector<Complex> correlation_by_propagation(const Superoperator& l, const OperatorMatrix& rho_ss,
                                                std::span<const double> taus, Propagation method) {
    require_stationary(l, rho_ss);
    const int dim = fock_dim_of(l);
    const OperatorMatrix a = annihilation(dim);
    const VectorizedOperator x0 = vectorize(OperatorMatrix(a * rho_ss));
    OdeOptions tight;
    tight.abs_tol = 1e-10;
    tight.rel_tol = 1e-10;
    const auto xs = method == Propagation::Ode ? propagate_ode(l, x0, taus, tight) : propagate_exponential(l, x0, taus);
    return traced_with(a.adjoint(), xs);
}

std::vector<Complex> reversed_correlation_by_propagation(const Superoperator& l, const OperatorMatrix& rho_ss,
                                                         std::span<const double> taus) {
    require_stationary(l, rho_ss);
    const int dim = fock_dim_of(l);
    const OperatorMatrix a = annihilation(dim);
    const VectorizedOperator x0 = vectorize(OperatorMatrix(rho_ss * a.adjoint()));
    OdeOptions tight;
    tight.abs_tol = 1e-10;
    tight.rel_tol = 1e-10;
    return traced_with(a, propagate_ode(l, x0, taus, tight));
}

TwoTimeCorrelation two_time_correlation(const Superoperator& l, const LiouvillianSpectrum& s,
                                        std::span<const double> taus, double tolerance, Propagation method) {
    TwoTimeCorrelation out;
    out.taus.assign(taus.begin(), taus.end());
    out.propagated = correlation_by_propagation(l, s.rho_ss, taus, method);
    out.modal = correlation_by_modes(s, taus);
    for (std::size_t k = 0; k < taus.size(); ++k)
        out.max_discrepancy = std::max(out.max_discrepancy, std::abs(out.propagated[k] - out.modal[k]));
    if (out.max_discrepancy > tolerance) {
        std::ostringstream msg;
        msg << "two-time correlation routes disagree by " << out.max_discrepancy << " (tolerance " << tolerance << ")";
        throw Error(msg.str());
    }
    return out;
}

double SpectrumCurve::evaluate(double w) const {
    Complex sum{};
    for (const auto& m : modes) sum += m.A / (Complex{0.0, w} - m.lambda);
    return 2.0 * sum.real();
}

std::vector<double> default_omega_grid(double delta, double Gamma2, int points) {
    const double half = 3.0 * std::abs(delta) + 5.0 * std::abs(Gamma2);
    if (!(half > 0.0)) throw InvalidParameterError("default_omega_grid: empty frequency window");
    return linear_spaced(-half, half, points);
}

SpectrumCurve spectrum_from_modes(std::vector<ModeAmplitude> modes, std::span<const double> omegas) {
    SpectrumCurve c;
    c.omega.assign(omegas.begin(), omegas.end());
    c.modes = std::move(modes);
    c.S.reserve(omegas.size());
    for (double w : omegas) c.S.push_back(c.evaluate(w));
    const auto first = std::find_if(c.modes.begin(), c.modes.end(), [](const ModeAmplitude& m) { return m.index == 1; });
    if (first != c.modes.end()) {
        c.S_mode1.reserve(omegas.size());
        for (double w : omegas) c.S_mode1.push_back(2.0 * (first->A / (Complex{0.0, w} - first->lambda)).real());
    }
    return c;
}

SpectrumCurve emission_spectrum(const LiouvillianSpectrum& s, std::span<const double> omegas) {
    return spectrum_from_modes(correlation_modes(s), omegas);
}

std::vector<double> spectrum_from_correlation(std::span<const double> taus, std::span<const Complex> c,
                                              std::span<const double> omegas) {
    if (taus.size() != c.size() || taus.size() < 2) throw DimensionError("spectrum_from_correlation: need matching samples");
    std::vector<double> out(omegas.size());
    for (std::size_t iw = 0; iw < omegas.size(); ++iw) {
        const double w = omegas[iw];
        Complex total{};
        for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
            const double h = taus[k + 1] - taus[k];
            const double th = w * h;
            Complex i0, i1; // int_0^h e^{-i w s} ds and int_0^h (s / h) e^{-i w s} ds
            if (std::abs(th) < 1e-3) {
                const Complex j{0.0, 1.0};
                i0 = h * (1.0 - j * th / 2.0 - th * th / 6.0 + j * th * th * th / 24.0);
                i1 = h * (0.5 - j * th / 3.0 - th * th / 8.0 + j * th * th * th / 30.0);
            } else {
                const Complex e = std::polar(1.0, -th);
                i0 = h * (1.0 - e) / Complex{0.0, th};
                i1 = h * (Complex{0.0, 1.0} * e / th - (1.0 - e) / (th * th));
            }
            total += std::polar(1.0, -w * taus[k]) * (c[k] * i0 + (c[k + 1] - c[k]) * i1);
        }
        out[iw] = 2.0 * total.real();
    }
    return out;
}

double relative_l2(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("relative_l2: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += (a[k] - b[k]) * (a[k] - b[k]);
        den += b[k] * b[k];
    }
    return std::sqrt(num / den);
}

double observed_frequency(const SpectrumCurve& curve, double resolution) {
    const auto& w = curve.omega;
    const auto& S = curve.S;
    if (w.size() < 3 || S.size() != w.size()) throw DimensionError("observed_frequency: need at least three samples");
    const auto [lo, hi] = std::minmax_element(S.begin(), S.end());
    if (*hi - *lo <= 1e-14 * std::max(std::abs(*hi), 1e-300)) throw DegenerateSpectrumError("flat spectrum: no maximum");
    std::size_t best = 0;
    for (std::size_t k = 1; k < S.size(); ++k) {
        const double tie = 1e-12 * std::abs(S[best]);
        if (S[k] > S[best] + tie || (std::abs(S[k] - S[best]) <= tie && std::abs(w[k]) < std::abs(w[best]))) best = k;
    }
    if (curve.modes.empty()) return w[best];
    double a = w[best > 0 ? best - 1 : best];
    double b = w[best + 1 < w.size() ? best + 1 : best];
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = curve.evaluate(x1), f2 = curve.evaluate(x2);
    while (b - a > resolution) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = curve.evaluate(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = curve.evaluate(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    return curve.evaluate(mid) >= S[best] ? mid : w[best];
}

Complex metastable_prefactor(const MetastableManifold& m) {
    const OperatorMatrix a = annihilation(m.dim());
    return expectation(m.sigma1, OperatorMatrix(a * m.rho_ss)) * expectation(a.adjoint(), m.rho1);
}

std::vector<Complex> metastable_correlation(const MetastableManifold& m, std::span<const double> taus) {
    const Complex A = metastable_prefactor(m);
    std::vector<Complex> out;
    out.reserve(taus.size());
    for (double t : taus) out.push_back(A * std::exp(-m.Gamma1 * t));
    return out;
}

SpectrumCurve metastable_spectrum(const MetastableManifold& m, std::span<const double> omegas) {
    std::vector<ModeAmplitude> modes{{metastable_prefactor(m), Complex{-m.Gamma1, 0.0}, -1, 1}};
    return spectrum_from_modes(std::move(modes), omegas);
}

} // namespace liouspec
