#include "liouspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/LU>

#include "liouspec/errors.hpp"
#include "liouspec/parallel.hpp"

namespace liouspec {

namespace {

struct BlockEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right; // unit-norm columns
    Eigen::MatrixXcd left;  // unit-norm columns, left^H L = diag(values) left^H
};

BlockEigen lapack_eig(Eigen::MatrixXcd a, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    BlockEigen out;
    out.values.resize(n);
    if (vectors) {
        out.right.resize(n, n);
        out.left.resize(n, n);
    }
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', vectors ? 'V' : 'N', n, a.data(), n,
                                          out.values.data(), vectors ? out.left.data() : nullptr, n,
                                          vectors ? out.right.data() : nullptr, n);
    if (info != 0) throw Error("zgeev failed with info = " + std::to_string(info));
    return out;
}

// Index sets of the two coherence-parity sectors if L never couples them,
// otherwise a single sector with every index.
std::vector<std::vector<int>> sectors_of(const Superoperator& l, int dim) {
    const auto even = parity_sector_indices(dim, 0);
    const auto odd = parity_sector_indices(dim, 1);
    for (int r : even)
        for (int c : odd)
            if (l(r, c) != Complex{} || l(c, r) != Complex{}) {
                std::vector<int> all(static_cast<std::size_t>(l.rows()));
                std::iota(all.begin(), all.end(), 0);
                return {all};
            }
    return {even, odd};
}

Eigen::MatrixXcd sub_block(const Superoperator& l, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd b(k, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < k; ++r) b(r, c) = l(idx[r], idx[c]);
    return b;
}

// Sort by non-increasing real part; runs of real parts within tol are ordered
// by descending imaginary part.
std::vector<int> spectral_order(const Eigen::VectorXcd& values, double tol) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return values(x).real() > values(y).real(); });
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && values(order[end - 1]).real() - values(order[end]).real() <= tol) ++end;
        std::stable_sort(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end),
                         [&](int x, int y) { return values(x).imag() > values(y).imag(); });
        start = end;
    }
    return order;
}

// Rotates a matrix that is Hermitian up to a global phase back to Hermitian.
OperatorMatrix hermitian_gauge(const OperatorMatrix& x) {
    Eigen::Index r = 0, c = 0;
    x.cwiseAbs().maxCoeff(&r, &c);
    // For x = e^{i theta} H: x(r, c) x(c, r) = e^{2 i theta} |H(r, c)|^2.
    const double theta = 0.5 * std::arg(x(r, c) * x(c, r));
    const OperatorMatrix y = x * std::polar(1.0, -theta);
    return 0.5 * (y + y.adjoint());
}

double hermitian_trace_norm(const OperatorMatrix& h) { return hermitian_eigenvalues(h).cwiseAbs().sum(); }

} // namespace

std::vector<int> parity_sector_indices(int n_max, int parity) {
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n_max) * n_max / 2 + 1);
    for (int n = 0; n < n_max; ++n)
        for (int m = 0; m < n_max; ++m)
            if ((m + n) % 2 == parity) idx.push_back(n * n_max + m);
    return idx;
}

OperatorMatrix LiouvillianSpectrum::right_mode(int j) const { return devectorize(right.col(j)); }

OperatorMatrix LiouvillianSpectrum::left_mode(int j) const { return devectorize(left.col(j)); }

LiouvillianSpectrum eigendecompose(const Superoperator& l, const EigenOptions& opts) {
    const int dim = fock_dim_of(l);
    const Eigen::Index size = l.rows();
    const auto sectors = sectors_of(l, dim);
    const bool blocked = sectors.size() == 2;

    Eigen::VectorXcd values(size);
    Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(size, size);
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(size, size);
    std::vector<int> sector_parity(static_cast<std::size_t>(size), 0);
    Eigen::VectorXd normalizers(size);
    double min_normalizer = std::numeric_limits<double>::infinity();

    Eigen::Index offset = 0;
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const auto& idx = sectors[s];
        BlockEigen be = lapack_eig(sub_block(l, idx), true);
        const auto k = static_cast<Eigen::Index>(idx.size());
        for (Eigen::Index j = 0; j < k; ++j) {
            normalizers(offset + j) = std::abs(be.left.col(j).dot(be.right.col(j)));
            min_normalizer = std::min(min_normalizer, normalizers(offset + j));
        }
        // Enforce left^H right = I inside the block (also resolves degenerate clusters).
        const Eigen::MatrixXcd overlap = be.left.adjoint() * be.right;
        Eigen::MatrixXcd left_h = overlap.partialPivLu().solve(be.left.adjoint());
        // One Newton step on left_h * right = I; the overlap is ill conditioned at large n_max.
        Eigen::MatrixXcd resid = left_h * be.right;
        resid.diagonal().array() -= 1.0;
        left_h.noalias() -= resid * left_h;
        for (Eigen::Index j = 0; j < k; ++j) {
            values(offset + j) = be.values(j);
            for (Eigen::Index r = 0; r < k; ++r) {
                right(idx[r], offset + j) = be.right(r, j);
                left(idx[r], offset + j) = std::conj(left_h(j, r));
            }
            sector_parity[offset + j] = blocked ? (s == 0 ? 1 : -1) : 0;
        }
        offset += k;
    }
    if (min_normalizer < opts.defect_threshold) {
        std::ostringstream msg;
        msg << "near-defective eigenbasis: biorthogonal normalizer " << min_normalizer
            << " below " << opts.defect_threshold << " (exceptional point nearby)";
        throw NearDefectiveError(msg.str());
    }

    const auto order = spectral_order(values, opts.tie_tolerance);
    LiouvillianSpectrum out;
    out.n_max = dim;
    out.min_normalizer = min_normalizer;
    out.eigenvalues.resize(size);
    out.right.resize(size, size);
    out.left.resize(size, size);
    out.parity.resize(static_cast<std::size_t>(size));
    out.normalizers.resize(size);
    for (Eigen::Index j = 0; j < size; ++j) {
        out.eigenvalues(j) = values(order[j]);
        out.right.col(j) = right.col(order[j]);
        out.left.col(j) = left.col(order[j]);
        out.parity[j] = sector_parity[order[j]];
        out.normalizers(j) = normalizers(order[j]);
    }

    // Stationary state and its dual.
    {
        OperatorMatrix rho0 = out.right_mode(0);
        const Complex tr = rho0.trace();
        if (std::abs(tr) == 0.0) throw Error("zero mode has vanishing trace");
        rho0 /= tr;
        rho0 = 0.5 * (rho0 + rho0.adjoint());
        out.rho_ss = rho0;
        out.right.col(0) = vectorize(rho0);
        out.left.col(0) = vectorize(OperatorMatrix::Identity(dim, dim));
        out.eigenvalues(0) = Complex{out.eigenvalues(0).real(), 0.0};
    }

    std::vector<bool> done(static_cast<std::size_t>(size), false);
    for (Eigen::Index j = 1; j < size; ++j) {
        if (done[j]) continue;
        const Complex lambda = out.eigenvalues(j);
        OperatorMatrix rho = out.right_mode(j);
        OperatorMatrix sigma = out.left_mode(j);

        Eigen::Index partner = -1;
        if (lambda.imag() > opts.real_tolerance) {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = j + 1; k < size; ++k) {
                if (done[k] || out.parity[k] != out.parity[j]) continue;
                const double d = std::abs(out.eigenvalues(k) - std::conj(lambda));
                if (d < best) {
                    best = d;
                    partner = k;
                }
            }
            if (best > 1e-6 * std::max(1.0, std::abs(lambda))) partner = -1;
        }

        if (partner < 0 && std::abs(lambda.imag()) <= opts.real_tolerance) {
            const OperatorMatrix h = hermitian_gauge(rho);
            const double norm = hermitian_trace_norm(h);
            rho = h / norm;
            sigma = hermitian_gauge(sigma);
            sigma /= hs_inner(sigma, rho).real();
            out.eigenvalues(j) = Complex{lambda.real(), 0.0};
        } else {
            // Complex mode: unit trace norm, largest entry real positive.
            Eigen::Index r = 0, c = 0;
            rho.cwiseAbs().maxCoeff(&r, &c);
            const Complex phase = std::polar(1.0, -std::arg(rho(r, c)));
            const double norm = trace_norm(rho);
            rho *= phase / norm;
            sigma /= std::conj(hs_inner(sigma, rho));
            if (partner >= 0) {
                out.right.col(partner) = vectorize(OperatorMatrix(rho.adjoint()));
                out.left.col(partner) = vectorize(OperatorMatrix(sigma.adjoint()));
                out.eigenvalues(partner) = std::conj(lambda);
                done[partner] = true;
            }
        }
        out.right.col(j) = vectorize(rho);
        out.left.col(j) = vectorize(sigma);
        done[j] = true;
    }

    // Gauge fixing moved the left vectors off the inverse of the right basis
    // (ill-conditioned fast modes suffer most); one Newton step per parity
    // block restores left^H right = I without touching the right modes.
    if (blocked) {
        for (int par : {1, -1}) {
            std::vector<Eigen::Index> cols;
            for (Eigen::Index j = 0; j < size; ++j)
                if (out.parity[j] == par) cols.push_back(j);
            const auto& rows = sectors[par == 1 ? 0 : 1];
            const auto k = static_cast<Eigen::Index>(cols.size());
            Eigen::MatrixXcd lh(k, k), r(k, k);
            for (Eigen::Index c = 0; c < k; ++c)
                for (Eigen::Index q = 0; q < k; ++q) {
                    lh(c, q) = std::conj(out.left(rows[q], cols[c]));
                    r(q, c) = out.right(rows[q], cols[c]);
                }
            Eigen::MatrixXcd resid = lh * r;
            resid.diagonal().array() -= 1.0;
            lh.noalias() -= resid * lh;
            for (Eigen::Index c = 0; c < k; ++c)
                for (Eigen::Index q = 0; q < k; ++q) out.left(rows[q], cols[c]) = std::conj(lh(c, q));
        }
    } else {
        Eigen::MatrixXcd resid = out.left.adjoint() * out.right;
        resid.diagonal().array() -= 1.0;
        out.left.noalias() -= out.left * resid.adjoint();
    }

    // Sign of the slowest pair.
    if (size > 1 && std::abs(out.eigenvalues(1).imag()) <= opts.real_tolerance) {
        const OperatorMatrix sigma1 = out.left_mode(1);
        const Eigen::VectorXd c = hermitian_eigenvalues(sigma1);
        const double c_max = c.maxCoeff();
        const double c_min = c.minCoeff();
        const double scale = std::max(std::abs(c_max), std::abs(c_min));
        bool flip = false;
        if (std::abs(c_max + c_min) > 1e-6 * scale) {
            flip = c_max < -c_min;
        } else {
            const Complex amp = expectation(annihilation(dim), out.right_mode(1));
            const double a_scale = std::abs(amp);
            if (std::abs(amp.imag()) > 1e-9 * a_scale) {
                flip = amp.imag() < 0.0;
            } else {
                flip = amp.real() < 0.0;
            }
        }
        if (flip) {
            out.right.col(1) *= -1.0;
            out.left.col(1) *= -1.0;
        }
    }

    if (!blocked) {
        const Superoperator z2 = parity_superop(dim);
        for (Eigen::Index j = 0; j < size; ++j) {
            try {
                out.parity[j] = parity_of_mode(out.right_mode(j), z2);
            } catch (const MixedParityError&) {
                out.parity[j] = 0;
            }
        }
    }
    return out;
}

Eigen::VectorXcd liouvillian_eigenvalues(const Superoperator& l, const EigenOptions& opts) {
    const int dim = fock_dim_of(l);
    const auto sectors = sectors_of(l, dim);
    Eigen::VectorXcd values(l.rows());
    Eigen::Index offset = 0;
    for (const auto& idx : sectors) {
        const BlockEigen be = lapack_eig(sub_block(l, idx), false);
        values.segment(offset, be.values.size()) = be.values;
        offset += be.values.size();
    }
    const auto order = spectral_order(values, opts.tie_tolerance);
    Eigen::VectorXcd sorted(values.size());
    for (Eigen::Index j = 0; j < values.size(); ++j) sorted(j) = values(order[j]);
    return sorted;
}

OperatorMatrix steady_state(const Superoperator& l) {
    const int dim = fock_dim_of(l);
    const auto sectors = sectors_of(l, dim);
    // The stationary state lives in the even sector (or the only one).
    const auto& idx = sectors.front();
    Eigen::MatrixXcd a = sub_block(l, idx);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(k);
    // Replace the first equation by the trace condition.
    a.row(0).setZero();
    for (Eigen::Index c = 0; c < k; ++c) {
        const int m = idx[c] % dim;
        const int n = idx[c] / dim;
        if (m == n) a(0, c) = 1.0;
    }
    b(0) = 1.0;
    const Eigen::VectorXcd x = a.partialPivLu().solve(b);
    VectorizedOperator v = VectorizedOperator::Zero(l.rows());
    for (Eigen::Index c = 0; c < k; ++c) v(idx[c]) = x(c);
    OperatorMatrix rho = devectorize(v);
    return 0.5 * (rho + rho.adjoint());
}

DecayRate decay_rate(Complex lambda) { return {std::abs(lambda.real()), lambda.imag()}; }

std::vector<DecayRate> decay_rates(const LiouvillianSpectrum& s) {
    std::vector<DecayRate> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    for (int j = 0; j < s.size(); ++j) out.push_back(decay_rate(s.eigenvalue(j)));
    if (!out.empty()) out.front() = {0.0, 0.0};
    return out;
}

int parity_of_mode(const OperatorMatrix& rho_j, const Superoperator& z2, double tol) {
    const VectorizedOperator v = vectorize(rho_j);
    if (z2.rows() != v.size()) throw DimensionError("parity_of_mode: Z2 size does not match the mode");
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw MixedParityError("parity_of_mode: zero matrix has no parity");
    const VectorizedOperator zv = z2 * v;
    if ((zv - v).cwiseAbs().maxCoeff() / scale < tol) return +1;
    if ((zv + v).cwiseAbs().maxCoeff() / scale < tol) return -1;
    throw MixedParityError("mode mixes parity sectors (degenerate eigenvalues?)");
}

// ---- truncation ------------------------------------------------------------

namespace {

Complex slowest_of(const Eigen::VectorXcd& sorted) {
    if (sorted.size() < 2) throw Error("spectrum has fewer than two modes");
    return sorted(1);
}

} // namespace

Complex slowest_mode_eigenvalue(const ModelParams& p) {
    return slowest_of(liouvillian_eigenvalues(build_liouvillian(p)));
}

TruncationResult choose_truncation(const ModelParams& p, const TruncationPolicy& policy) {
    TruncationResult result;
    if (!policy.automatic) {
        result.n_max = policy.fixed;
        result.converged = false;
        return result;
    }
    if (policy.step < 1 || policy.start < 2 || policy.cap < policy.start) {
        throw InvalidParameterError("invalid truncation policy");
    }
    ModelParams q = p;
    std::optional<Complex> previous;
    for (int n = policy.start; n <= policy.cap; n += policy.step) {
        q.n_max = n;
        const Superoperator l = build_liouvillian(q);
        const Complex lambda1 = slowest_of(liouvillian_eigenvalues(l));
        const OperatorMatrix rho = steady_state(l);
        double top = 0.0;
        for (int k = std::max(0, n - policy.step); k < n; ++k) top += rho(k, k).real();
        result.n_max = n;
        result.lambda1 = lambda1;
        result.top_population = top;
        result.lambda1_change = previous ? std::abs(lambda1 - *previous) : std::numeric_limits<double>::infinity();
        if (previous && result.lambda1_change < policy.lambda_tol && top < policy.population_tol) {
            result.converged = true;
            return result;
        }
        previous = lambda1;
        if (n < policy.cap && n + policy.step > policy.cap) n = policy.cap - policy.step;
    }
    return result;
}

// ---- exceptional points ----------------------------------------------------

double find_exceptional_point(const ModelParams& base, double eta_lo, double eta_hi, const EpOptions& opts) {
    if (!(eta_lo >= 0.0) || !(eta_hi > eta_lo)) throw InvalidParameterError("eta range must satisfy 0 <= lo < hi");
    ModelParams q = base.normalized();
    auto complex_at = [&](double eta_ratio) {
        q.eta = eta_ratio;
        return std::abs(slowest_mode_eigenvalue(q).imag()) >= opts.imag_tolerance;
    };
    // Work in units of gamma1 and convert back at the end.
    double lo = eta_lo / base.gamma1;
    double hi = eta_hi / base.gamma1;
    const bool lo_complex = complex_at(lo);
    const bool hi_complex = complex_at(hi);
    if (!lo_complex || hi_complex) {
        std::ostringstream msg;
        msg << "no bracketing: Im lambda_1 is " << (lo_complex ? "nonzero" : "zero") << " at eta=" << eta_lo
            << " and " << (hi_complex ? "nonzero" : "zero") << " at eta=" << eta_hi;
        throw NoBracketError(msg.str());
    }
    for (int it = 0; it < opts.max_iterations && (hi - lo) > opts.relative_width * 0.5 * (hi + lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (complex_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) * base.gamma1;
}

// ---- gap maps --------------------------------------------------------------

double GapPoint::log10_gap_ratio() const {
    return gap_ratio > 0.0 ? std::log10(gap_ratio) : -std::numeric_limits<double>::infinity();
}

GapPoint gap_point(const ModelParams& p) {
    const ModelParams q = p.normalized();
    const Eigen::VectorXcd values = liouvillian_eigenvalues(build_liouvillian(q));
    if (values.size() < 3) throw Error("spectrum too small for a gap");
    GapPoint g;
    g.gamma2_ratio = q.gamma2;
    g.eta_ratio = q.eta;
    const DecayRate r1 = decay_rate(values(1));
    const DecayRate r2 = decay_rate(values(2));
    g.Gamma1 = r1.Gamma;
    g.Gamma2 = r2.Gamma;
    g.nu1 = r1.nu;
    g.nu2 = r2.nu;
    g.gap_ratio = g.Gamma2 > 0.0 ? g.Gamma1 / g.Gamma2 : std::numeric_limits<double>::quiet_NaN();
    g.n_max_used = q.n_max;
    return g;
}

GapMap gap_map(const GapMapRequest& req) {
    GapMap map;
    map.gamma2_ratios = req.gamma2_ratios;
    map.eta_ratios = req.eta_ratios;
    const std::size_t ny = req.eta_ratios.size();
    const std::size_t total = req.gamma2_ratios.size() * ny;
    map.points = parallel_map(total, req.workers, [&](std::size_t k) {
        GapPoint g;
        g.gamma2_ratio = req.gamma2_ratios[k / ny];
        g.eta_ratio = req.eta_ratios[k % ny];
        try {
            ModelParams p;
            p.gamma1 = 1.0;
            p.gamma2 = g.gamma2_ratio;
            p.eta = g.eta_ratio;
            p.delta = req.delta_ratio;
            p.n_max = choose_truncation(p, req.truncation).n_max;
            g = gap_point(p);
        } catch (const std::exception& e) {
            g.error = e.what();
            g.gap_ratio = std::numeric_limits<double>::quiet_NaN();
        }
        return g;
    });
    std::vector<double> field(total);
    for (std::size_t k = 0; k < total; ++k) {
        const auto& g = map.points[k];
        field[k] = g.error ? std::numeric_limits<double>::quiet_NaN() : g.log10_gap_ratio();
    }
    // Gamma1 = Gamma2 holds to rounding below the exceptional point; the
    // boundary of that plateau is traced just under log10(1).
    map.contours.push_back({1.0, extract_contour(map.gamma2_ratios, map.eta_ratios, field, std::log10(1.0 - 1e-6))});
    map.contours.push_back({0.1, extract_contour(map.gamma2_ratios, map.eta_ratios, field, -1.0)});
    return map;
}

std::vector<Polyline> extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const std::vector<double>& values, double level) {
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    if (values.size() != nx * ny) throw DimensionError("extract_contour: values do not match the lattice");
    using Point = std::pair<double, double>;
    std::vector<std::pair<Point, Point>> segments;
    auto at = [&](std::size_t i, std::size_t j) { return values[i * ny + j]; };
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            // Corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
            const std::size_t ci[4] = {i, i + 1, i + 1, i};
            const std::size_t cj[4] = {j, j, j + 1, j + 1};
            double v[4];
            bool skip = false;
            for (int c = 0; c < 4; ++c) {
                v[c] = at(ci[c], cj[c]);
                if (std::isnan(v[c])) skip = true;
            }
            if (skip) continue;
            std::vector<Point> crossings;
            for (int e = 0; e < 4; ++e) {
                const int a = e;
                const int b = (e + 1) % 4;
                const bool above_a = v[a] >= level;
                const bool above_b = v[b] >= level;
                if (above_a == above_b) continue;
                const double t = (level - v[a]) / (v[b] - v[a]);
                crossings.emplace_back(xs[ci[a]] + t * (xs[ci[b]] - xs[ci[a]]), ys[cj[a]] + t * (ys[cj[b]] - ys[cj[a]]));
            }
            if (crossings.size() == 2) {
                segments.emplace_back(crossings[0], crossings[1]);
            } else if (crossings.size() == 4) {
                // Saddle: resolve with the cell-centre value.
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                if ((centre >= level) == (v[0] >= level)) {
                    segments.emplace_back(crossings[0], crossings[3]);
                    segments.emplace_back(crossings[1], crossings[2]);
                } else {
                    segments.emplace_back(crossings[0], crossings[1]);
                    segments.emplace_back(crossings[2], crossings[3]);
                }
            }
        }
    }
    // Greedy chaining of segments that share endpoints.
    auto close = [](const Point& a, const Point& b) {
        return std::abs(a.first - b.first) <= 1e-12 * (1.0 + std::abs(a.first)) &&
               std::abs(a.second - b.second) <= 1e-12 * (1.0 + std::abs(a.second));
    };
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> lines;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<Point> pts{segments[s].first, segments[s].second};
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t t = 0; t < segments.size(); ++t) {
                if (used[t]) continue;
                const auto& [a, b] = segments[t];
                if (close(pts.back(), a)) {
                    pts.push_back(b);
                } else if (close(pts.back(), b)) {
                    pts.push_back(a);
                } else if (close(pts.front(), b)) {
                    pts.insert(pts.begin(), a);
                } else if (close(pts.front(), a)) {
                    pts.insert(pts.begin(), b);
                } else {
                    continue;
                }
                used[t] = true;
                grew = true;
            }
        }
        lines.push_back({std::move(pts)});
    }
    return lines;
}

} // namespace liouspec
