#include "liouspec/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "liouspec/errors.hpp"
#include "liouspec/parallel.hpp"

namespace liouspec {

double support_radius(const OperatorMatrix& rho) {
    const double n = expectation(number_operator(static_cast<int>(rho.rows())), rho).real();
    return 1.5 * (std::sqrt(std::max(n, 0.0)) + 2.0);
}

GridSpec default_grid(const OperatorMatrix& rho, int points) { return {support_radius(rho), points}; }

double WignerGrid::normalization() const { return W.sum() * cell_area; }

Complex WignerGrid::mean_alpha() const {
    Complex sum{};
    for (std::size_t i = 0; i < re_alpha.size(); ++i)
        for (std::size_t j = 0; j < im_alpha.size(); ++j)
            sum += W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * Complex{re_alpha[i], im_alpha[j]};
    return sum * cell_area;
}

OperatorMatrix displacement_matrix(Complex beta, int n_max) {
    OperatorMatrix d = OperatorMatrix::Zero(n_max, n_max);
    const long double r = std::abs(beta);
    if (r == 0.0L) return OperatorMatrix::Identity(n_max, n_max);
    const long double x = r * r;
    const long double log_r = std::log(r);
    const double theta = std::arg(beta);
    // For m = k + s >= n = k:
    //   D[m, n] = sqrt(k! / (k + s)!) beta^s e^{-x/2} L_k^{(s)}(x),  x = |beta|^2,
    // and D[n, m] is the same with beta^s replaced by (-conj(beta))^s. Long double
    // keeps e^{-x/2} and the Laguerre values in range for large |beta|.
    for (int s = 0; s < n_max; ++s) {
        const Complex lower = std::polar(1.0, s * theta);
        const Complex upper = std::polar(1.0, s * (std::numbers::pi - theta));
        long double prev = 0.0L, cur = 1.0L; // L_{-1}, L_0
        for (int k = 0; k + s < n_max; ++k) {
            if (k > 0) {
                const long double next = ((2.0L * (k - 1) + 1.0L + s - x) * cur - ((k - 1) + s) * prev) / k;
                prev = cur;
                cur = next;
            }
            const long double scale = std::exp(0.5L * (std::lgamma(k + 1.0L) - std::lgamma(k + s + 1.0L)) + s * log_r - 0.5L * x);
            const double v = static_cast<double>(scale * cur);
            d(k + s, k) = v * lower;
            if (s > 0) d(k, k + s) = v * upper;
        }
    }
    return d;
}

namespace {

// (2/pi) Tr[rho D(2 alpha) Pi]
Complex wigner_complex(const OperatorMatrix& rho, Complex alpha) {
    const int n = static_cast<int>(rho.rows());
    const OperatorMatrix d = displacement_matrix(2.0 * alpha, n);
    Complex sum{};
    for (int mp = 0; mp < n; ++mp) {
        Complex col{};
        for (int m = 0; m < n; ++m) col += rho(mp, m) * d(m, mp);
        sum += (mp % 2 == 0 ? 1.0 : -1.0) * col;
    }
    return sum * (2.0 / std::numbers::pi);
}

} // namespace

double wigner_at(const OperatorMatrix& rho, Complex alpha) { return wigner_complex(rho, alpha).real(); }

WignerGrid wigner(const OperatorMatrix& rho, const GridSpec& grid, int workers) {
    if (rho.rows() != rho.cols()) throw DimensionError("wigner: state must be square");
    if (grid.points < 2 || !(grid.radius > 0.0)) throw InvalidParameterError("wigner: need radius > 0 and points >= 2");
    WignerGrid w;
    const int n = grid.points;
    const double step = 2.0 * grid.radius / (n - 1);
    w.re_alpha.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w.re_alpha[k] = -grid.radius + step * k;
    w.im_alpha = w.re_alpha;
    w.cell_area = step * step;
    const double needed = support_radius(rho);
    if (grid.radius < needed) {
        w.degraded = true;
        std::clog << "liouspec: Wigner grid radius " << grid.radius << " below the support radius " << needed
                  << "; normalization may be degraded\n";
    }
    const auto columns = parallel_map(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
        std::vector<Complex> col(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) col[j] = wigner_complex(rho, Complex{w.re_alpha[i], w.im_alpha[j]});
        return col;
    });
    w.W.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            w.W(i, j) = columns[i][j].real();
            w.max_imag_residue = std::max(w.max_imag_residue, std::abs(columns[i][j].imag()));
        }
    return w;
}

std::vector<Lobe> lobe_extract(const WignerGrid& w, double rel_threshold) {
    std::vector<Lobe> out;
    const auto ni = w.W.rows(), nj = w.W.cols();
    if (ni < 3 || nj < 3) return out;
    const double floor = rel_threshold * w.W.maxCoeff();
    const double dx = w.re_alpha[1] - w.re_alpha[0];
    const double dy = w.im_alpha[1] - w.im_alpha[0];
    for (Eigen::Index i = 1; i + 1 < ni; ++i)
        for (Eigen::Index j = 1; j + 1 < nj; ++j) {
            const double f = w.W(i, j);
            if (f < floor) continue;
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const double g = w.W(i + di, j + dj);
                    // Plateaus: only the first cell in scan order counts.
                    if (g > f || (g == f && (di < 0 || (di == 0 && dj < 0)))) {
                        peak = false;
                        break;
                    }
                }
            if (!peak) continue;
            auto vertex = [](double a, double b, double c, double& height) {
                const double curv = a - 2.0 * b + c;
                if (curv >= 0.0) {
                    height = b;
                    return 0.0;
                }
                const double off = 0.5 * (a - c) / curv;
                height = b - 0.25 * (a - c) * off;
                return off;
            };
            double hx = f, hy = f;
            const double ox = vertex(w.W(i - 1, j), f, w.W(i + 1, j), hx);
            const double oy = vertex(w.W(i, j - 1), f, w.W(i, j + 1), hy);
            out.push_back({Complex{w.re_alpha[static_cast<std::size_t>(i)] + ox * dx,
                                   w.im_alpha[static_cast<std::size_t>(j)] + oy * dy},
                           std::max(hx, hy)});
        }
    std::sort(out.begin(), out.end(), [](const Lobe& a, const Lobe& b) { return a.height > b.height; });
    return out;
}

} // namespace liouspec
