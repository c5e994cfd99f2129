// phasespace.hpp: Wigner distributions on a square phase-space grid.
#pragma once

#include <vector>

#include "liouspec/fockspace.hpp"

namespace liouspec {

struct GridSpec {
    double radius = 3.0;
    int points = 161;
};

// Radius 1.5 (sqrt(<n>) + 2).
double support_radius(const OperatorMatrix& rho);
GridSpec default_grid(const OperatorMatrix& rho, int points = 161);

struct WignerGrid {
    std::vector<double> re_alpha;
    std::vector<double> im_alpha;
    Eigen::MatrixXd W; // W(i, j) at alpha = re_alpha[i] + i im_alpha[j]
    double cell_area = 0.0;
    double max_imag_residue = 0.0;
    bool degraded = false; // grid smaller than the state's support radius

    double normalization() const;
    Complex mean_alpha() const;
};

// Exact truncated matrix elements <m|D(beta)|n>, 0 <= m, n < n_max.
OperatorMatrix displacement_matrix(Complex beta, int n_max);

// W(alpha) = (2/pi) Tr[rho D(alpha) Pi D(alpha)^dagger] with Pi the parity.
double wigner_at(const OperatorMatrix& rho, Complex alpha);
WignerGrid wigner(const OperatorMatrix& rho, const GridSpec& grid, int workers = 1);

struct Lobe {
    Complex location;
    double height = 0.0;
};

// Local maxima above rel_threshold * max W, highest first, refined by a
// quadratic fit over the 3x3 neighbourhood.
std::vector<Lobe> lobe_extract(const WignerGrid& w, double rel_threshold = 0.1);

} // namespace liouspec
