#include <doctest.h>

#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "liouspec/evolution.hpp"
#include "liouspec/phasespace.hpp"

using namespace liouspec;

TEST_CASE("displacement matrix elements match a large truncated exponential") {
    const int big = 90, n = 12;
    const OperatorMatrix a = annihilation(big);
    for (Complex beta : {Complex(1.2, -0.4), Complex(-0.3, 1.9)}) {
        const OperatorMatrix gen = beta * a.adjoint() - std::conj(beta) * a;
        const OperatorMatrix d_big = gen.exp();
        CHECK(max_abs(displacement_matrix(beta, n) - d_big.topLeftCorner(n, n)) < 1e-12);
    }
    CHECK(max_abs(displacement_matrix(0.0, 5) - identity_operator(5)) == 0.0);
}

TEST_CASE("displacement stays accurate at large amplitude") {
    // |<0|D(beta)|0>| = e^{-|beta|^2/2}; <1|D|0> = beta e^{-|beta|^2/2}.
    const Complex beta{4.0, 3.0};
    const OperatorMatrix d = displacement_matrix(beta, 90);
    CHECK(std::abs(d(0, 0)) == doctest::Approx(std::exp(-12.5)).epsilon(1e-10));
    CHECK(std::abs(d(1, 0) - beta * std::exp(-12.5)) < 1e-16);
    // Columns of a unitary have unit norm where truncation is invisible.
    CHECK(d.col(0).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Wigner function of simple states") {
    const double two_over_pi = 2.0 / std::numbers::pi;
    CHECK(wigner_at(ket_bra(0, 0, 8), 0.0) == doctest::Approx(two_over_pi));
    CHECK(wigner_at(ket_bra(1, 1, 8), 0.0) == doctest::Approx(-two_over_pi));
    const Complex beta{0.7, -0.5};
    const DensityMatrix coh = coherent_state(beta, 30);
    for (Complex alpha : {Complex(0.0), Complex(0.7, -0.5), Complex(1.0, 0.3)})
        CHECK(wigner_at(coh.matrix(), alpha) == doctest::Approx(two_over_pi * std::exp(-2.0 * std::norm(alpha - beta))).epsilon(1e-9));
}

TEST_CASE("grid normalization, moments and residue") {
    const Complex beta{1.0, 0.8};
    const DensityMatrix coh = coherent_state(beta, 30);
    const WignerGrid w = wigner(coh.matrix(), default_grid(coh.matrix(), 81), 2);
    CHECK(!w.degraded);
    CHECK(w.normalization() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(w.mean_alpha() - beta) < 0.02 * std::abs(beta));
    CHECK(w.max_imag_residue < 1e-10);
    CHECK(support_radius(coh.matrix()) == doctest::Approx(1.5 * (std::abs(beta) + 2.0)).epsilon(1e-6));
    const WignerGrid small = wigner(coh.matrix(), GridSpec{1.0, 11});
    CHECK(small.degraded);
}

TEST_CASE("lobes of a two-peaked mixture") {
    const Complex beta{0.4, 1.6};
    const int n = 30;
    const OperatorMatrix mix = 0.5 * (coherent_state(beta, n).matrix() + coherent_state(-beta, n).matrix());
    const WignerGrid w = wigner(mix, GridSpec{4.0, 81});
    const auto lobes = lobe_extract(w);
    REQUIRE(lobes.size() == 2);
    const bool first_plus = std::abs(lobes[0].location - beta) < std::abs(lobes[0].location + beta);
    CHECK(std::abs(lobes[0].location - (first_plus ? beta : -beta)) < 0.02);
    CHECK(std::abs(lobes[1].location - (first_plus ? -beta : beta)) < 0.02);
    CHECK(lobes[0].height == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-2));
}
