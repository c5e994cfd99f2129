#include <doctest.h>

#include <random>

#include "liouspec/errors.hpp"
#include "liouspec/liouvillian.hpp"

using namespace liouspec;

namespace {

ModelParams params(double g2, double eta, int n) {
    ModelParams p;
    p.gamma2 = g2;
    p.eta = eta;
    p.delta = 0.1;
    p.n_max = n;
    return p;
}

// The master equation written out with matrix products only.
OperatorMatrix apply_directly(const ModelParams& p, const OperatorMatrix& x) {
    const int n = p.n_max;
    const OperatorMatrix a = annihilation(n), ad = creation(n);
    const OperatorMatrix h = p.delta * ad * a + kI * p.eta * (a * a - ad * ad);
    auto d = [&](const OperatorMatrix& l) {
        const OperatorMatrix ld = l.adjoint();
        return OperatorMatrix(2.0 * l * x * ld - ld * l * x - x * ld * l);
    };
    return -kI * (h * x - x * h) + 0.5 * p.gamma1 * d(ad) + 0.5 * p.gamma2 * d(a * a);
}

OperatorMatrix random_operator(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    OperatorMatrix x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = {g(rng), g(rng)};
    return x;
}

} // namespace

TEST_CASE("superoperator matches the master equation on random inputs") {
    for (auto [g2, eta] : {std::pair{1.0, 0.75}, {0.1, 0.2}, {0.0, 0.0}}) {
        const ModelParams p = params(g2, eta, 8);
        const Superoperator l = build_liouvillian(p);
        for (int s = 0; s < 3; ++s) {
            const OperatorMatrix x = random_operator(8, 10 + s);
            CHECK(max_abs(devectorize(l * vectorize(x)) - apply_directly(p, x)) < 1e-11);
        }
    }
}

TEST_CASE("trace and Hermiticity preservation, parity symmetry") {
    const ModelParams p = params(0.7, 0.4, 10);
    const Superoperator l = build_liouvillian(p);
    const VectorizedOperator id = vectorize(identity_operator(10));
    CHECK((id.adjoint() * l).cwiseAbs().maxCoeff() < 1e-12);
    const OperatorMatrix x = random_operator(10, 3);
    const OperatorMatrix lx = devectorize(l * vectorize(x));
    const OperatorMatrix lxd = devectorize(l * vectorize(OperatorMatrix(x.adjoint())));
    CHECK(max_abs(lxd - lx.adjoint()) < 1e-11);
    const Superoperator z = parity_superop(10);
    CHECK(max_abs(z * l - l * z) < 1e-12);
    // Z2 |1><1| = |1><1|, Z2 |1><0| = -|1><0|
    CHECK(devectorize(z * vectorize(ket_bra(1, 1, 10)))(1, 1) == Complex(1.0));
    CHECK(devectorize(z * vectorize(ket_bra(1, 0, 10)))(1, 0) == Complex(-1.0));
}

TEST_CASE("rates scale with gamma1") {
    ModelParams p = params(0.5, 0.3, 6);
    p.gamma1 = 2.0;
    p.gamma2 = 1.0;
    p.eta = 0.6;
    p.delta = 0.2;
    const ModelParams q = p.normalized();
    CHECK(q.gamma1 == 1.0);
    CHECK(q.gamma2 == doctest::Approx(0.5));
    CHECK(q.eta == doctest::Approx(0.3));
    CHECK(q.delta == doctest::Approx(0.1));
    // Built in units of gamma1, so both describe the same generator.
    CHECK(max_abs(build_liouvillian(p) - build_liouvillian(params(0.5, 0.3, 6))) < 1e-14);
}

TEST_CASE("dissipator of the vacuum under pure loss") {
    // (1/2) D[a] on |1><1| gives |0><0| - |1><1|.
    const OperatorMatrix a = annihilation(4);
    const OperatorMatrix out = devectorize(0.5 * dissipator(a) * vectorize(ket_bra(1, 1, 4)));
    CHECK(out(0, 0).real() == doctest::Approx(1.0));
    CHECK(out(1, 1).real() == doctest::Approx(-1.0));
}

TEST_CASE("parameter validation") {
    ModelParams p = params(0.1, 0.2, 10);
    CHECK_NOTHROW(p.validate());
    p.gamma2 = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
    p = params(0.1, 0.2, 1);
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
    p = params(0.1, std::nan(""), 10);
    CHECK_THROWS_AS(build_liouvillian(p), InvalidParameterError);
    CHECK_THROWS_AS(dissipator(OperatorMatrix(2, 3)), DimensionError);
}
