#include <doctest.h>

#include <random>

#include "liouspec/errors.hpp"
#include "liouspec/fockspace.hpp"

using namespace liouspec;

namespace {

OperatorMatrix random_operator(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    OperatorMatrix x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = {g(rng), g(rng)};
    return x;
}

} // namespace

TEST_CASE("ladder operators act on number states") {
    const int n = 6;
    const OperatorMatrix a = annihilation(n);
    for (int k = 1; k < n; ++k) CHECK(a(k - 1, k).real() == doctest::Approx(std::sqrt(double(k))));
    CHECK(max_abs(creation(n) - a.adjoint()) == 0.0);
    const OperatorMatrix comm = a * creation(n) - creation(n) * a;
    for (int k = 0; k + 1 < n; ++k) CHECK(comm(k, k).real() == doctest::Approx(1.0));
    // Truncation edge.
    CHECK(comm(n - 1, n - 1).real() == doctest::Approx(1.0 - n));
    CHECK(max_abs(number_operator(n) - creation(n) * a) < 1e-14);
}

TEST_CASE("column stacking round trip and Kronecker identity") {
    const int n = 4;
    const OperatorMatrix x = random_operator(n, 1);
    const VectorizedOperator v = vectorize(x);
    CHECK(v(1) == x(1, 0));
    CHECK(v(n) == x(0, 1));
    CHECK(max_abs(devectorize(v) - x) == 0.0);

    const OperatorMatrix a = random_operator(n, 2), b = random_operator(n, 3);
    const VectorizedOperator lhs = vectorize(a * x * b);
    const VectorizedOperator rhs = kron(b.transpose(), a) * v;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(devectorize(left_multiply_superop(a) * v) - a * x) < 1e-12);
    CHECK(max_abs(devectorize(right_multiply_superop(b) * v) - x * b) < 1e-12);
    CHECK(fock_dim_of(kron(a, b)) == n);
}

TEST_CASE("ket_bra and traces") {
    const OperatorMatrix k = ket_bra(2, 1, 4);
    CHECK(k(2, 1) == Complex(1.0));
    CHECK(k.cwiseAbs().sum() == 1.0);
    const OperatorMatrix x = random_operator(3, 4), y = random_operator(3, 5);
    CHECK(std::abs(hs_inner(y, x) - (y.adjoint() * x).trace()) < 1e-12);
    CHECK(std::abs(expectation(x, y) - (x * y).trace()) < 1e-12);
}

TEST_CASE("trace norm and Hermitian eigenvalues") {
    OperatorMatrix d = OperatorMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    d(2, 2) = 0.5;
    CHECK(trace_norm(d) == doctest::Approx(3.5));
    const Eigen::VectorXd ev = hermitian_eigenvalues(d);
    CHECK(ev(0) == doctest::Approx(-2.0));
    CHECK(ev(2) == doctest::Approx(1.0));
    // Unitary invariance.
    const Eigen::HouseholderQR<OperatorMatrix> qr(random_operator(3, 6));
    const OperatorMatrix u = qr.householderQ();
    CHECK(trace_norm(u * d * u.adjoint()) == doctest::Approx(3.5));
    CHECK(hermiticity_residual(u * d * u.adjoint()) < 1e-12);
}

TEST_CASE("density matrix checks") {
    OperatorMatrix rho = OperatorMatrix::Zero(2, 2);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.75;
    const DensityMatrix ok(rho);
    CHECK(ok.purity() == doctest::Approx(0.625));
    CHECK(ok.mean_number() == doctest::Approx(0.75));

    OperatorMatrix bad_trace = rho * 2.0;
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, InvalidStateError);
    OperatorMatrix negative = rho;
    negative(0, 0) = -0.25;
    negative(1, 1) = 1.25;
    CHECK_THROWS_AS(DensityMatrix{negative}, InvalidStateError);
    OperatorMatrix skew = rho;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{skew}, InvalidStateError);
}
