// fockspace.hpp: truncated Fock-basis operators and operator <-> vector plumbing.
//
// Vectorization convention (project-wide): column stacking. Entry (m, n) of a
// dim x dim operator lives at index n * dim + m of its vectorized form, so
// vec(A X B) = (B^T kron A) vec(X).
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace liouspec {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using VectorizedOperator = Eigen::VectorXcd;
using Superoperator = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

OperatorMatrix annihilation(int n_max);
OperatorMatrix creation(int n_max);
OperatorMatrix number_operator(int n_max);
OperatorMatrix identity_operator(int n_max);
// |m><n|
OperatorMatrix ket_bra(int m, int n, int n_max);

VectorizedOperator vectorize(const OperatorMatrix& a);
OperatorMatrix devectorize(const VectorizedOperator& v);

// X -> A X
Superoperator left_multiply_superop(const OperatorMatrix& a);
// X -> X A
Superoperator right_multiply_superop(const OperatorMatrix& a);
Superoperator kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Superoperator dimension dim^2 -> Fock dimension dim.
int fock_dim_of(const Superoperator& s);

double max_abs(const Eigen::MatrixXcd& a);
// max |A - A^dagger|
double hermiticity_residual(const OperatorMatrix& a);
bool is_hermitian(const OperatorMatrix& a, double tol = 1e-10);
// Tr[op rho]
Complex expectation(const OperatorMatrix& op, const OperatorMatrix& rho);
// Hilbert-Schmidt product Tr[B^dagger A]
Complex hs_inner(const OperatorMatrix& b, const OperatorMatrix& a);
// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd hermitian_eigenvalues(const OperatorMatrix& a);
// Sum of singular values.
double trace_norm(const OperatorMatrix& a);

struct StateTolerances {
    double herm = 1e-10;
    double trace = 1e-10;
    double pos = 1e-8;
};

// An operator that passed the physical-state checks: Hermitian, unit trace,
// minimum eigenvalue >= -tol.pos.
class DensityMatrix {
public:
    explicit DensityMatrix(OperatorMatrix rho, StateTolerances tol = {});

    const OperatorMatrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    double min_eigenvalue() const { return min_eigenvalue_; }
    double purity() const;
    double mean_number() const;

private:
    OperatorMatrix rho_;
    double min_eigenvalue_ = 0.0;
};

} // namespace liouspec
