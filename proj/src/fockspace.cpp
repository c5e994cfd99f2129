#include "liouspec/fockspace.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "liouspec/errors.hpp"

namespace liouspec {

namespace {

void require_dim(int n_max) {
    if (n_max < 2) {
        throw DimensionError("Fock truncation must be >= 2, got " + std::to_string(n_max));
    }
}

void require_square(const Eigen::MatrixXcd& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw DimensionError(msg.str());
    }
}

} // namespace

OperatorMatrix annihilation(int n_max) {
    require_dim(n_max);
    OperatorMatrix a = OperatorMatrix::Zero(n_max, n_max);
    for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

OperatorMatrix creation(int n_max) { return annihilation(n_max).adjoint(); }

OperatorMatrix number_operator(int n_max) {
    require_dim(n_max);
    OperatorMatrix n = OperatorMatrix::Zero(n_max, n_max);
    for (int k = 0; k < n_max; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

OperatorMatrix identity_operator(int n_max) {
    require_dim(n_max);
    return OperatorMatrix::Identity(n_max, n_max);
}

OperatorMatrix ket_bra(int m, int n, int n_max) {
    require_dim(n_max);
    if (m < 0 || n < 0 || m >= n_max || n >= n_max) throw DimensionError("ket_bra: Fock index out of range");
    OperatorMatrix x = OperatorMatrix::Zero(n_max, n_max);
    x(m, n) = 1.0;
    return x;
}

VectorizedOperator vectorize(const OperatorMatrix& a) {
    require_square(a, "vectorize");
    // Eigen storage is column-major, which is exactly column stacking.
    return Eigen::Map<const VectorizedOperator>(a.data(), a.size());
}

OperatorMatrix devectorize(const VectorizedOperator& v) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (dim == 0 || dim * dim != v.size()) {
        throw DimensionError("devectorize: length " + std::to_string(v.size()) + " is not a perfect square");
    }
    return Eigen::Map<const OperatorMatrix>(v.data(), dim, dim);
}

Superoperator kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Superoperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Superoperator left_multiply_superop(const OperatorMatrix& a) {
    require_square(a, "left_multiply_superop");
    return kron(OperatorMatrix::Identity(a.rows(), a.rows()), a);
}

Superoperator right_multiply_superop(const OperatorMatrix& a) {
    require_square(a, "right_multiply_superop");
    return kron(a.transpose(), OperatorMatrix::Identity(a.rows(), a.rows()));
}

int fock_dim_of(const Superoperator& s) {
    if (s.rows() != s.cols()) throw DimensionError("superoperator is not square");
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
    if (dim < 2 || dim * dim != s.rows()) throw DimensionError("superoperator size is not dim^2");
    return static_cast<int>(dim);
}

double max_abs(const Eigen::MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const OperatorMatrix& a) {
    require_square(a, "hermiticity_residual");
    return max_abs(a - a.adjoint());
}

bool is_hermitian(const OperatorMatrix& a, double tol) { return hermiticity_residual(a) <= tol; }

Complex expectation(const OperatorMatrix& op, const OperatorMatrix& rho) {
    if (op.rows() != rho.cols() || op.cols() != rho.rows()) throw DimensionError("expectation: shape mismatch");
    // Tr[op rho] = sum_ij op_ij rho_ji
    return (op.transpose().cwiseProduct(rho)).sum();
}

Complex hs_inner(const OperatorMatrix& b, const OperatorMatrix& a) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
    return (b.conjugate().cwiseProduct(a)).sum();
}

Eigen::VectorXd hermitian_eigenvalues(const OperatorMatrix& a) {
    require_square(a, "hermitian_eigenvalues");
    const OperatorMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double trace_norm(const OperatorMatrix& a) {
    Eigen::BDCSVD<OperatorMatrix> svd(a);
    return svd.singularValues().sum();
}

DensityMatrix::DensityMatrix(OperatorMatrix rho, StateTolerances tol) : rho_(std::move(rho)) {
    require_square(rho_, "DensityMatrix");
    if (rho_.rows() < 2) throw DimensionError("DensityMatrix: dimension must be >= 2");
    const double herm = hermiticity_residual(rho_);
    if (herm > tol.herm) {
        throw InvalidStateError("state is not Hermitian (residual " + std::to_string(herm) + ")");
    }
    const Complex tr = rho_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream msg;
        msg << "state trace is " << tr << ", expected 1";
        throw InvalidStateError(msg.str());
    }
    min_eigenvalue_ = hermitian_eigenvalues(rho_).minCoeff();
    if (min_eigenvalue_ < -tol.pos) {
        throw InvalidStateError("state has negative eigenvalue " + std::to_string(min_eigenvalue_));
    }
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::mean_number() const { return expectation(number_operator(dim()), rho_).real(); }

} // namespace liouspec
