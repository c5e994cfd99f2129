#include "liouspec/liouvillian.hpp"

#include <cmath>
#include <sstream>

#include "liouspec/errors.hpp"

namespace liouspec {

void ModelParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(gamma1) || gamma1 <= 0.0) throw InvalidParameterError("gamma1 must be > 0");
    if (!finite(gamma2) || gamma2 < 0.0) throw InvalidParameterError("gamma2 must be >= 0");
    if (!finite(eta) || eta < 0.0) throw InvalidParameterError("eta must be >= 0");
    if (!finite(delta)) throw InvalidParameterError("delta must be finite");
    if (!finite(omega_s) || omega_s < 0.0) throw InvalidParameterError("omega_s must be >= 0");
    if (n_max < 2) throw InvalidParameterError("n_max must be >= 2");
}

ModelParams ModelParams::normalized() const {
    validate();
    ModelParams q = *this;
    q.gamma1 = 1.0;
    q.gamma2 = gamma2 / gamma1;
    q.eta = eta / gamma1;
    q.delta = delta / gamma1;
    q.omega_s = omega_s / gamma1;
    return q;
}

std::string ModelParams::describe() const {
    std::ostringstream s;
    s << "gamma1=" << gamma1 << " gamma2=" << gamma2 << " eta=" << eta << " delta=" << delta
      << " omega_s=" << omega_s << " n_max=" << n_max;
    return s.str();
}

OperatorMatrix hamiltonian_rotating(const ModelParams& p) {
    const ModelParams q = p.normalized();
    const OperatorMatrix a = annihilation(q.n_max);
    const OperatorMatrix ad = a.adjoint();
    return q.delta * (ad * a) + kI * q.eta * (a * a - ad * ad);
}

Superoperator dissipator(const OperatorMatrix& l) {
    if (l.rows() != l.cols() || l.rows() == 0) throw DimensionError("dissipator: jump operator must be square");
    const OperatorMatrix ldl = l.adjoint() * l;
    // vec(L X L^dagger) = (conj(L) kron L) vec(X)
    return 2.0 * kron(l.conjugate(), l) - left_multiply_superop(ldl) - right_multiply_superop(ldl);
}

Superoperator build_liouvillian(const ModelParams& p) {
    const ModelParams q = p.normalized();
    const OperatorMatrix h = hamiltonian_rotating(q);
    const OperatorMatrix a = annihilation(q.n_max);
    Superoperator l = -kI * (left_multiply_superop(h) - right_multiply_superop(h));
    l += 0.5 * dissipator(a.adjoint());
    if (q.gamma2 != 0.0) l += (0.5 * q.gamma2) * dissipator(a * a);
    return l;
}

OperatorMatrix parity_operator(int n_max) {
    if (n_max < 2) throw DimensionError("parity_operator: n_max must be >= 2");
    OperatorMatrix p = OperatorMatrix::Zero(n_max, n_max);
    for (int n = 0; n < n_max; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

Superoperator parity_superop(int n_max) {
    if (n_max < 2) throw DimensionError("parity_superop: n_max must be >= 2");
    // P |m><n| P^dagger = (-1)^{m+n} |m><n|, diagonal in the vectorized basis.
    const Eigen::Index size = static_cast<Eigen::Index>(n_max) * n_max;
    Superoperator z = Superoperator::Zero(size, size);
    for (int n = 0; n < n_max; ++n)
        for (int m = 0; m < n_max; ++m) z(n * n_max + m, n * n_max + m) = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    return z;
}

} // namespace liouspec
