// liouvillian.hpp: squeezed quantum van der Pol generator in the frame rotating at omega_s.
#pragma once

#include <string>

#include "liouspec/fockspace.hpp"

namespace liouspec {

// One system instance. All rates are angular frequencies in the user's units;
// the generator is built in units of gamma1 (see normalized()).
struct ModelParams {
    double gamma1 = 1.0;  // linear amplification
    double gamma2 = 0.1;  // nonlinear (two-boson) damping
    double eta = 0.0;     // squeezing strength
    double delta = 0.1;   // detuning omega_0 - omega_s
    double omega_s = 0.0; // forcing half-frequency, lab frame only
    int n_max = 20;       // Fock truncation

    void validate() const;
    // Copy with gamma1 = 1 and every other rate divided by gamma1.
    ModelParams normalized() const;
    std::string describe() const;
};

// Delta a^dagger a + i eta (a^2 - a^dagger^2), in units of gamma1.
OperatorMatrix hamiltonian_rotating(const ModelParams& p);

// D[L]X = 2 L X L^dagger - L^dagger L X - X L^dagger L
Superoperator dissipator(const OperatorMatrix& l);

// L rho = -i[H, rho] + (1/2) D[a^dagger] rho + (gamma2/2) D[a^2] rho, units of gamma1.
// omega_s never enters.
Superoperator build_liouvillian(const ModelParams& p);

// e^{i pi a^dagger a}
OperatorMatrix parity_operator(int n_max);
// Z2 X = P X P^dagger with P = e^{i pi a^dagger a}
Superoperator parity_superop(int n_max);

} // namespace liouspec
