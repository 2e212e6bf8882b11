// lindblad.hpp - Single-atom Hamiltonian, Lindblad generator and steady state
// for the driven three-level Delta system.

#pragma once

#include <stdexcept>

#include "ramanup/linalg.hpp"

namespace ramanup {

// Drive parameters of one atom, all angular frequencies in rad/s.
// delta2: microwave (spin) detuning, coefficient of |2><2|.
// delta3: two-photon optical detuning, coefficient of |3><3|.
// omega_mu / omega_xi: microwave and optical Rabi frequencies, the
// coefficients of (sigma_12 + sigma_21) and (sigma_23 + sigma_32).
struct AtomDrive {
    double delta2 = 0.0;
    double delta3 = 0.0;
    double omega_mu = 0.0;
    double omega_xi = 0.0;
};

// Dissipation rates in 1/s plus the mean thermal occupation of the
// microwave bath (dimensionless).
struct RelaxationRates {
    double gamma31 = 0.0;  // spontaneous emission |3> -> |1>
    double gamma32 = 0.0;  // spontaneous emission |3> -> |2>
    double gamma21 = 0.0;  // spin-lattice relaxation |2> -> |1>
    double gamma2d = 0.0;  // pure dephasing of |2>
    double gamma3d = 0.0;  // pure dephasing of |3>
    double n_bath = 0.0;   // mean bath quanta at the spin frequency
};

// 9x9 generator acting on the column-major vectorization of the density
// matrix: d/dt vec(rho) = matrix * vec(rho).
struct Liouvillian {
    Matrix9c matrix = Matrix9c::Zero();

    Matrix3c apply(const Matrix3c& rho) const
    {
        return unvectorize(matrix * vectorize(rho));
    }
};

struct NonUniqueSteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mean bath quanta (exp(h f / k T) - 1)^-1; returns 0 at T = 0.
// Throws std::invalid_argument for non-positive frequency or negative T.
double thermal_occupation(double frequency_hz, double temperature_k);

// H = delta2 s22 + delta3 s33 + omega_mu (s12 + s21) + omega_xi (s23 + s32).
Matrix3c build_hamiltonian(const AtomDrive& drive);

// Generator of  d rho/dt = -i [rho, H] + sum_k D[c_k] rho  with
// D[c] rho = c rho c† - 1/2 {c†c, rho} and collapse operators
//   sqrt(g31) |1><3|,  sqrt(g32) |2><3|            (spontaneous emission)
//   sqrt(g21 (Nb+1)) |1><2|, sqrt(g21 Nb) |2><1|   (thermal spin flips)
//   sqrt(g2d) |2><2|,  sqrt(g3d) |3><3|            (pure dephasing)
// Throws std::invalid_argument if H is not Hermitian or rates are negative.
Liouvillian build_liouvillian(const Matrix3c& hamiltonian, const RelaxationRates& rates);

inline Liouvillian build_liouvillian(const AtomDrive& drive, const RelaxationRates& rates)
{
    return build_liouvillian(build_hamiltonian(drive), rates);
}

// Unique trace-one steady state of the generator. The null-space dimension is
// verified through the singular spectrum (second-smallest singular value must
// exceed 1e-8 of the largest); a degenerate kernel raises
// NonUniqueSteadyStateError. The result is Hermitian with unit trace.
Matrix3c steady_state(const Liouvillian& gen);

// The coherence <3| rho_ss |1> that sources the up-converted signal.
inline Complex rho31(const Matrix3c& rho) { return rho(2, 0); }

struct EvolveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    std::size_t max_steps = 400000000;  // hard cap; exceeding it raises IntegrationFailure
    // Stop integrating once the state is certified stationary: the distance to
    // the fixed point is bounded by |L x| / sigma_8(L) (second-smallest
    // singular value), and integration past that point only accumulates
    // roundoff. Set to 0 to force integration over the full horizon.
    double stationary_tol = 1e-9;
};

// Propagates rho0 to time t (seconds) under the generator with an adaptive
// embedded Runge-Kutta scheme (Dormand-Prince 5(4)). Serves as the
// time-evolution oracle for steady_state. Throws IntegrationFailure on
// step-size underflow or when the step budget is exhausted.
Matrix3c evolve(const Matrix3c& rho0, const Liouvillian& gen, double t,
                const EvolveOptions& opts = {});

}  // namespace ramanup
