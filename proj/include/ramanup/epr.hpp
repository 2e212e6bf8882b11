// epr.hpp - Dispersive cavity-pull spectroscopy and the FM/lock-in detection chain.

#pragma once

#include <stdexcept>
#include <vector>

namespace ramanup {

struct CavityParams {
    double f0_hz = 0.0;       // resonance
    double kappa_hz = 0.0;    // FWHM linewidth
    double quality_factor = 0.0;

    // Cross-check: Q must agree with f0/kappa within 10%.
    void validate() const;
};

struct SpinEnsembleCoupling {
    double g_n_hz = 0.0;        // collective coupling
    double gamma_mu_hz = 0.0;   // spin linewidth (FWHM, from the inhomogeneous width)
    double df_db_hz_per_t = 0.0;  // spin-resonance-vs-field slope

    void validate() const;
};

struct EprTracePoint {
    double b_tesla;
    double shift_hz;
};

// Cavity frequency pull versus field:
//   df(B) = g_N^2 Re int g(delta) / (delta + i Gamma/2) ddelta
// with g a Gaussian spin distribution (std = Gamma/2.355) centered at
// slope*B - f0. Antisymmetric about the resonance field.
std::vector<EprTracePoint> dispersive_shift_spectrum(const CavityParams& cavity,
                                                     const SpinEnsembleCoupling& coupling,
                                                     const std::vector<double>& b_grid_tesla);

// Scales g_N so the trace extremum matches a target peak shift.
double calibrate_gn(const CavityParams& cavity, const SpinEnsembleCoupling& coupling,
                    double target_peak_shift_hz, const std::vector<double>& b_grid_tesla);

// C = 4 g_N^2 / (kappa Gamma_mu).
double cooperativity(double g_n_hz, double kappa_hz, double gamma_mu_hz);

// FM demodulation: output proportional to d|S21|^2/df sampled at the trace
// points, scaled by the modulation depth. Throws std::invalid_argument when
// the depth is not small compared with the trace span.
std::vector<double> lockin_lineshape(const std::vector<double>& freq_hz,
                                     const std::vector<double>& transmission,
                                     double fm_depth_hz);

}  // namespace ramanup
