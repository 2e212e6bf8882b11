// propagation.hpp - Signal-field generation, power accounting and
// power-to-Rabi conversions.

#pragma once

#include <complex>
#include <stdexcept>

namespace ramanup {

// Propagation constants of the doped sample. Wave numbers are vacuum values;
// the refractive index enters the phase-matching integrand explicitly.
// k_mu must equal k31 - k32 (the sideband/pump propagation mismatch).
struct MediumParams {
    double atom_density = 0.0;      // 1/m^3
    double refractive_index = 1.0;  // dimensionless
    double length = 0.0;            // m
    double alpha31 = 0.0;           // absorption coefficient of |1>-|3>, 1/m
    double dipole_ratio = 0.0;      // d23 / d13, dimensionless
    double omega31 = 0.0;           // optical angular frequency, rad/s
    double k31 = 0.0;               // rad/m
    double k32 = 0.0;               // rad/m
    double k_mu = 0.0;              // k31 - k32, rad/m
    double d13 = 0.0;               // C m; used only by the polarization route

    void validate() const;
};

// Builds a consistent parameter set from laboratory quantities.
MediumParams make_medium(double atom_density, double refractive_index, double length_m,
                         double alpha31_per_m, double dipole_ratio, double wavelength_m,
                         double f_mu_hz, double d13_cm = 2e-32);

// Plane-wave optical beam: P = 1/2 n eps0 c E^2 A.
struct OpticalField {
    double amplitude = 0.0;  // V/m
    double power = 0.0;      // W
    double beam_area = 0.0;  // m^2

    static OpticalField from_power(double power_w, double beam_area_m2, double refractive_index);
    static OpticalField from_amplitude(double amplitude_v_m, double beam_area_m2,
                                       double refractive_index);
};

double field_from_power(double power_w, double beam_area_m2, double refractive_index);
double power_from_field(double amplitude_v_m, double beam_area_m2, double refractive_index);

// Re[(1/L) int_0^L exp(i n k_mu z) dz] = sin(theta)/theta, theta = n k_mu L.
double phase_matching_factor(double refractive_index, double k_mu, double length_m);

// Optically-thin closed form for the generated sideband amplitude:
// E_S = i I (alpha31 L / 2) (d23/d13) PM E_xi / (pi Omega_xi).
// Requires Omega_xi > 0. Warns on stderr once the optical depth exceeds 0.5.
std::complex<double> signal_amplitude(const MediumParams& medium, std::complex<double> coherence,
                                      const OpticalField& coupling, double omega_xi);

double sideband_power(double e_s_magnitude, double beam_area_m2, double refractive_index);

// RF beat-note proxy between the sideband and the coupling carrier.
double heterodyne_beat(double p_s_w, double p_xi_w);

// Photon-number conversion efficiency (P_S / P_mu) (f_mu / f_xi).
double conversion_efficiency(double p_s_w, double p_mu_w, double f_mu_hz, double f_xi_hz);

// Omega_xi = d23 E / (2 hbar) with E from the beam power.
double power_to_rabi_optical(double power_w, double beam_area_m2, double d23_cm,
                             double refractive_index);

// Cavity-enhanced microwave drive:
// B_ac = sqrt(2 mu0 Q P / (omega V_mode)) sqrt(fill), Omega_mu = g_eff muB B_ac / (2 hbar).
double power_to_rabi_microwave(double power_w, double quality_factor, double mode_volume_m3,
                               double filling_factor, double g_eff, double f_hz);

}  // namespace ramanup
