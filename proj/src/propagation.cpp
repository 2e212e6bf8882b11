// propagation.cpp

#include "ramanup/propagation.hpp"

#include <cmath>
#include <iostream>

#include "ramanup/constants.hpp"

namespace ramanup {

namespace c = constants;

void MediumParams::validate() const
{
    if (!(atom_density > 0) || !(refractive_index > 0) || !(length > 0) ||
        !(alpha31 > 0) || !(dipole_ratio > 0) || !(omega31 > 0) || !(k31 > 0) ||
        !(k32 > 0) || !(d13 > 0))
        throw std::invalid_argument("MediumParams: all fields must be positive");
    const double mismatch = std::abs(k_mu - (k31 - k32));
    if (mismatch > 1e-9 * k31)
        throw std::invalid_argument("MediumParams: k_mu must equal k31 - k32");
}

MediumParams make_medium(double atom_density, double refractive_index, double length_m,
                         double alpha31_per_m, double dipole_ratio, double wavelength_m,
                         double f_mu_hz, double d13_cm)
{
    MediumParams m;
    m.atom_density = atom_density;
    m.refractive_index = refractive_index;
    m.length = length_m;
    m.alpha31 = alpha31_per_m;
    m.dipole_ratio = dipole_ratio;
    m.omega31 = 2.0 * c::pi * c::speed_of_light / wavelength_m;
    m.k31 = m.omega31 / c::speed_of_light;
    m.k_mu = 2.0 * c::pi * f_mu_hz / c::speed_of_light;
    m.k32 = m.k31 - m.k_mu;
    m.d13 = d13_cm;
    m.validate();
    return m;
}

double field_from_power(double power_w, double beam_area_m2, double refractive_index)
{
    if (power_w < 0 || !(beam_area_m2 > 0) || !(refractive_index > 0))
        throw std::invalid_argument("field_from_power: invalid arguments");
    return std::sqrt(2.0 * power_w /
                     (refractive_index * c::epsilon0 * c::speed_of_light * beam_area_m2));
}

double power_from_field(double amplitude_v_m, double beam_area_m2, double refractive_index)
{
    if (amplitude_v_m < 0 || !(beam_area_m2 > 0) || !(refractive_index > 0))
        throw std::invalid_argument("power_from_field: invalid arguments");
    return 0.5 * refractive_index * c::epsilon0 * c::speed_of_light * amplitude_v_m *
           amplitude_v_m * beam_area_m2;
}

OpticalField OpticalField::from_power(double power_w, double beam_area_m2,
                                      double refractive_index)
{
    return OpticalField{field_from_power(power_w, beam_area_m2, refractive_index), power_w,
                        beam_area_m2};
}

OpticalField OpticalField::from_amplitude(double amplitude_v_m, double beam_area_m2,
                                          double refractive_index)
{
    return OpticalField{amplitude_v_m,
                        power_from_field(amplitude_v_m, beam_area_m2, refractive_index),
                        beam_area_m2};
}

double phase_matching_factor(double refractive_index, double k_mu, double length_m)
{
    if (!(length_m > 0)) throw std::invalid_argument("phase_matching_factor: L must be positive");
    const double theta = refractive_index * k_mu * length_m;
    if (std::abs(theta) < 1e-8) return 1.0 - theta * theta / 6.0;
    return std::sin(theta) / theta;
}

std::complex<double> signal_amplitude(const MediumParams& medium,
                                      std::complex<double> coherence,
                                      const OpticalField& coupling, double omega_xi)
{
    medium.validate();
    if (!(omega_xi > 0))
        throw std::invalid_argument("signal_amplitude: omega_xi must be positive");
    const double depth = medium.alpha31 * medium.length;
    if (depth > 0.5)
        std::cerr << "ramanup: warning: optical depth " << depth
                  << " exceeds the optically-thin limit (0.5)\n";
    const double pm = phase_matching_factor(medium.refractive_index, medium.k_mu, medium.length);
    const std::complex<double> i_unit(0.0, 1.0);
    return i_unit * coherence * (depth / 2.0) * medium.dipole_ratio * pm * coupling.amplitude /
           (c::pi * omega_xi);
}

double sideband_power(double e_s_magnitude, double beam_area_m2, double refractive_index)
{
    if (e_s_magnitude < 0)
        throw std::invalid_argument("sideband_power: field magnitude must be non-negative");
    return power_from_field(e_s_magnitude, beam_area_m2, refractive_index);
}

double heterodyne_beat(double p_s_w, double p_xi_w)
{
    if (p_s_w < 0 || p_xi_w < 0)
        throw std::invalid_argument("heterodyne_beat: powers must be non-negative");
    return 2.0 * std::sqrt(p_s_w * p_xi_w);
}

double conversion_efficiency(double p_s_w, double p_mu_w, double f_mu_hz, double f_xi_hz)
{
    if (!(p_mu_w > 0))
        throw std::invalid_argument("conversion_efficiency: P_mu must be positive");
    if (!(f_mu_hz > 0) || !(f_xi_hz > 0))
        throw std::invalid_argument("conversion_efficiency: frequencies must be positive");
    if (p_s_w < 0)
        throw std::invalid_argument("conversion_efficiency: P_S must be non-negative");
    return (p_s_w / p_mu_w) * (f_mu_hz / f_xi_hz);
}

double power_to_rabi_optical(double power_w, double beam_area_m2, double d23_cm,
                             double refractive_index)
{
    if (power_w < 0 || !(d23_cm > 0))
        throw std::invalid_argument("power_to_rabi_optical: invalid arguments");
    return d23_cm * field_from_power(power_w, beam_area_m2, refractive_index) / (2.0 * c::hbar);
}

double power_to_rabi_microwave(double power_w, double quality_factor, double mode_volume_m3,
                               double filling_factor, double g_eff, double f_hz)
{
    if (power_w < 0 || !(quality_factor > 0) || !(mode_volume_m3 > 0) ||
        !(filling_factor > 0) || !(g_eff > 0) || !(f_hz > 0))
        throw std::invalid_argument("power_to_rabi_microwave: invalid arguments");
    const double omega = 2.0 * c::pi * f_hz;
    const double b_ac = std::sqrt(2.0 * c::mu0 * quality_factor * power_w /
                                  (omega * mode_volume_m3)) *
                        std::sqrt(filling_factor);
    return g_eff * c::bohr_magneton * b_ac / (2.0 * c::hbar);
}

}  // namespace ramanup
