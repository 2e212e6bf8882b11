// constants.hpp - CODATA physical constants (SI units)

#pragma once

namespace ramanup::constants {

inline constexpr double planck_h = 6.62607015e-34;      // J s
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double k_boltzmann = 1.380649e-23;     // J/K
inline constexpr double speed_of_light = 2.99792458e8;  // m/s
inline constexpr double mu0 = 1.25663706212e-6;         // N/A^2
inline constexpr double epsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double pi = 3.14159265358979323846;

}  // namespace ramanup::constants
