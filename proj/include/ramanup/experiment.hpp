// experiment.hpp - Composition of the solver modules into the measured
// quantities: power-scaling curves, the 2D Raman heterodyne map, and the
// loss/rate fitting problem.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ramanup/ensemble.hpp"
#include "ramanup/lindblad.hpp"
#include "ramanup/propagation.hpp"
#include "ramanup/spin_levels.hpp"

namespace ramanup {

// Lumped propagation losses between the instrument reference planes and the
// sample, applied as power ratios 10^(dB/10).
struct LossBudget {
    double zeta_mu_db = 0.0;      // input microwave loss
    double zeta_xi_inv_db = 0.0;  // detector-to-sample optical inverse loss

    double cavity_power(double input_w) const;    // applies zeta_mu
    double input_power(double cavity_w) const;    // inverse of cavity_power
    double sample_power(double detected_w) const;  // applies zeta_xi_inv
    double detected_power(double sample_w) const;  // inverse of sample_power
};

// Loop-gap resonator parameters entering the power-to-Rabi map.
struct MicrowaveCoupling {
    double quality_factor = 0.0;
    double mode_volume_m3 = 0.0;
    double filling_factor = 0.0;
    double g_eff = 0.0;  // AC-coupling effective g-value
    double f_hz = 0.0;   // drive frequency
};

struct QuadratureSpec {
    int n_mu = 31;
    int n_o = 31;
    double span = 4.0;
};

// Everything the forward model needs at one operating point.
struct SystemModel {
    RelaxationRates rates;
    InhomogeneousDistribution dist;  // centers are overwritten per evaluation
    MediumParams medium;
    double beam_area_m2 = 0.0;
    double d23_cm = 0.0;  // absolute pump dipole moment
    MicrowaveCoupling mw;
    LossBudget losses;
    QuadratureSpec quad;
};

struct SignalResult {
    double p_s_w = 0.0;       // sideband power at the sample exit
    double omega_mu = 0.0;    // rad/s at the cavity
    double omega_xi = 0.0;    // rad/s at the sample
    std::complex<double> coherence;  // ensemble average I
    double e_s_v_m = 0.0;
    double pop_difference = 0.0;  // rho11 - rho22 of the addressed classes
};

// Full chain: losses -> Rabi frequencies -> ensemble average -> sideband.
// center_mu/center_o shift the inhomogeneous distribution (rad/s).
SignalResult signal_power(const SystemModel& model, double p_mu_input_w,
                          double p_xi_detected_w, double center_mu = 0.0,
                          double center_o = 0.0, unsigned threads = 1);

struct SweepPoint {
    double x;  // swept quantity in its natural unit (W)
    SignalResult signal;
};

std::vector<SweepPoint> power_sweep_microwave(const SystemModel& model,
                                              const std::vector<double>& p_mu_input_w,
                                              double p_xi_detected_w, unsigned threads = 1);

std::vector<SweepPoint> power_sweep_optical(const SystemModel& model,
                                            const std::vector<double>& p_xi_detected_w,
                                            double p_mu_input_w, unsigned threads = 1);

// Local log-log slope d ln y / d ln x by central differences.
std::vector<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// First swept power where the local log-log slope drops to 0.5 (linear
// interpolation between samples). Returns NaN when the curve never saturates.
double find_knee(const std::vector<double>& x, const std::vector<double>& y,
                 double slope_threshold = 0.5);

// 2D map of predicted sideband power versus magnetic field and laser detuning.
struct RamanMap {
    std::vector<double> b_tesla;
    std::vector<double> detuning_hz;              // laser detuning from zero-field line center
    std::vector<std::vector<double>> p_s_w;       // [b][detuning]
};

struct RamanMapSpec {
    double b_start_t = 0.0, b_stop_t = 0.0;
    int n_b = 0;
    double df_start_hz = 0.0, df_stop_hz = 0.0;
    int n_df = 0;
    double p_mu_input_w = 0.0;
    double p_xi_detected_w = 0.0;
};

// Composes the level structure with the Delta-system model: for each (B, df)
// the four optical lines act as independent pump transitions whose partner
// line carries the generated sideband; contributions add in power.
RamanMap raman_map(const SystemModel& model, const SiteTensors& tensors, double alpha_deg,
                   double f_cavity_hz, const RamanMapSpec& spec, unsigned threads = 1);

struct MapPeak {
    double b_tesla;
    double detuning_hz;
    double p_s_w;
};

// Strict local maxima above `floor` times the global maximum.
std::vector<MapPeak> find_map_peaks(const RamanMap& map, double floor = 0.1);

// ---- Parameter estimation -------------------------------------------------

enum class SweepAxis { MicrowavePower, OpticalPower };

struct FitDataPoint {
    SweepAxis axis;
    double x_w;    // input microwave power or detected optical power (W)
    double p_s_w;  // measured sideband power
};

struct FitParameterSpec {
    double init = 0.0;
    double lower = 0.0;
    double upper = 0.0;  // lower == upper freezes the parameter
};

struct FitProblem {
    SystemModel base;
    double p_xi_detected_w = 0.0;  // fixed coupling power for the microwave sweep
    double p_mu_input_w = 0.0;     // fixed microwave power for the optical sweep
    std::vector<FitDataPoint> data;
    FitParameterSpec gamma2d, gamma3d, gamma21, zeta_mu_db, zeta_xi_inv_db;
    int max_iterations = 60;
    unsigned threads = 1;
};

struct FitResult {
    double gamma2d = 0.0, gamma3d = 0.0, gamma21 = 0.0;
    double zeta_mu_db = 0.0, zeta_xi_inv_db = 0.0;
    double initial_cost = 0.0, final_cost = 0.0;
    std::vector<double> cost_history;  // accepted iterations, monotone decreasing
    int iterations = 0;
    bool converged = false;
    std::array<double, 5> sensitivity{};  // rough 1-sigma estimates, same order as fields
};

// Bounded Levenberg-Marquardt on joint log-power residuals across both
// curves. Deterministic. Throws std::invalid_argument on empty data;
// non-convergence is reported through FitResult::converged.
FitResult fit_parameters(const FitProblem& problem);

}  // namespace ramanup
