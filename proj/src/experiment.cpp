// experiment.cpp - Forward model composition, power sweeps and the Raman map

#include "ramanup/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ramanup/constants.hpp"
#include "ramanup/parallel.hpp"

namespace ramanup {

namespace c = constants;

double LossBudget::cavity_power(double input_w) const
{
    return input_w * std::pow(10.0, -zeta_mu_db / 10.0);
}

double LossBudget::input_power(double cavity_w) const
{
    return cavity_w * std::pow(10.0, zeta_mu_db / 10.0);
}

double LossBudget::sample_power(double detected_w) const
{
    return detected_w * std::pow(10.0, zeta_xi_inv_db / 10.0);
}

double LossBudget::detected_power(double sample_w) const
{
    return sample_w * std::pow(10.0, -zeta_xi_inv_db / 10.0);
}

SignalResult signal_power(const SystemModel& model, double p_mu_input_w,
                          double p_xi_detected_w, double center_mu, double center_o,
                          unsigned threads)
{
    if (p_mu_input_w < 0 || p_xi_detected_w < 0)
        throw std::invalid_argument("signal_power: powers must be non-negative");

    SignalResult out;
    const double p_cavity = model.losses.cavity_power(p_mu_input_w);
    const double p_sample = model.losses.sample_power(p_xi_detected_w);
    out.omega_mu = power_to_rabi_microwave(p_cavity, model.mw.quality_factor,
                                           model.mw.mode_volume_m3, model.mw.filling_factor,
                                           model.mw.g_eff, model.mw.f_hz);
    out.omega_xi = power_to_rabi_optical(p_sample, model.beam_area_m2, model.d23_cm,
                                         model.medium.refractive_index);

    InhomogeneousDistribution dist = model.dist;
    dist.center_mu = center_mu;
    dist.center_o = center_o;

    AtomDrive drive;
    drive.omega_mu = out.omega_mu;
    drive.omega_xi = out.omega_xi;

    const QuadratureGrid grid =
        quadrature_grid(dist, model.quad.n_mu, model.quad.n_o, model.quad.span);
    const EnsembleAverages avg =
        ensemble_averages(drive, model.rates, dist, grid, threads);
    out.coherence = avg.coherence;
    out.pop_difference = avg.pop_difference;

    if (out.omega_xi > 0.0) {
        const OpticalField coupling = OpticalField::from_power(
            p_sample, model.beam_area_m2, model.medium.refractive_index);
        const std::complex<double> e_s =
            signal_amplitude(model.medium, out.coherence, coupling, out.omega_xi);
        out.e_s_v_m = std::abs(e_s);
        out.p_s_w = sideband_power(out.e_s_v_m, model.beam_area_m2,
                                   model.medium.refractive_index);
    }
    return out;
}

std::vector<SweepPoint> power_sweep_microwave(const SystemModel& model,
                                              const std::vector<double>& p_mu_input_w,
                                              double p_xi_detected_w, unsigned threads)
{
    std::vector<SweepPoint> out(p_mu_input_w.size());
    for (std::size_t i = 0; i < p_mu_input_w.size(); ++i) {
        out[i].x = p_mu_input_w[i];
        out[i].signal = signal_power(model, p_mu_input_w[i], p_xi_detected_w, 0.0, 0.0, threads);
    }
    return out;
}

std::vector<SweepPoint> power_sweep_optical(const SystemModel& model,
                                            const std::vector<double>& p_xi_detected_w,
                                            double p_mu_input_w, unsigned threads)
{
    std::vector<SweepPoint> out(p_xi_detected_w.size());
    for (std::size_t i = 0; i < p_xi_detected_w.size(); ++i) {
        out[i].x = p_xi_detected_w[i];
        out[i].signal = signal_power(model, p_mu_input_w, p_xi_detected_w[i], 0.0, 0.0, threads);
    }
    return out;
}

std::vector<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two matched samples");
    const std::size_t n = x.size();
    std::vector<double> slope(n);
    auto s = [&](std::size_t a, std::size_t b) {
        return (std::log(y[b]) - std::log(y[a])) / (std::log(x[b]) - std::log(x[a]));
    };
    slope[0] = s(0, 1);
    slope[n - 1] = s(n - 2, n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) slope[i] = s(i - 1, i + 1);
    return slope;
}

double find_knee(const std::vector<double>& x, const std::vector<double>& y,
                 double slope_threshold)
{
    const std::vector<double> slope = loglog_slope(x, y);
    for (std::size_t i = 1; i < slope.size(); ++i) {
        if (slope[i] <= slope_threshold && slope[i - 1] > slope_threshold) {
            const double t = (slope_threshold - slope[i - 1]) / (slope[i] - slope[i - 1]);
            return std::exp(std::log(x[i - 1]) + t * (std::log(x[i]) - std::log(x[i - 1])));
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

RamanMap raman_map(const SystemModel& model, const SiteTensors& tensors, double alpha_deg,
                   double f_cavity_hz, const RamanMapSpec& spec, unsigned threads)
{
    if (!tensors.has_ground || !tensors.has_excited)
        throw std::invalid_argument("raman_map: g-tensor data for ground and excited "
                                    "manifolds is required");
    if (spec.n_b < 2 || spec.n_df < 2)
        throw std::invalid_argument("raman_map: grid needs at least 2 points per axis");

    RamanMap map;
    map.b_tesla.resize(spec.n_b);
    map.detuning_hz.resize(spec.n_df);
    for (int i = 0; i < spec.n_b; ++i)
        map.b_tesla[i] = spec.b_start_t + (spec.b_stop_t - spec.b_start_t) * i / (spec.n_b - 1);
    for (int j = 0; j < spec.n_df; ++j)
        map.detuning_hz[j] =
            spec.df_start_hz + (spec.df_stop_hz - spec.df_start_hz) * j / (spec.n_df - 1);
    map.p_s_w.assign(spec.n_b, std::vector<double>(spec.n_df, 0.0));

    // The in-plane field direction is fixed along the scan, so the overlap
    // matrix is field-independent; only the splittings scale with |B|.
    const FieldConfig unit_field{1.0, alpha_deg};
    const ZeemanDoublet dg1 = zeeman_split(tensors.ground, unit_field);
    const ZeemanDoublet de1 = zeeman_split(tensors.excited, unit_field);
    const TransitionTable amp = transition_amplitudes(dg1, de1);

    const double a_pump_ref = std::abs(amp.amplitude(1, 0));   // |2>-|3|
    const double a_sig_ref = std::abs(amp.amplitude(0, 0));    // |1>-|3|
    if (a_pump_ref < 1e-12 || a_sig_ref < 1e-12)
        throw std::invalid_argument("raman_map: degenerate transition amplitudes at this angle");

    struct Line {
        int gi, ej;  // pump transition indices
        double a_pump, a_sig;
    };
    const std::array<Line, 4> lines = {{
        {0, 0, std::abs(amp.amplitude(0, 0)), std::abs(amp.amplitude(1, 0))},
        {1, 0, std::abs(amp.amplitude(1, 0)), std::abs(amp.amplitude(0, 0))},
        {0, 1, std::abs(amp.amplitude(0, 1)), std::abs(amp.amplitude(1, 1))},
        {1, 1, std::abs(amp.amplitude(1, 1)), std::abs(amp.amplitude(0, 1))},
    }};

    const std::size_t total = static_cast<std::size_t>(spec.n_b) * spec.n_df;
    std::vector<double> flat(total, 0.0);
    parallel_for(total, threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / spec.n_df;
        const int j = static_cast<int>(idx) % spec.n_df;
        const double b = map.b_tesla[i];
        const double fg = dg1.splitting_hz * b;
        const double fe = de1.splitting_hz * b;
        const auto pos = line_positions(fg, fe);
        // positions by (gi, ej): (0,0)->pos[0], (1,1)->pos[1], (0,1)->pos[2], (1,0)->pos[3]
        const double line_pos[2][2] = {{pos[0], pos[2]}, {pos[3], pos[1]}};

        const double center_mu = 2.0 * c::pi * (fg - f_cavity_hz);
        double p_total = 0.0;
        // the spin Gaussian suppresses everything outside its support
        const double spin_sigmas = std::abs(center_mu) / model.dist.sigma_mu;
        if (spin_sigmas < model.quad.span + 2.0) {
          for (const Line& line : lines) {
            const double c_o =
                2.0 * c::pi * (map.detuning_hz[j] - line_pos[line.gi][line.ej]);
            const double u = c_o / model.dist.sigma_o;
            if (0.5 * u * u > 12.5) continue;  // optical envelope below 4e-6

            SystemModel local = model;
            local.d23_cm = model.d23_cm * line.a_pump / a_pump_ref;
            local.medium.alpha31 =
                model.medium.alpha31 * (line.a_sig * line.a_sig) / (a_sig_ref * a_sig_ref);
            local.medium.dipole_ratio = line.a_pump / line.a_sig;
            const SignalResult r = signal_power(local, spec.p_mu_input_w,
                                                spec.p_xi_detected_w, center_mu, c_o, 1);
            p_total += r.p_s_w;
          }
        }
        flat[idx] = p_total;
    });
    for (int i = 0; i < spec.n_b; ++i)
        for (int j = 0; j < spec.n_df; ++j)
            map.p_s_w[i][j] = flat[static_cast<std::size_t>(i) * spec.n_df + j];
    return map;
}

std::vector<MapPeak> find_map_peaks(const RamanMap& map, double floor)
{
    double global_max = 0.0;
    for (const auto& row : map.p_s_w)
        for (double v : row) global_max = std::max(global_max, v);

    std::vector<MapPeak> peaks;
    const int nb = static_cast<int>(map.b_tesla.size());
    const int nf = static_cast<int>(map.detuning_hz.size());
    for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nf; ++j) {
            const double v = map.p_s_w[i][j];
            if (v < floor * global_max) continue;
            bool is_peak = true;
            for (int di = -1; di <= 1 && is_peak; ++di)
                for (int dj = -1; dj <= 1 && is_peak; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= nb || jj < 0 || jj >= nf) continue;
                    if (map.p_s_w[ii][jj] >= v) is_peak = false;
                }
            if (is_peak) peaks.push_back({map.b_tesla[i], map.detuning_hz[j], v});
        }
    }
    return peaks;
}

}  // namespace ramanup
