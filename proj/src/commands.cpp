// commands.cpp - Artifact-producing command implementations

#include "ramanup/commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "ramanup/constants.hpp"
#include "ramanup/csv.hpp"
#include "ramanup/epr.hpp"
#include "ramanup/experiment.hpp"
#include "ramanup/spin_levels.hpp"

namespace ramanup {

namespace c = constants;

namespace {

std::string timestamp_utc()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_preamble(CsvWriter& csv, const std::string& command, const nlohmann::json& effective,
                    const CommandOptions& options)
{
    csv.metadata("ramanup", command);
    if (options.emit_timestamp) csv.metadata("generated_at", timestamp_utc());
    csv.metadata("config", effective.dump());
}

SiteTensors load_site(const RunConfig& config)
{
    if (!config.has_gtensor_path())
        throw ConfigError("gtensor.path is required for spin-dependent commands");
    const auto sites = parse_gtensor_file(config.gtensor_path());
    const auto it = sites.find(config.gtensor_site());
    if (it == sites.end())
        throw ConfigError("gtensor file has no site " + std::to_string(config.gtensor_site()));
    if (!it->second.has_ground || !it->second.has_excited)
        throw ConfigError("gtensor site " + std::to_string(config.gtensor_site()) +
                          " must define ground and excited tensors");
    return it->second;
}

struct LevelInfo {
    ZeemanDoublet ground, excited;
    TransitionTable table;
};

LevelInfo level_info(const SiteTensors& site, double b_tesla, double alpha_deg)
{
    LevelInfo info;
    const FieldConfig field{b_tesla, alpha_deg};
    info.ground = zeeman_split(site.ground, field);
    info.excited = zeeman_split(site.excited, field);
    info.table = transition_amplitudes(info.ground, info.excited);
    return info;
}

// When the dataset is present and the user did not pin the ratio explicitly,
// the pump/signal dipole ratio comes from the spin-state overlaps.
void apply_derived_dipole_ratio(const RunConfig& config, const SiteTensors& site,
                                SystemModel& model, nlohmann::json& effective)
{
    if (config.user_set("medium.dipole_ratio_d23_over_d13")) return;
    const LevelInfo info = level_info(site, config.field_b_tesla(), config.field_alpha_deg());
    const double strong = std::abs(info.table.amplitude(0, 0));
    const double weak = std::abs(info.table.amplitude(1, 0));
    if (strong < 1e-12) return;
    model.medium.dipole_ratio = weak / strong;
    effective["medium"]["dipole_ratio_d23_over_d13"] = model.medium.dipole_ratio;
}

int cmd_spectrum(const RunConfig& config, const std::string& out_path,
                 const CommandOptions& options, nlohmann::json effective)
{
    const SiteTensors site = load_site(config);
    const LevelInfo info = level_info(site, config.field_b_tesla(), config.field_alpha_deg());
    const double sigma_hz = effective.at("inhomogeneous").at("sigma_o_GHz").get<double>() * 1e9;
    const double alpha_peak = effective.at("medium").at("alpha31_per_mm").get<double>();
    const RamanMapSpec map = config.map_spec();
    const auto spectrum = absorption_spectrum(info.table, sigma_hz, alpha_peak,
                                              map.df_start_hz, map.df_stop_hz, 801);
    CsvWriter csv(out_path);
    write_preamble(csv, "spectrum", effective, options);
    csv.metadata("fg_GHz", CsvWriter::format_number(info.ground.splitting_hz / 1e9));
    csv.metadata("fe_GHz", CsvWriter::format_number(info.excited.splitting_hz / 1e9));
    csv.header({"detuning_GHz", "alpha_per_mm"});
    for (const auto& s : spectrum) csv.row({s.detuning_hz / 1e9, s.alpha});
    return 0;
}

int cmd_spin_levels(const RunConfig& config, const std::string& out_path,
                    const CommandOptions& options, nlohmann::json effective)
{
    const SiteTensors site = load_site(config);
    const LevelInfo info = level_info(site, config.field_b_tesla(), config.field_alpha_deg());

    CsvWriter csv(out_path);
    write_preamble(csv, "spin-levels", effective, options);
    csv.metadata("fg_GHz", CsvWriter::format_number(info.ground.splitting_hz / 1e9));
    csv.metadata("fe_GHz", CsvWriter::format_number(info.excited.splitting_hz / 1e9));
    const FieldConfig field{config.field_b_tesla(), config.field_alpha_deg()};
    csv.metadata("g_eff_ground", CsvWriter::format_number(effective_g(site.ground, field)));
    csv.metadata("g_eff_excited", CsvWriter::format_number(effective_g(site.excited, field)));
    try {
        const OptimalAngleResult opt = optimal_angle(site.ground, site.excited);
        csv.metadata("alpha_M_deg", CsvWriter::format_number(opt.best.alpha_deg));
        std::string maxima;
        for (const auto& m : opt.local_maxima) {
            if (!maxima.empty()) maxima += "; ";
            maxima += CsvWriter::format_number(m.alpha_deg) + " deg (overlap " +
                      CsvWriter::format_number(m.overlap) + ")";
        }
        csv.metadata("overlap_maxima", maxima);
    } catch (const DegenerateOptimumError&) {
        csv.metadata("alpha_M_deg", "degenerate");
    }

    csv.header({"transition", "detuning_GHz", "amplitude", "strength"});
    const char* names[2][2] = {{"1-3", "1-4"}, {"2-3", "2-4"}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            csv.text_row({names[i][j],
                          CsvWriter::format_number(info.table.detuning_hz(i, j) / 1e9),
                          CsvWriter::format_number(std::abs(info.table.amplitude(i, j))),
                          CsvWriter::format_number(std::norm(info.table.amplitude(i, j)))});
    return 0;
}

int cmd_raman_map(const RunConfig& config, const std::string& out_path,
                  const CommandOptions& options, nlohmann::json effective)
{
    const SiteTensors site = load_site(config);
    SystemModel model = config.system_model();
    apply_derived_dipole_ratio(config, site, model, effective);

    const RamanMap map = raman_map(model, site, config.field_alpha_deg(),
                                   config.cavity().f0_hz, config.map_spec(), options.threads);

    CsvWriter csv(out_path);
    write_preamble(csv, "raman-map", effective, options);
    csv.header({"b_T", "detuning_GHz", "p_s_W"});
    for (std::size_t i = 0; i < map.b_tesla.size(); ++i)
        for (std::size_t j = 0; j < map.detuning_hz.size(); ++j)
            csv.row({map.b_tesla[i], map.detuning_hz[j] / 1e9, map.p_s_w[i][j]});
    return 0;
}

int cmd_sweep_mu(const RunConfig& config, const std::string& out_path,
                 const CommandOptions& options, nlohmann::json effective)
{
    SystemModel model = config.system_model();
    if (config.has_gtensor_path()) {
        const SiteTensors site = load_site(config);
        apply_derived_dipole_ratio(config, site, model, effective);
    }
    const auto powers = config.sweep_mu_powers_w();
    const auto curve =
        power_sweep_microwave(model, powers, config.p_xi_detected_w(), options.threads);

    CsvWriter csv(out_path);
    write_preamble(csv, "sweep-mu", effective, options);
    csv.header({"p_mu_dBm", "p_mu_W", "p_s_W", "omega_mu_rad_s", "pop_difference"});
    for (const auto& p : curve)
        csv.row({watt_to_dbm(p.x), p.x, p.signal.p_s_w, p.signal.omega_mu,
                 p.signal.pop_difference});
    return 0;
}

int cmd_sweep_xi(const RunConfig& config, const std::string& out_path,
                 const CommandOptions& options, nlohmann::json effective)
{
    SystemModel model = config.system_model();
    if (config.has_gtensor_path()) {
        const SiteTensors site = load_site(config);
        apply_derived_dipole_ratio(config, site, model, effective);
    }
    const auto powers = config.sweep_xi_powers_w();
    const auto curve =
        power_sweep_optical(model, powers, config.p_mu_input_w(), options.threads);

    CsvWriter csv(out_path);
    write_preamble(csv, "sweep-xi", effective, options);
    csv.header({"p_xi_detected_mW", "p_xi_sample_W", "p_s_W", "omega_xi_rad_s",
                "pop_difference"});
    for (const auto& p : curve)
        csv.row({p.x * 1e3, model.losses.sample_power(p.x), p.signal.p_s_w,
                 p.signal.omega_xi, p.signal.pop_difference});
    return 0;
}

int cmd_epr(const RunConfig& config, const std::string& out_path,
            const CommandOptions& options, nlohmann::json effective)
{
    const SiteTensors site = load_site(config);
    const CavityParams cavity = config.cavity();
    const FieldConfig field{config.field_b_tesla(), config.field_alpha_deg()};

    SpinEnsembleCoupling coupling;
    coupling.df_db_hz_per_t =
        effective_g(site.ground, field) * c::bohr_magneton / c::planck_h;
    const double sigma_mu_hz =
        effective.at("inhomogeneous").at("sigma_mu_MHz").get<double>() * 1e6;
    coupling.gamma_mu_hz = 2.3548200450309493 * sigma_mu_hz;

    const auto b_grid = config.epr_b_grid();
    const double peak_shift =
        effective.at("epr").at("peak_shift_kHz").get<double>() * 1e3;
    coupling.g_n_hz = 1.0;
    coupling.g_n_hz = calibrate_gn(cavity, coupling, peak_shift, b_grid);

    const auto trace = dispersive_shift_spectrum(cavity, coupling, b_grid);
    const double coop = cooperativity(coupling.g_n_hz, cavity.kappa_hz, coupling.gamma_mu_hz);

    CsvWriter csv(out_path);
    write_preamble(csv, "epr", effective, options);
    csv.metadata("g_n_Hz", CsvWriter::format_number(coupling.g_n_hz));
    csv.metadata("gamma_mu_Hz", CsvWriter::format_number(coupling.gamma_mu_hz));
    csv.metadata("cooperativity", CsvWriter::format_number(coop));
    csv.header({"b_T", "delta_f_epr_Hz"});
    for (const auto& p : trace) csv.row({p.b_tesla, p.shift_hz});
    return 0;
}

int cmd_fit(const RunConfig& config, const std::string& out_path,
            const CommandOptions& options, nlohmann::json effective)
{
    if (options.fit_data_path.empty())
        throw ConfigError("fit: a measured-curve CSV is required (--data)");
    const CsvTable table = read_csv(options.fit_data_path);
    const int axis_col = table.column_index("axis");
    const int x_col = table.column_index("power_W");
    const int y_col = table.column_index("p_s_W");
    if (axis_col < 0 || x_col < 0 || y_col < 0)
        throw ConfigError("fit: data CSV must have columns axis,power_W,p_s_W");

    FitProblem problem;
    problem.base = config.system_model();
    problem.p_xi_detected_w = config.p_xi_detected_w();
    problem.p_mu_input_w = config.p_mu_input_w();
    problem.threads = options.threads;
    const std::size_t needed = static_cast<std::size_t>(
        std::max({axis_col, x_col, y_col}) + 1);
    for (const auto& row : table.rows) {
        if (row.size() < needed)
            throw ConfigError("fit: data CSV row with missing columns");
        FitDataPoint point;
        if (row[axis_col] == "mu")
            point.axis = SweepAxis::MicrowavePower;
        else if (row[axis_col] == "xi")
            point.axis = SweepAxis::OpticalPower;
        else
            throw ConfigError("fit: axis column must be 'mu' or 'xi'");
        try {
            point.x_w = std::stod(row[x_col]);
            point.p_s_w = std::stod(row[y_col]);
        } catch (const std::exception&) {
            throw ConfigError("fit: non-numeric value in data CSV");
        }
        problem.data.push_back(point);
    }

    const RelaxationRates r = problem.base.rates;
    const LossBudget l = problem.base.losses;
    problem.gamma2d = {r.gamma2d, 1e3, 1e9};
    problem.gamma3d = {r.gamma3d, 1e3, 1e9};
    problem.gamma21 = {r.gamma21, 1e-2, 1e5};
    problem.zeta_mu_db = {l.zeta_mu_db, 0.0, 40.0};
    problem.zeta_xi_inv_db = {l.zeta_xi_inv_db, -30.0, 10.0};

    const FitResult fit = fit_parameters(problem);

    CsvWriter csv(out_path);
    write_preamble(csv, "fit", effective, options);
    csv.metadata("converged", fit.converged ? "true" : "false");
    csv.metadata("iterations", std::to_string(fit.iterations));
    csv.metadata("initial_cost", CsvWriter::format_number(fit.initial_cost));
    csv.metadata("final_cost", CsvWriter::format_number(fit.final_cost));
    csv.header({"parameter", "value", "sensitivity"});
    const char* pnames[5] = {"gamma2d_per_s", "gamma3d_per_s", "gamma21_per_s", "zeta_mu_dB",
                             "zeta_xi_inv_dB"};
    const double values[5] = {fit.gamma2d, fit.gamma3d, fit.gamma21, fit.zeta_mu_db,
                              fit.zeta_xi_inv_db};
    for (int i = 0; i < 5; ++i)
        csv.text_row({pnames[i], CsvWriter::format_number(values[i]),
                      CsvWriter::format_number(fit.sensitivity[i])});
    if (!options.quiet)
        std::cout << "fit " << (fit.converged ? "converged" : "did not converge") << " after "
                  << fit.iterations << " iterations, cost " << fit.initial_cost << " -> "
                  << fit.final_cost << "\n";
    return fit.converged ? 0 : 4;
}

int cmd_efficiency(const RunConfig& config, const std::string& out_path,
                   const CommandOptions& options, nlohmann::json effective)
{
    SystemModel model = config.system_model();
    if (config.has_gtensor_path()) {
        const SiteTensors site = load_site(config);
        apply_derived_dipole_ratio(config, site, model, effective);
    }
    const double p_mu_in = config.p_mu_input_w();
    const double p_xi_det = config.p_xi_detected_w();
    const SignalResult r = signal_power(model, p_mu_in, p_xi_det, 0.0, 0.0, options.threads);

    const double p_mu_cavity = model.losses.cavity_power(p_mu_in);
    const double p_xi_sample = model.losses.sample_power(p_xi_det);
    const double f_mu = model.mw.f_hz;
    const double f_xi = model.medium.omega31 / (2.0 * c::pi);
    const double eta = conversion_efficiency(r.p_s_w, p_mu_cavity, f_mu, f_xi);
    const double beat = heterodyne_beat(r.p_s_w, p_xi_sample);

    CsvWriter csv(out_path);
    write_preamble(csv, "efficiency", effective, options);
    csv.header({"p_mu_input_W", "p_mu_cavity_W", "omega_mu_rad_s", "p_xi_detected_W",
                "p_xi_sample_W", "omega_xi_rad_s", "coherence_abs", "e_s_V_m", "p_s_W",
                "beat_W", "eta_n"});
    csv.row({p_mu_in, p_mu_cavity, r.omega_mu, p_xi_det, p_xi_sample, r.omega_xi,
             std::abs(r.coherence), r.e_s_v_m, r.p_s_w, beat, eta});

    if (!options.quiet)
        std::cout << "P_mu (input)        = " << p_mu_in << " W\n"
                  << "P_mu (cavity)       = " << p_mu_cavity << " W\n"
                  << "Omega_mu            = " << r.omega_mu << " rad/s\n"
                  << "P_xi (detected)     = " << p_xi_det << " W\n"
                  << "P_xi (sample)       = " << p_xi_sample << " W\n"
                  << "Omega_xi            = " << r.omega_xi << " rad/s\n"
                  << "|I|                 = " << std::abs(r.coherence) << "\n"
                  << "|E_S|               = " << r.e_s_v_m << " V/m\n"
                  << "P_S                 = " << r.p_s_w << " W\n"
                  << "beat proxy          = " << beat << " W\n"
                  << "eta_n               = " << eta << "\n";
    return 0;
}

}  // namespace

int run_command(const std::string& name, const RunConfig& config, const std::string& out_path,
                const CommandOptions& options)
{
    nlohmann::json effective = config.effective();
    if (options.seed_override) effective["seed"] = *options.seed_override;

    if (name == "spectrum") return cmd_spectrum(config, out_path, options, effective);
    if (name == "spin-levels") return cmd_spin_levels(config, out_path, options, effective);
    if (name == "raman-map") return cmd_raman_map(config, out_path, options, effective);
    if (name == "sweep-mu") return cmd_sweep_mu(config, out_path, options, effective);
    if (name == "sweep-xi") return cmd_sweep_xi(config, out_path, options, effective);
    if (name == "epr") return cmd_epr(config, out_path, options, effective);
    if (name == "fit") return cmd_fit(config, out_path, options, effective);
    if (name == "efficiency") return cmd_efficiency(config, out_path, options, effective);
    throw ConfigError("unknown command '" + name + "'");
}

}  // namespace ramanup
