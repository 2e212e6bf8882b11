// config.cpp

#include "ramanup/config.hpp"

#include <cmath>
#include <fstream>

#include "ramanup/constants.hpp"

namespace ramanup {

namespace c = constants;
using nlohmann::json;

namespace {

// Every known key with its default. The defaults reproduce the fitted
// operating point of the reference experiment; hardware values that are not
// pinned by measurements (mode volume, beam area, dipole moments) are
// plausible estimates and documented in the README.
json default_config()
{
    return json{
        {"seed", 1},
        {"rates",
         {{"gamma31_per_s", 60.0},
          {"gamma32_per_s", 30.0},
          {"gamma21_per_s", 27.4},
          {"gamma2d_per_s", 1.7e6},
          {"gamma3d_per_s", 2.8e6},
          {"temperature_K", 4.2}}},
        {"inhomogeneous", {{"sigma_mu_MHz", 13.0}, {"sigma_o_GHz", 1.0}}},
        {"medium",
         {{"length_mm", 12.0},
          {"refractive_index", 1.8},
          {"alpha31_per_mm", 0.02},
          {"dipole_ratio_d23_over_d13", 0.5},
          {"d13_Cm", 2.0e-32},
          {"d23_Cm", 1.0e-32},
          {"atom_density_per_m3", 1.8e23},
          {"wavelength_nm", 1536.478},
          {"beam_area_mm2", 0.5}}},
        {"cavity",
         {{"f0_GHz", 4.9},
          {"linewidth_MHz", 16.0},
          {"quality_factor", 300.0},
          {"mode_volume_cm3", 0.35},
          {"filling_factor", 0.8},
          {"g_ac_effective", 7.0}}},
        {"losses", {{"zeta_mu_dB", 13.1}, {"zeta_xi_inv_dB", -6.4}}},
        {"gtensor", {{"path", ""}, {"site", 1}}},
        {"field", {{"B_T", 0.178}, {"alpha_deg", 29.0}}},
        {"quadrature", {{"n_mu", 31}, {"n_o", 31}, {"span_sigma", 4.0}}},
        {"powers", {{"p_mu_dBm", 0.0}, {"p_xi_detected_mW", 1.8}}},
        {"sweep_mu", {{"start_dBm", -10.0}, {"stop_dBm", 30.0}, {"points", 41}}},
        {"sweep_xi", {{"start_mW", 0.02}, {"stop_mW", 20.0}, {"points", 41}}},
        {"map",
         {{"b_start_T", 0.150},
          {"b_stop_T", 0.200},
          {"n_b", 40},
          {"df_start_GHz", -5.0},
          {"df_stop_GHz", 5.0},
          {"n_df", 40}}},
        {"epr",
         {{"b_start_T", 0.150},
          {"b_stop_T", 0.200},
          {"points", 401},
          {"fm_depth_kHz", 100.0},
          {"peak_shift_kHz", 260.0}}},
    };
}

void check_unknown_keys(const json& user, const json& schema, const std::string& prefix)
{
    if (!user.is_object()) {
        if (prefix.empty())
            throw ConfigError("config: top-level document must be a JSON object");
        return;
    }
    for (const auto& [key, value] : user.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!schema.contains(key)) throw ConfigError("config: unknown key '" + path + "'");
        const json& ref = schema.at(key);
        if (ref.is_object()) {
            if (!value.is_object())
                throw ConfigError("config: key '" + path + "' must be an object");
            check_unknown_keys(value, ref, path);
        } else if (ref.is_number() && !value.is_number()) {
            throw ConfigError("config: key '" + path + "' must be a number");
        } else if (ref.is_string() && !value.is_string()) {
            throw ConfigError("config: key '" + path + "' must be a string");
        }
    }
}

json merge(const json& defaults, const json& user)
{
    json out = defaults;
    for (const auto& [key, value] : user.items()) {
        if (value.is_object() && defaults.contains(key) && defaults.at(key).is_object())
            out[key] = merge(defaults.at(key), value);
        else
            out[key] = value;
    }
    return out;
}

std::vector<double> linspace(double start, double stop, int points)
{
    if (points < 1) throw ConfigError("config: sweep needs at least one point");
    if (points == 1) return {start};
    if (!(stop >= start)) throw ConfigError("config: sweep range must be monotone");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = start + (stop - start) * i / (points - 1);
    return out;
}

}  // namespace

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

RunConfig RunConfig::from_json(const json& user)
{
    const json defaults = default_config();
    check_unknown_keys(user, defaults, "");
    RunConfig cfg;
    cfg.user_ = user;
    cfg.effective_ = merge(defaults, user);

    // eager validation of the physical blocks
    cfg.rates();
    cfg.distribution();
    cfg.medium();
    cfg.microwave_coupling();
    cfg.quadrature();
    cfg.cavity();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json parsed;
    try {
        parsed = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    return from_json(parsed);
}

bool RunConfig::user_set(const std::string& dotted_path) const
{
    const json* node = &user_;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = dotted_path.find('.', begin);
        const std::string key = dotted_path.substr(begin, dot - begin);
        if (!node->is_object() || !node->contains(key)) return false;
        node = &node->at(key);
        if (dot == std::string::npos) return true;
        begin = dot + 1;
    }
}

double RunConfig::seed() const { return effective_.at("seed").get<double>(); }

RelaxationRates RunConfig::rates() const
{
    const json& r = effective_.at("rates");
    RelaxationRates rates;
    rates.gamma31 = r.at("gamma31_per_s").get<double>();
    rates.gamma32 = r.at("gamma32_per_s").get<double>();
    rates.gamma21 = r.at("gamma21_per_s").get<double>();
    rates.gamma2d = r.at("gamma2d_per_s").get<double>();
    rates.gamma3d = r.at("gamma3d_per_s").get<double>();
    const double temperature = r.at("temperature_K").get<double>();
    const double f0 = effective_.at("cavity").at("f0_GHz").get<double>() * 1e9;
    rates.n_bath = (temperature > 0) ? thermal_occupation(f0, temperature) : 0.0;
    if (rates.gamma31 < 0 || rates.gamma32 < 0 || rates.gamma21 < 0 || rates.gamma2d < 0 ||
        rates.gamma3d < 0)
        throw ConfigError("config: rates must be non-negative");
    return rates;
}

InhomogeneousDistribution RunConfig::distribution() const
{
    const json& i = effective_.at("inhomogeneous");
    InhomogeneousDistribution d;
    d.sigma_mu = 2.0 * c::pi * i.at("sigma_mu_MHz").get<double>() * 1e6;
    d.sigma_o = 2.0 * c::pi * i.at("sigma_o_GHz").get<double>() * 1e9;
    d.center_mu = 0.0;
    d.center_o = 0.0;
    d.validate();
    return d;
}

MediumParams RunConfig::medium() const
{
    const json& m = effective_.at("medium");
    return make_medium(m.at("atom_density_per_m3").get<double>(),
                       m.at("refractive_index").get<double>(),
                       m.at("length_mm").get<double>() * 1e-3,
                       m.at("alpha31_per_mm").get<double>() * 1e3,
                       m.at("dipole_ratio_d23_over_d13").get<double>(),
                       m.at("wavelength_nm").get<double>() * 1e-9,
                       effective_.at("cavity").at("f0_GHz").get<double>() * 1e9,
                       m.at("d13_Cm").get<double>());
}

double RunConfig::beam_area_m2() const
{
    return effective_.at("medium").at("beam_area_mm2").get<double>() * 1e-6;
}

double RunConfig::d23_cm() const
{
    return effective_.at("medium").at("d23_Cm").get<double>();
}

MicrowaveCoupling RunConfig::microwave_coupling() const
{
    const json& cav = effective_.at("cavity");
    MicrowaveCoupling mw;
    mw.quality_factor = cav.at("quality_factor").get<double>();
    mw.mode_volume_m3 = cav.at("mode_volume_cm3").get<double>() * 1e-6;
    mw.filling_factor = cav.at("filling_factor").get<double>();
    mw.g_eff = cav.at("g_ac_effective").get<double>();
    mw.f_hz = cav.at("f0_GHz").get<double>() * 1e9;
    if (!(mw.quality_factor > 0) || !(mw.mode_volume_m3 > 0) || !(mw.filling_factor > 0) ||
        !(mw.g_eff > 0) || !(mw.f_hz > 0))
        throw ConfigError("config: cavity coupling parameters must be positive");
    return mw;
}

LossBudget RunConfig::losses() const
{
    const json& l = effective_.at("losses");
    LossBudget out;
    out.zeta_mu_db = l.at("zeta_mu_dB").get<double>();
    out.zeta_xi_inv_db = l.at("zeta_xi_inv_dB").get<double>();
    if (!std::isfinite(out.zeta_mu_db) || !std::isfinite(out.zeta_xi_inv_db))
        throw ConfigError("config: losses must be finite");
    return out;
}

QuadratureSpec RunConfig::quadrature() const
{
    const json& q = effective_.at("quadrature");
    QuadratureSpec spec;
    spec.n_mu = q.at("n_mu").get<int>();
    spec.n_o = q.at("n_o").get<int>();
    spec.span = q.at("span_sigma").get<double>();
    if (spec.n_mu < 3 || spec.n_o < 3 || !(spec.span >= 3.0))
        throw ConfigError("config: quadrature needs n >= 3 per axis and span >= 3 sigma");
    return spec;
}

CavityParams RunConfig::cavity() const
{
    const json& cav = effective_.at("cavity");
    CavityParams p;
    p.f0_hz = cav.at("f0_GHz").get<double>() * 1e9;
    p.kappa_hz = cav.at("linewidth_MHz").get<double>() * 1e6;
    p.quality_factor = cav.at("quality_factor").get<double>();
    p.validate();
    return p;
}

SystemModel RunConfig::system_model() const
{
    SystemModel m;
    m.rates = rates();
    m.dist = distribution();
    m.medium = medium();
    m.beam_area_m2 = beam_area_m2();
    m.d23_cm = d23_cm();
    m.mw = microwave_coupling();
    m.losses = losses();
    m.quad = quadrature();
    return m;
}

double RunConfig::field_b_tesla() const
{
    return effective_.at("field").at("B_T").get<double>();
}

double RunConfig::field_alpha_deg() const
{
    return effective_.at("field").at("alpha_deg").get<double>();
}

std::string RunConfig::gtensor_path() const
{
    return effective_.at("gtensor").at("path").get<std::string>();
}

int RunConfig::gtensor_site() const
{
    return effective_.at("gtensor").at("site").get<int>();
}

bool RunConfig::has_gtensor_path() const { return !gtensor_path().empty(); }

double RunConfig::p_mu_input_w() const
{
    return dbm_to_watt(effective_.at("powers").at("p_mu_dBm").get<double>());
}

double RunConfig::p_xi_detected_w() const
{
    return effective_.at("powers").at("p_xi_detected_mW").get<double>() * 1e-3;
}

std::vector<double> RunConfig::sweep_mu_powers_w() const
{
    const json& s = effective_.at("sweep_mu");
    const auto dbm = linspace(s.at("start_dBm").get<double>(), s.at("stop_dBm").get<double>(),
                              s.at("points").get<int>());
    std::vector<double> watts(dbm.size());
    for (std::size_t i = 0; i < dbm.size(); ++i) watts[i] = dbm_to_watt(dbm[i]);
    return watts;
}

std::vector<double> RunConfig::sweep_xi_powers_w() const
{
    const json& s = effective_.at("sweep_xi");
    // log-spaced between the endpoints, matching the log-log presentation
    const double lo = s.at("start_mW").get<double>() * 1e-3;
    const double hi = s.at("stop_mW").get<double>() * 1e-3;
    const int n = s.at("points").get<int>();
    if (!(lo > 0) || !(hi >= lo)) throw ConfigError("config: sweep_xi range must be positive");
    const auto expo = linspace(std::log10(lo), std::log10(hi), n);
    std::vector<double> watts(expo.size());
    for (std::size_t i = 0; i < expo.size(); ++i) watts[i] = std::pow(10.0, expo[i]);
    return watts;
}

RamanMapSpec RunConfig::map_spec() const
{
    const json& m = effective_.at("map");
    RamanMapSpec spec;
    spec.b_start_t = m.at("b_start_T").get<double>();
    spec.b_stop_t = m.at("b_stop_T").get<double>();
    spec.n_b = m.at("n_b").get<int>();
    spec.df_start_hz = m.at("df_start_GHz").get<double>() * 1e9;
    spec.df_stop_hz = m.at("df_stop_GHz").get<double>() * 1e9;
    spec.n_df = m.at("n_df").get<int>();
    spec.p_mu_input_w = p_mu_input_w();
    spec.p_xi_detected_w = p_xi_detected_w();
    return spec;
}

std::vector<double> RunConfig::epr_b_grid() const
{
    const json& e = effective_.at("epr");
    return linspace(e.at("b_start_T").get<double>(), e.at("b_stop_T").get<double>(),
                    e.at("points").get<int>());
}

double RunConfig::epr_fm_depth_hz() const
{
    return effective_.at("epr").at("fm_depth_kHz").get<double>() * 1e3;
}

}  // namespace ramanup
