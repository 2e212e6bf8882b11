// config.hpp - Validated run configuration with reference-experiment defaults

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ramanup/epr.hpp"
#include "ramanup/experiment.hpp"

namespace ramanup {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nested key-value document covering every module's parameters. Unknown keys
// are rejected; unit suffixes are part of the key names. The effective
// document (defaults merged) is echoed into every artifact.
class RunConfig {
public:
    static RunConfig from_json(const nlohmann::json& user);
    static RunConfig load(const std::string& path);

    const nlohmann::json& effective() const { return effective_; }
    std::string effective_compact() const { return effective_.dump(); }

    // typed accessors (SI units unless stated)
    double seed() const;
    RelaxationRates rates() const;  // n_bath filled from temperature and f0
    InhomogeneousDistribution distribution() const;  // centers zero
    MediumParams medium() const;
    double beam_area_m2() const;
    double d23_cm() const;
    MicrowaveCoupling microwave_coupling() const;
    LossBudget losses() const;
    QuadratureSpec quadrature() const;
    CavityParams cavity() const;
    SystemModel system_model() const;

    double field_b_tesla() const;
    double field_alpha_deg() const;
    std::string gtensor_path() const;
    int gtensor_site() const;
    bool has_gtensor_path() const;

    double p_mu_input_w() const;       // from powers.p_mu_dBm
    double p_xi_detected_w() const;    // from powers.p_xi_detected_mW

    // sweep/map/epr axis definitions
    std::vector<double> sweep_mu_powers_w() const;
    std::vector<double> sweep_xi_powers_w() const;
    RamanMapSpec map_spec() const;
    std::vector<double> epr_b_grid() const;
    double epr_fm_depth_hz() const;

    // True when the user document explicitly set the key path (dot-separated).
    bool user_set(const std::string& dotted_path) const;

private:
    nlohmann::json effective_;
    nlohmann::json user_;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace ramanup
