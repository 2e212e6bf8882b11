// commands.hpp - CLI command implementations shared by the tool and the tests

#pragma once

#include <string>

#include "ramanup/config.hpp"

namespace ramanup {

struct CommandOptions {
    unsigned threads = 1;
    std::optional<double> seed_override;
    std::string fit_data_path;  // measured-curve CSV for the fit command
    bool emit_timestamp = true;
    bool quiet = false;  // suppress the informational stdout summary
};

// name is one of: spectrum, raman-map, sweep-mu, sweep-xi, epr, spin-levels,
// fit, efficiency. Writes a CSV artifact to out_path and returns 0 on
// success; errors propagate as exceptions carrying module context.
int run_command(const std::string& name, const RunConfig& config, const std::string& out_path,
                const CommandOptions& options = {});

}  // namespace ramanup
