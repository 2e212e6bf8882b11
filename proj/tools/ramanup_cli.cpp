// ramanup_cli.cpp - Command-line entry point

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "ramanup/commands.hpp"

namespace {

// --config resolution: as given, else relative to $RAMANUP_CONFIG_DIR.
std::string resolve_config_path(const std::string& path)
{
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (const char* dir = std::getenv("RAMANUP_CONFIG_DIR")) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;  // let the loader produce the error message
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ramanup: microwave-to-optical up-conversion simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string fit_data;
    unsigned threads = 1;
    double seed = -1.0;

    const std::vector<std::string> commands = {"spectrum", "raman-map", "sweep-mu", "sweep-xi",
                                               "epr", "spin-levels", "fit", "efficiency"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_path, "output CSV path");
        sub->add_option("--threads", threads, "worker thread count");
        sub->add_option("--seed", seed, "seed recorded in the artifact metadata");
        if (name == "fit")
            sub->add_option("--data", fit_data, "measured-curve CSV (axis,power_W,p_s_W)")
                ->required();
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    if (out_path.empty()) out_path = command + ".csv";

    try {
        const ramanup::RunConfig config =
            ramanup::RunConfig::load(resolve_config_path(config_path));
        ramanup::CommandOptions options;
        options.threads = threads;
        options.fit_data_path = fit_data;
        if (seed >= 0) options.seed_override = seed;
        const int status = ramanup::run_command(command, config, out_path, options);
        if (status == 0) std::cout << "wrote " << out_path << "\n";
        return status;
    } catch (const std::exception& e) {
        std::cerr << "ramanup " << command << ": error: " << e.what() << "\n";
        return 1;
    }
}
