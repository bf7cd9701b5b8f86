#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cising/runner.hpp"

namespace {

struct CommonFlags {
    std::vector<std::string> modes;
    int n = 8;
    double jmax = 2.0;
    std::optional<double> T;
    std::optional<int> L;
    std::optional<double> dt;
    int points = 41;
    std::vector<double> jgrid;
    std::uint64_t seed = 0;
    std::string branch = "connected";
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--mode", flags.modes,
                    "simulation mode(s): exact, compressed-m, compressed-mhat, statevector")
        ->delimiter(',');
    cmd->add_option("--n", flags.n, "chain length (power of two)");
    cmd->add_option("--jmax", flags.jmax, "maximal coupling");
    cmd->add_option("--T", flags.T, "total evolution time");
    cmd->add_option("--L", flags.L, "number of ramp steps");
    cmd->add_option("--dt", flags.dt, "step duration");
    cmd->add_option("--points", flags.points, "uniform J grid size on [0, jmax]");
    cmd->add_option("--jgrid", flags.jgrid, "explicit J grid (overrides --points)")
        ->delimiter(',');
    cmd->add_option("--seed", flags.seed, "base RNG seed");
    cmd->add_option("--branch", flags.branch, "exact-mode branch: connected or ground");
    cmd->add_option("--out", flags.out, "output CSV path");
}

cising::RunConfig build_config(const CommonFlags& flags, double noise_x) {
    cising::RunConfig config;
    if (!flags.modes.empty()) {
        config.modes.clear();
        for (const std::string& m : flags.modes) {
            config.modes.push_back(cising::provenance_from_string(m));
        }
    }
    config.n = flags.n;
    config.j_max = flags.jmax;
    config.total_time = flags.T;
    config.steps = flags.L;
    config.dt = flags.dt;
    // Default schedule T=30, L=600 when none of T/L/dt was given.
    if (!config.total_time && !config.steps && !config.dt) {
        config.total_time = 30.0;
        config.steps = 600;
    }
    config.grid_points = flags.points;
    config.explicit_grid = flags.jgrid;
    config.seed = flags.seed;
    config.noise_x = noise_x;
    config.branch = cising::branch_from_string(flags.branch);
    config.out_path = flags.out;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed simulation of the transverse-field Ising chain"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    CommonFlags sweep_flags;
    double sweep_x = 0.0;
    CLI::App* sweep = app.add_subcommand("sweep", "magnetization curve over a J grid");
    add_common(sweep, sweep_flags);
    sweep->add_option("--x", sweep_x, "noise amplitude for compressed-mhat");

    CommonFlags noise_flags;
    std::vector<double> noise_x_list{1e-3, 1e-2};
    int seed_count = 20;
    CLI::App* noise = app.add_subcommand("noise", "noise study against the noise-free curve");
    add_common(noise, noise_flags);
    noise->add_option("--x", noise_x_list, "noise amplitudes to study")->delimiter(',');
    noise->add_option("--seeds", seed_count, "number of seeds per amplitude");

    std::string level = "fast";
    std::string tamper = "none";
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--level", level, "fast or full");
    verify->add_option("--tamper", tamper,
                       "negative-control hook: none, flip-r0, flip-v");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            const cising::RunConfig config = build_config(sweep_flags, sweep_x);
            const cising::SweepResult result = cising::run_sweep(config, &std::cout);
            if (config.out_path.empty()) {
                std::cout << cising::sweep_csv_text(config, result.curves);
            }
            return 0;
        }
        if (noise->parsed()) {
            cising::RunConfig config = build_config(noise_flags, 0.0);
            if (config.modes.size() != 1 ||
                config.modes[0] != cising::Provenance::compressed_mhat) {
                config.modes = {cising::Provenance::compressed_mhat};
            }
            cising::run_noise_study(config, noise_x_list, seed_count, &std::cout);
            return 0;
        }
        // verify
        cising::VerifyLevel lvl;
        if (level == "fast") {
            lvl = cising::VerifyLevel::fast;
        } else if (level == "full") {
            lvl = cising::VerifyLevel::full;
        } else {
            std::cerr << "unknown level: " << level << "\n";
            return 2;
        }
        cising::Tamper tam;
        if (tamper == "none") {
            tam = cising::Tamper::none;
        } else if (tamper == "flip-r0") {
            tam = cising::Tamper::flip_r0_sign;
        } else if (tamper == "flip-v") {
            tam = cising::Tamper::flip_v_sign;
        } else {
            std::cerr << "unknown tamper hook: " << tamper << "\n";
            return 2;
        }
        const cising::VerifyReport report = cising::run_verify(lvl, tam, &std::cout);
        std::cout << (report.all_pass ? "verify: all checks passed" : "verify: FAILURES present")
                  << "\n";
        return report.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
