#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "rctsim/cli.hpp"
#include "rctsim/types.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool needs_config) {
    auto* cfg_opt = sub->add_option("--config", opts.config_path, "experiment config file");
    if (needs_config) cfg_opt->required();
    sub->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
    sub->add_option("--seed", opts.seed, "override the config seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
}

rctsim::SystemConfig load_with_overrides(const CommonOpts& opts) {
    rctsim::SystemConfig cfg = rctsim::load_config(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.workers >= 0) cfg.workers = opts.workers;
    cfg.validate_all();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reciprocal TDD-SIMO link simulator: reverse-channel training, "
                 "power control, outage Monte-Carlo, and analytic DMT curves"};
    app.require_subcommand(1);

    CommonOpts dmt_opts, sweep_opts, cal_opts, verify_opts;
    auto* dmt = app.add_subcommand("dmt-curve", "emit analytic DMT curves as CSV");
    add_common(dmt, dmt_opts, true);
    auto* sweep = app.add_subcommand("outage-sweep", "Monte-Carlo outage vs power CSV");
    add_common(sweep, sweep_opts, true);
    auto* cal = app.add_subcommand("calibrate", "calibrate power policies over the grid");
    add_common(cal, cal_opts, true);
    auto* verify = app.add_subcommand("verify", "run the lemma property suites");
    verify->add_option("--seed", verify_opts.seed, "verification seed")
        ->each([&](const std::string&) { verify_opts.seed_set = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (dmt->parsed()) return rctsim::cmd_dmt_curve(load_with_overrides(dmt_opts),
                                                        dmt_opts.out_path);
        if (sweep->parsed())
            return rctsim::cmd_outage_sweep(load_with_overrides(sweep_opts),
                                            sweep_opts.out_path);
        if (cal->parsed())
            return rctsim::cmd_calibrate(load_with_overrides(cal_opts), cal_opts.out_path);
        if (verify->parsed())
            return rctsim::cmd_verify(verify_opts.seed_set ? verify_opts.seed : 1);
    } catch (const rctsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rctsim::CalibrationError& e) {
        std::cerr << "calibration infeasible: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
