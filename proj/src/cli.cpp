#include "rctsim/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "rctsim/dmt.hpp"
#include "rctsim/io.hpp"
#include "rctsim/mc.hpp"
#include "rctsim/power_control.hpp"
#include "rctsim/verify.hpp"

namespace rctsim {

namespace {

void write_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << content;
}

std::vector<double> default_g_grid() {
    std::vector<double> g;
    for (int k = 0; k < 100; ++k) g.push_back(k / 100.0);
    return g;
}

}  // namespace

int cmd_dmt_curve(const SystemConfig& cfg, const std::string& out_path) {
    const std::vector<double>& grid = cfg.g_grid.empty() ? default_g_grid() : cfg.g_grid;
    std::vector<DmtPoint> points;
    bool any = false;
    for (Scheme scheme : cfg.schemes) {
        if (scheme == Scheme::perfect_csit) continue;
        auto pts = dmt_curve(scheme, cfg, grid);
        any = any || !pts.empty();
        points.insert(points.end(), pts.begin(), pts.end());
    }
    if (!any) {
        std::cerr << "dmt-curve: no feasible grid points for any scheme\n";
        return 2;
    }
    write_file(out_path, dmt_csv_string(cfg, points));
    return 0;
}

std::string run_outage_sweep_csv(const SystemConfig& cfg) {
    std::vector<SchemeSweep> sweeps;
    for (Scheme scheme : cfg.schemes) {
        SchemeSweep sw;
        sw.scheme = scheme;
        sw.points = sweep(scheme, cfg, cfg.pbar_grid, cfg.max_trials, cfg.target_rel_ci,
                          cfg.seed, cfg.workers);
        sweeps.push_back(std::move(sw));
    }
    return outage_csv_string(cfg, sweeps);
}

int cmd_outage_sweep(const SystemConfig& cfg, const std::string& out_path) {
    if (cfg.pbar_grid.empty()) throw ConfigError("outage-sweep: empty pbar grid");
    const auto start = std::chrono::steady_clock::now();
    const std::string csv = run_outage_sweep_csv(cfg);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    write_file(out_path, csv);
    std::cerr << "outage-sweep: wall clock " << elapsed << " ms\n";
    return 0;
}

int cmd_calibrate(const SystemConfig& cfg, const std::string& out_path) {
    if (cfg.pbar_grid.empty()) throw ConfigError("calibrate: empty pbar grid");
    std::ostringstream os;
    write_csv_header(os, cfg);
    os << "scheme,pbar_db,kappa,theta,s,l,alpha,rate_nats,below_scale,residual\n";
    for (Scheme scheme : cfg.schemes) {
        if (scheme == Scheme::perfect_csit) continue;
        for (double pbar : cfg.pbar_grid) {
            const PowerPolicy p = calibrate(cfg, pbar, model_for_scheme(scheme));
            os << scheme_name(scheme) << ',' << format_double(10.0 * std::log10(pbar))
               << ',' << format_double(p.kappa) << ',' << format_double(p.theta) << ','
               << format_double(p.s) << ',' << format_double(p.l) << ','
               << format_double(p.alpha) << ',' << format_double(p.rate_nats) << ','
               << format_double(p.below_scale) << ','
               << format_double(p.calib_residual) << '\n';
        }
    }
    write_file(out_path, os.str());
    return 0;
}

int cmd_verify(std::uint64_t seed) {
    const auto results = run_verification(seed);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
                  << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "verification passed" : "verification FAILED") << " ("
              << results.size() << " checks)\n";
    return all_pass ? 0 : 3;
}

}  // namespace rctsim
