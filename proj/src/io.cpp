#include "rctsim/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rctsim {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os, const SystemConfig& cfg) {
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    os << "# config_hash=" << hash << " seed=" << cfg.seed << "\n";
    os << "# config: " << cfg.canonical_string() << "\n";
}

void write_dmt_csv(std::ostream& os, const SystemConfig& cfg,
                   const std::vector<DmtPoint>& points) {
    write_csv_header(os, cfg);
    os << "scheme,g_m,d,r_used,alpha\n";
    for (const auto& p : points)
        os << p.scheme << ',' << format_double(p.g_m) << ',' << format_double(p.d) << ','
           << p.r_used << ',' << format_double(p.alpha) << '\n';
}

void write_outage_csv(std::ostream& os, const SystemConfig& cfg,
                      const std::vector<SchemeSweep>& sweeps) {
    write_csv_header(os, cfg);
    os << "scheme,pbar_db,trials,outages,p_hat,ci_low,ci_high,seed\n";
    for (const auto& sw : sweeps) {
        const std::string label = scheme_output_label(sw.scheme);
        for (const auto& pt : sw.points) {
            const double db = 10.0 * std::log10(pt.pbar);
            if (pt.failed) {
                os << "# point scheme=" << label << " pbar_db=" << format_double(db)
                   << " failed: " << pt.error << "\n";
                continue;
            }
            const auto& e = pt.estimate;
            os << label << ',' << format_double(db) << ',' << e.trials << ','
               << e.outages << ',' << format_double(e.p_hat) << ','
               << format_double(e.ci_low) << ',' << format_double(e.ci_high) << ','
               << e.seed << '\n';
        }
        // Outage should not grow with power once past the pegged region;
        // significant increases are reported, never silently dropped.
        const SweepPoint* prev = nullptr;
        for (const auto& pt : sw.points) {
            if (pt.failed) continue;
            if (prev != nullptr &&
                pt.estimate.ci_low > prev->estimate.ci_high) {
                os << "# monotonicity: " << label << " outage rises from "
                   << format_double(10.0 * std::log10(prev->pbar)) << " dB to "
                   << format_double(10.0 * std::log10(pt.pbar))
                   << " dB beyond CI overlap\n";
            }
            prev = &pt;
        }
    }
}

std::string dmt_csv_string(const SystemConfig& cfg, const std::vector<DmtPoint>& points) {
    std::ostringstream os;
    write_dmt_csv(os, cfg, points);
    return os.str();
}

std::string outage_csv_string(const SystemConfig& cfg,
                              const std::vector<SchemeSweep>& sweeps) {
    std::ostringstream os;
    write_outage_csv(os, cfg, sweeps);
    return os.str();
}

}  // namespace rctsim
