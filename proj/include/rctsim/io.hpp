#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rctsim/config.hpp"
#include "rctsim/dmt.hpp"
#include "rctsim/mc.hpp"

namespace rctsim {

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

/// "# key=value" header lines carrying the config hash and seed; identical
/// inputs produce byte-identical files.
void write_csv_header(std::ostream& os, const SystemConfig& cfg);

void write_dmt_csv(std::ostream& os, const SystemConfig& cfg,
                   const std::vector<DmtPoint>& points);

struct SchemeSweep {
    Scheme scheme;
    std::vector<SweepPoint> points;
};

void write_outage_csv(std::ostream& os, const SystemConfig& cfg,
                      const std::vector<SchemeSweep>& sweeps);

std::string dmt_csv_string(const SystemConfig& cfg, const std::vector<DmtPoint>& points);
std::string outage_csv_string(const SystemConfig& cfg,
                              const std::vector<SchemeSweep>& sweeps);

}  // namespace rctsim
