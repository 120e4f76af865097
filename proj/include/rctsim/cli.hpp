#pragma once

#include <string>

#include "rctsim/config.hpp"

namespace rctsim {

// Subcommand bodies, shared between the binary and the tests.
// Exit codes: 0 success, 2 config error, 3 verification failure,
// 4 calibration infeasible.

int cmd_dmt_curve(const SystemConfig& cfg, const std::string& out_path);
int cmd_outage_sweep(const SystemConfig& cfg, const std::string& out_path);
int cmd_calibrate(const SystemConfig& cfg, const std::string& out_path);
int cmd_verify(std::uint64_t seed);

/// Builds the outage CSV in memory (used by determinism tests).
std::string run_outage_sweep_csv(const SystemConfig& cfg);

}  // namespace rctsim
