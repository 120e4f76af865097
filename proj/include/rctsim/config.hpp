#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rctsim/types.hpp"

namespace rctsim {

/// All protocol and experiment parameters for one run.
struct SystemConfig {
    // [system]
    int r = 3;         // receive antennas at node B
    int L_c = 40;      // coherence time, symbols
    int L_B_tau = 1;   // reverse training duration (per slot for orthogonal)
    int L_A_tau1 = 1;  // forward training duration, phase I
    int L_A_tau2 = 1;  // power-controlled forward training duration, phase III

    // [policy]
    double s = 1.0;  // inversion exponent, 1 <= s < r
    double l = 2.0;  // below-threshold exponent

    // [rate]  R(pbar) = rate_offset_bits * ln2 + g_m * ln(pbar), stored in nats
    double g_m = 0.0;
    double rate_offset_bits = 0.0;

    // [run]
    std::vector<Scheme> schemes = {Scheme::perfect_csir_genie};
    std::vector<double> pbar_grid;       // linear power values, increasing
    std::vector<double> g_grid;          // multiplexing-gain grid for dmt-curve
    std::uint64_t seed = 1;
    std::uint64_t max_trials = 1000000;
    double target_rel_ci = 0.0;          // 0 disables early stopping
    int workers = 0;                     // 0 = hardware concurrency

    double rate_nats(double pbar) const;

    /// Fractional data duration (L_c - training symbols) / L_c for a scheme.
    double alpha(Scheme scheme) const;

    /// Total training symbols consumed by a scheme per coherence block.
    int training_symbols(Scheme scheme) const;

    /// Parameter-box checks for a scheme; throws ConfigError with a precise
    /// diagnostic on violation.
    void validate(Scheme scheme) const;
    void validate_all() const;

    /// Canonical key=value dump (stable order); used for hashing and for the
    /// CSV header comment.
    std::string canonical_string() const;
    std::uint64_t config_hash() const;
};

SystemConfig load_config(const std::string& path);

/// Parses "a,b,c" or "start:step:stop" into a numeric grid.
std::vector<double> parse_grid(const std::string& text);

}  // namespace rctsim
