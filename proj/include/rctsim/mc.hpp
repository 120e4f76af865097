#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rctsim/config.hpp"
#include "rctsim/link.hpp"
#include "rctsim/power_control.hpp"
#include "rctsim/rng.hpp"

namespace rctsim {

/// Aggregated binomial estimate with a Wilson 95% interval.
struct OutageEstimate {
    std::uint64_t trials = 0;
    std::uint64_t outages = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double pbar = 0.0;
    std::string scheme_label;
    std::uint64_t seed = 0;
    bool upper_bound_only = false;  // zero outages: p_hat = 0, ci_high is a bound
};

/// Wilson score interval at 95% for k successes in n trials.
void wilson_interval(std::uint64_t k, std::uint64_t n, double& lo, double& hi);

/// Sums counts and recomputes the interval (associative, commutative).
OutageEstimate merge(const OutageEstimate& a, const OutageEstimate& b);

/// Number of trials per worker block. Streams derive from (seed, block index).
inline constexpr std::uint64_t kBlockTrials = 65536;

/// Runs a Bernoulli experiment in fixed-size blocks with deterministic
/// early stopping: blocks commit in index order regardless of scheduling, and
/// the run stops at the first committed prefix whose Wilson half-width falls
/// below target_rel_ci * p_hat (or at max_trials). Results are identical for
/// any worker count.
///
/// make_counter(worker) returns a callable (RngStream&, n) -> outage count.
OutageEstimate run_bernoulli_blocks(
    const std::function<std::function<std::uint64_t(RngStream&, std::uint64_t)>(int)>&
        make_counter,
    std::uint64_t max_trials, double target_rel_ci, std::uint64_t seed, int workers);

/// Outage probability of a scheme at one operating power.
OutageEstimate estimate_outage(Scheme scheme, const SystemConfig& cfg,
                               const PowerPolicy& policy, double pbar,
                               std::uint64_t max_trials, double target_rel_ci,
                               std::uint64_t seed, int workers);

/// Calibrates internally (no-op for perfect_csit).
OutageEstimate estimate_outage(Scheme scheme, const SystemConfig& cfg, double pbar,
                               std::uint64_t max_trials, double target_rel_ci,
                               std::uint64_t seed, int workers);

struct SweepPoint {
    double pbar = 0.0;
    bool failed = false;
    std::string error;
    OutageEstimate estimate;
};

/// One estimate per grid point; per-point policies calibrated once. A point
/// whose calibration fails is marked failed without aborting the sweep.
std::vector<SweepPoint> sweep(Scheme scheme, const SystemConfig& cfg,
                              const std::vector<double>& pbar_grid,
                              std::uint64_t max_trials, double target_rel_ci,
                              std::uint64_t seed, int workers);

}  // namespace rctsim
