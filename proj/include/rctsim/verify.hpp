#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rctsim/types.hpp"

namespace rctsim {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// Average-power constraint of the calibrated policy over the grid
/// r in {2,3,5}, s in {1, r-1}, l in {2, r}, pbar in {1e2, 1e4, 1e6}:
/// each point's E[P(sigma_hat)] / target must stay within 2%, measured by an
/// independent 10^6-draw Monte-Carlo. kappa_scale != 1 injects a fault and
/// the reported ratio shifts accordingly.
std::vector<CheckResult> check_lemma1_residuals(std::uint64_t seed,
                                                double kappa_scale = 1.0);

/// Growth exponent of kappa with pbar: regression slope of log kappa against
/// log pbar must be within 0.03 of 1 - g_m/alpha.
CheckResult check_kappa_exponent(std::uint64_t seed);

/// Moment scaling of the phase-III estimation error: the slope of
/// log E||p_err||^{2z} vs log pbar equals -z within 0.05 for z in {1,2,3}.
std::vector<CheckResult> check_lemma2_moments(std::uint64_t seed);

/// chi_square_cdf(r, z) <= z^r / r! over r in {1..8} x 60 log-spaced z in
/// [1e-4, 10]. exponent_offset shifts the bound's exponent (fault hook);
/// the first violating (r, z) is reported.
CheckResult check_lemma3_bound(int exponent_offset = 0);

/// Per-trial bound |sigma_hat| <= sigma + |w_bar| on 10^6 perfect-CSIR
/// reverse-training draws; any violation fails.
CheckResult check_lemma4_bound(std::uint64_t seed, std::uint64_t trials = 1000000);

/// The full suite run by the `verify` subcommand.
std::vector<CheckResult> run_verification(std::uint64_t seed);

}  // namespace rctsim
