#pragma once

#include "rctsim/config.hpp"
#include "rctsim/power_control.hpp"
#include "rctsim/rng.hpp"
#include "rctsim/types.hpp"

namespace rctsim {

// Slack on the outage comparison, in nats. Exact channel inversion makes the
// achievable rate equal the target in real arithmetic; the slack keeps
// floating-point rounding from flipping that equality into an outage.
inline constexpr double kOutageRateTol = 1e-9;

/// Per-coherence-block record.
struct TrialOutcome {
    Scheme scheme;
    double sigma_sq;
    double sigma_hat;
    double tx_power;  // radiated data power (pbar * P(sigma_hat) for three_way)
    double achievable_rate_nats;
    bool outage;
};

/// Genie-aided achievable rate: alpha * log(1 + sigma_sq * tx_power).
double capacity_perfect_csir(double sigma_sq, double tx_power, double alpha);

/// Worst-case-noise lower bound for the three-way scheme:
/// alpha * log(1 + pbar ||p_hat||^2 / ((pbar/r) E[||p_err||^2 | y] + 1)).
double capacity_threeway(double p_hat_norm_sq, double cond_error_var, double pbar,
                         int r, double alpha);

/// Executes one coherence block of a scheme. Reusable across trials; holds
/// the channel workspace so the hot loop stays allocation-free.
class TrialRunner {
  public:
    TrialRunner(Scheme scheme, const SystemConfig& cfg, const PowerPolicy& policy,
                double pbar);

    TrialOutcome run(RngStream& rng);

  private:
    TrialOutcome run_perfect_csir(RngStream& rng);
    TrialOutcome run_three_way(RngStream& rng);
    TrialOutcome run_orthogonal(RngStream& rng);
    TrialOutcome run_perfect_csit(RngStream& rng);

    Scheme scheme_;
    SystemConfig cfg_;
    PowerPolicy policy_;
    double pbar_;
    double alpha_;
    double rate_nats_;
    double inv_gain_;      // kappa * (exp(R/alpha) - 1)
    double below_power_;   // pbar^l * below_scale
    double noise_std_;     // reverse-training scalar noise std
    CVector h_, h_hat_;    // three-way workspace
};

/// One-shot convenience wrapper around TrialRunner.
TrialOutcome run_trial(Scheme scheme, const SystemConfig& cfg, const PowerPolicy& policy,
                       double pbar, RngStream& rng);

}  // namespace rctsim
