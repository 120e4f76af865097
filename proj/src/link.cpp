#include "rctsim/link.hpp"

#include <cmath>

#include "rctsim/training.hpp"

namespace rctsim {

double capacity_perfect_csir(double sigma_sq, double tx_power, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("capacity_perfect_csir: alpha must be in (0, 1]");
    return alpha * std::log1p(sigma_sq * tx_power);
}

double capacity_threeway(double p_hat_norm_sq, double cond_error_var, double pbar,
                         int r, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("capacity_threeway: alpha must be in (0, 1]");
    const double denom = (pbar / r) * cond_error_var + 1.0;
    return alpha * std::log1p(pbar * p_hat_norm_sq / denom);
}

TrialRunner::TrialRunner(Scheme scheme, const SystemConfig& cfg,
                         const PowerPolicy& policy, double pbar)
    : scheme_(scheme), cfg_(cfg), policy_(policy), pbar_(pbar) {
    alpha_ = cfg.alpha(scheme);
    rate_nats_ = cfg.rate_nats(pbar);
    inv_gain_ = policy.inversion_gain();
    below_power_ = std::pow(pbar, policy.l) * policy.below_scale;
    noise_std_ = std::sqrt(reverse_noise_var(pbar, cfg.L_B_tau));
    if (scheme == Scheme::three_way) {
        h_.resize(cfg.r);
        h_hat_.resize(cfg.r);
    }
    if (scheme != Scheme::perfect_csit && policy.alpha != alpha_)
        throw std::logic_error("TrialRunner: policy calibrated for a different alpha");
}

TrialOutcome TrialRunner::run(RngStream& rng) {
    switch (scheme_) {
        case Scheme::perfect_csir_genie: return run_perfect_csir(rng);
        case Scheme::three_way: return run_three_way(rng);
        case Scheme::orthogonal_baseline: return run_orthogonal(rng);
        case Scheme::perfect_csit: return run_perfect_csit(rng);
    }
    throw std::logic_error("TrialRunner: bad scheme");
}

TrialOutcome TrialRunner::run_perfect_csir(RngStream& rng) {
    double sigma_sq = 0.0;
    for (int i = 0; i < 2 * cfg_.r; ++i) {
        const double z = rng.next_normal();
        sigma_sq += 0.5 * z * z;
    }
    const double sigma = std::sqrt(sigma_sq);
    const double w_bar = noise_std_ * rng.next_normal();
    const double sigma_hat = sigma + w_bar;  // Eq.-(5)-style unbiased estimate
    if (std::abs(sigma_hat) > sigma + std::abs(w_bar))
        throw std::logic_error("singular-value estimate exceeded its upper bound");

    const double power = (sigma_hat <= policy_.theta)
                             ? below_power_
                             : inv_gain_ / std::pow(sigma_hat * sigma_hat, policy_.s);
    const double rate = alpha_ * std::log1p(sigma_sq * power);

    TrialOutcome out;
    out.scheme = scheme_;
    out.sigma_sq = sigma_sq;
    out.sigma_hat = sigma_hat;
    out.tx_power = power;
    out.achievable_rate_nats = rate;
    out.outage = rate < rate_nats_ - kOutageRateTol;
    return out;
}

TrialOutcome TrialRunner::run_orthogonal(RngStream& rng) {
    const double energy = pbar_ * cfg_.L_B_tau;
    const double gain = std::sqrt(energy) / (1.0 + energy);
    double sigma_sq = 0.0;
    double est_norm_sq = 0.0;
    for (int i = 0; i < cfg_.r; ++i) {
        const Complex h = rng.next_cnormal();
        const Complex w = rng.next_cnormal();
        sigma_sq += std::norm(h);
        est_norm_sq += std::norm(gain * (std::sqrt(energy) * h + w));
    }
    const double sigma_hat = std::sqrt(est_norm_sq);

    const double power = (sigma_hat <= policy_.theta)
                             ? below_power_
                             : inv_gain_ / (sigma_hat * sigma_hat);  // s = 1
    const double rate = alpha_ * std::log1p(sigma_sq * power);

    TrialOutcome out;
    out.scheme = scheme_;
    out.sigma_sq = sigma_sq;
    out.sigma_hat = sigma_hat;
    out.tx_power = power;
    out.achievable_rate_nats = rate;
    out.outage = rate < rate_nats_ - kOutageRateTol;
    return out;
}

TrialOutcome TrialRunner::run_three_way(RngStream& rng) {
    const int r = cfg_.r;
    // Phase I: forward training, per-entry MMSE estimate at node B.
    const double e1 = pbar_ * cfg_.L_A_tau1;
    const double mmse_gain = std::sqrt(e1) / (1.0 + e1);
    double sigma_sq = 0.0;
    for (int i = 0; i < r; ++i) {
        h_[i] = rng.next_cnormal();
        sigma_sq += std::norm(h_[i]);
    }
    double hn_sq = 0.0;
    Complex cross(0.0, 0.0);  // h_tilde^H h_hat
    for (int i = 0; i < r; ++i) {
        const Complex w = rng.next_cnormal();
        h_hat_[i] = mmse_gain * (std::sqrt(e1) * h_[i] + w);
        hn_sq += std::norm(h_hat_[i]);
        cross += std::conj(h_[i] - h_hat_[i]) * h_hat_[i];
    }
    const double hn = std::sqrt(hn_sq);
    if (hn == 0.0)
        throw DegenerateEstimateError("three_way trial: zero channel estimate");

    // Phase II: beamformed reverse pilot along v_hat = h_hat / ||h_hat||.
    const double w_bar = noise_std_ * rng.next_normal();
    const double sigma_hat = hn + cross.real() / hn + w_bar;

    const double p_norm = (sigma_hat <= policy_.theta)
                              ? below_power_
                              : inv_gain_ / std::pow(sigma_hat * sigma_hat, policy_.s);

    // Phase III: power-controlled forward training of p_c = sqrt(P) h,
    // least-squares estimate p_hat = p_c + w / sqrt(pbar L_A_tau2).
    const double e2 = pbar_ * cfg_.L_A_tau2;
    const double w_scale = 1.0 / std::sqrt(e2);
    const double sqrt_p = std::sqrt(p_norm);
    double p_hat_norm_sq = 0.0;
    for (int i = 0; i < r; ++i) {
        const Complex w = rng.next_cnormal();
        p_hat_norm_sq += std::norm(sqrt_p * h_[i] + w_scale * w);
    }
    const double cond_error_var = static_cast<double>(r) / e2;
    const double rate =
        capacity_threeway(p_hat_norm_sq, cond_error_var, pbar_, r, alpha_);

    TrialOutcome out;
    out.scheme = scheme_;
    out.sigma_sq = sigma_sq;
    out.sigma_hat = sigma_hat;
    out.tx_power = pbar_ * p_norm;
    out.achievable_rate_nats = rate;
    out.outage = rate < rate_nats_ - kOutageRateTol;
    return out;
}

TrialOutcome TrialRunner::run_perfect_csit(RngStream& rng) {
    double sigma_sq = 0.0;
    for (int i = 0; i < 2 * cfg_.r; ++i) {
        const double z = rng.next_normal();
        sigma_sq += 0.5 * z * z;
    }
    const double power = inv_gain_ / sigma_sq;  // exact inversion, kappa = 1
    const double rate = alpha_ * std::log1p(sigma_sq * power);

    TrialOutcome out;
    out.scheme = scheme_;
    out.sigma_sq = sigma_sq;
    out.sigma_hat = std::sqrt(sigma_sq);
    out.tx_power = power;
    out.achievable_rate_nats = rate;
    out.outage = rate < rate_nats_ - kOutageRateTol;
    return out;
}

TrialOutcome run_trial(Scheme scheme, const SystemConfig& cfg, const PowerPolicy& policy,
                       double pbar, RngStream& rng) {
    TrialRunner runner(scheme, cfg, policy, pbar);
    return runner.run(rng);
}

}  // namespace rctsim
