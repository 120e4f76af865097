#include <doctest.h>

#include <cmath>

#include "rctsim/channel.hpp"
#include "rctsim/link.hpp"
#include "rctsim/mc.hpp"
#include "rctsim/training.hpp"

using namespace rctsim;

namespace {

SystemConfig fig3_config() {
    SystemConfig cfg;
    cfg.r = 3;
    cfg.L_c = 40;
    cfg.L_B_tau = 1;
    cfg.s = 1.0;
    cfg.l = 2.0;
    cfg.g_m = 0.0;
    cfg.rate_offset_bits = 4.0;
    cfg.seed = 29;
    return cfg;
}

}  // namespace

TEST_CASE("capacity expressions") {
    CHECK(capacity_perfect_csir(0.0, 123.0, 0.9) == 0.0);
    CHECK(capacity_perfect_csir(1.0, M_E - 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(capacity_perfect_csir(2.0, 3.0, 0.4) ==
          doctest::Approx(0.5 * capacity_perfect_csir(2.0, 3.0, 0.8)).epsilon(1e-12));

    CHECK(capacity_threeway(0.0, 0.1, 100.0, 3, 0.9) == 0.0);
    CHECK(capacity_threeway(1.5, 0.0, 100.0, 3, 0.9) ==
          doctest::Approx(0.9 * std::log1p(150.0)).epsilon(1e-12));
    // pbar ||p_hat||^2 / ((pbar/r) r/pbar + 1) = 100 / 2 at the spec point
    CHECK(capacity_threeway(1.0, 3.0 / 100.0, 100.0, 3, 0.9) ==
          doctest::Approx(0.9 * std::log(51.0)).epsilon(1e-9));
}

TEST_CASE("scheme duration bookkeeping") {
    SystemConfig cfg = fig3_config();
    cfg.L_A_tau1 = 1;
    cfg.L_A_tau2 = 1;
    CHECK(cfg.training_symbols(Scheme::perfect_csir_genie) == 1);
    CHECK(cfg.training_symbols(Scheme::three_way) == 3);
    CHECK(cfg.training_symbols(Scheme::orthogonal_baseline) == 3);
    // channel-dependent reverse training needs 1/r of the orthogonal duration
    CHECK(cfg.training_symbols(Scheme::orthogonal_baseline) ==
          cfg.r * cfg.training_symbols(Scheme::perfect_csir_genie));
    for (Scheme sc : {Scheme::perfect_csir_genie, Scheme::three_way,
                      Scheme::orthogonal_baseline, Scheme::perfect_csit}) {
        CHECK(cfg.alpha(sc) ==
              doctest::Approx((40.0 - cfg.training_symbols(sc)) / 40.0).epsilon(1e-15));
    }
}

TEST_CASE("perfect-CSIT trials never see an outage") {
    const SystemConfig cfg = fig3_config();
    for (double pbar : {1.0, 316.0, 1e6}) {
        const PowerPolicy policy = make_perfect_csit_policy(cfg, pbar);
        TrialRunner runner(Scheme::perfect_csit, cfg, policy, pbar);
        RngStream rng(3, 0);
        for (int i = 0; i < 100000; ++i) {
            const TrialOutcome out = runner.run(rng);
            CHECK_FALSE(out.outage);
        }
    }
}

TEST_CASE("pinned-seed golden outage for the Fig-3 configuration at 12 dB") {
    const SystemConfig cfg = fig3_config();
    const double pbar = std::pow(10.0, 1.2);
    const OutageEstimate est =
        estimate_outage(Scheme::perfect_csir_genie, cfg, pbar, 1000000, 0.0, 29, 2);
    CHECK(est.trials == 1000000);
    CHECK(est.outages == 7692);  // frozen from the first verified run
    CHECK(est.p_hat > 0.0);
    CHECK(est.p_hat < 1e-2);
}

TEST_CASE("high-power outage collapses far below 1e-2") {
    // At pbar = 1e6 the calibrated inversion has such margin that no outage
    // is observable at desk scale; the Wilson upper bound stands in.
    const SystemConfig cfg = fig3_config();
    const OutageEstimate est =
        estimate_outage(Scheme::perfect_csir_genie, cfg, 1e6, 1000000, 0.0, 29, 2);
    CHECK(est.ci_high < 1e-2);
}

TEST_CASE("perfect-CSIR outage matches a semi-analytic oracle") {
    // Outage given sigma: the estimate must land above max(theta, sqrt(kappa) sigma)
    // (inversion branch shortfall), or below theta while sigma^2 is too small
    // for the below-threshold power. Both pieces reduce to Gaussian tails in
    // the training noise, leaving a 1-D integral over the chi density.
    const SystemConfig cfg = fig3_config();
    for (double db : {11.0, 12.0, 13.0}) {
        const double pbar = std::pow(10.0, db / 10.0);
        const PowerPolicy policy = calibrate(cfg, pbar, SigmaHatModel::perfect_csir);
        const double w_std = std::sqrt(1.0 / (2.0 * pbar * cfg.L_B_tau));
        const double gain_req = std::expm1(policy.rate_nats / policy.alpha);
        const double below = std::pow(pbar, policy.l);
        const double kap = policy.kappa;

        const int n_nodes = 20000;
        const double y_max = 6.0;
        double p_out = 0.0;
        for (int i = 0; i < n_nodes; ++i) {
            const double y = (i + 0.5) * y_max / n_nodes;
            const double fy = scaled_chi_pdf(cfg.r, 1.0, y);
            const double cut = std::max(policy.theta, std::sqrt(kap) * y);
            double prob = 0.5 * std::erfc((cut - y) / (w_std * std::sqrt(2.0)));
            if (y * y * below < gain_req)
                prob += 0.5 * std::erfc((y - policy.theta) / (w_std * std::sqrt(2.0)));
            p_out += fy * prob * (y_max / n_nodes);
        }

        const OutageEstimate est =
            estimate_outage(Scheme::perfect_csir_genie, cfg, pbar, 2000000, 0.0, 17, 2);
        INFO("db=", db, " analytic=", p_out, " mc=", est.p_hat);
        CHECK(est.ci_low <= p_out * 1.02);
        CHECK(est.ci_high >= p_out * 0.98);
    }
}

TEST_CASE("noiseless three-way block equals exact inversion up to alpha") {
    const SystemConfig cfg = [] {
        SystemConfig c = fig3_config();
        c.L_A_tau1 = 1;
        c.L_A_tau2 = 1;
        c.g_m = 0.0;
        c.rate_offset_bits = 2.0;
        return c;
    }();
    const double pbar = 100.0;
    const double alpha3 = cfg.alpha(Scheme::three_way);
    const double rate = cfg.rate_nats(pbar);

    RngStream rng(5, 0);
    const ChannelRealization ch = sample_channel(3, rng);
    const CVector zero = CVector::Zero(3);

    // Phase I and II with all noise forced to zero.
    const CsirEstimate csir = forward_train_with_noise(ch, 1e16, 1, zero);
    const double sigma_hat = csir.h_hat_norm;  // w_eff = 0
    CHECK(sigma_hat == doctest::Approx(ch.sigma).epsilon(1e-12));

    // Exact inversion in normalized units: kappa = 1/pbar.
    PowerPolicy policy;
    policy.kappa = 1.0 / pbar;
    policy.theta = 0.0;
    policy.s = 1.0;
    policy.l = 0.0;
    policy.rate_nats = rate;
    policy.alpha = alpha3;
    const double p_norm = data_power(sigma_hat, policy, pbar);

    // Phase III with zero noise: exact composite estimate, zero error.
    const CVector p_c = std::sqrt(p_norm) * ch.h;
    const CompositeChannelEstimate comp = power_controlled_train_with_noise(p_c, 1e16, 1, zero);
    const double cap = capacity_threeway(comp.p_hat.squaredNorm(), 0.0, pbar, 3, alpha3);
    CHECK(cap == doctest::Approx(rate).epsilon(1e-9));

    // The perfect-CSIT comparator hits its rate the same way; the schemes
    // differ only in which data-duration fraction divides the rate.
    const PowerPolicy csit = make_perfect_csit_policy(cfg, pbar);
    const double cap_csit = capacity_perfect_csir(
        ch.sigma * ch.sigma, data_power(ch.sigma, csit, pbar), csit.alpha);
    CHECK(cap_csit == doctest::Approx(cfg.rate_nats(pbar)).epsilon(1e-9));
    CHECK_FALSE(cap < rate - kOutageRateTol);
    CHECK_FALSE(cap_csit < rate - kOutageRateTol);
}

TEST_CASE("raising the target rate never clears an outage on a coupled seed") {
    SystemConfig lo = fig3_config();
    lo.rate_offset_bits = 2.0;
    SystemConfig hi = fig3_config();
    hi.rate_offset_bits = 3.0;
    const double pbar = std::pow(10.0, 1.1);
    const PowerPolicy p_lo = calibrate(lo, pbar, SigmaHatModel::perfect_csir);
    const PowerPolicy p_hi = calibrate(hi, pbar, SigmaHatModel::perfect_csir);

    TrialRunner run_lo(Scheme::perfect_csir_genie, lo, p_lo, pbar);
    TrialRunner run_hi(Scheme::perfect_csir_genie, hi, p_hi, pbar);
    RngStream rng_a(91, 4), rng_b(91, 4);
    int outages_lo = 0, outages_hi = 0;
    for (int i = 0; i < 100000; ++i) {
        const TrialOutcome a = run_lo.run(rng_a);
        const TrialOutcome b = run_hi.run(rng_b);
        // the calibrated inversion power does not depend on the rate
        CHECK(a.tx_power == doctest::Approx(b.tx_power).epsilon(1e-9));
        CHECK((!a.outage || b.outage));  // outage(lo) implies outage(hi)
        outages_lo += a.outage;
        outages_hi += b.outage;
    }
    CHECK(outages_lo < outages_hi);
}

TEST_CASE("three-way trial agrees with the composed training operations") {
    SystemConfig cfg = fig3_config();
    cfg.L_A_tau1 = 1;
    cfg.L_A_tau2 = 1;
    cfg.g_m = 0.5;
    const double pbar = 1e3;
    const PowerPolicy policy = calibrate(cfg, pbar, SigmaHatModel::three_way);

    TrialRunner runner(Scheme::three_way, cfg, policy, pbar);
    RngStream rng_fast(120, 8), rng_ops(120, 8);
    for (int i = 0; i < 2000; ++i) {
        const TrialOutcome fast = runner.run(rng_fast);

        const ChannelRealization ch = sample_channel(cfg.r, rng_ops);
        const CsirEstimate csir = forward_train(ch, pbar, cfg.L_A_tau1, rng_ops);
        const SingularValueEstimate sv =
            reverse_train_threeway(csir, ch, pbar, cfg.L_B_tau, rng_ops);
        const double p_norm = data_power(sv.sigma_hat, policy, pbar);
        const CVector p_c = std::sqrt(p_norm) * ch.h;
        const CompositeChannelEstimate comp =
            power_controlled_train(p_c, pbar, cfg.L_A_tau2, rng_ops);
        const double cap = capacity_threeway(comp.p_hat.squaredNorm(), comp.cond_error_var,
                                             pbar, cfg.r, cfg.alpha(Scheme::three_way));

        CHECK(fast.sigma_hat == doctest::Approx(sv.sigma_hat).epsilon(1e-10));
        CHECK(fast.achievable_rate_nats == doctest::Approx(cap).epsilon(1e-10));
        CHECK(fast.tx_power == doctest::Approx(pbar * p_norm).epsilon(1e-10));
    }
}

TEST_CASE("trial outcome invariants") {
    const SystemConfig cfg = fig3_config();
    const double pbar = std::pow(10.0, 1.1);
    const PowerPolicy policy = calibrate(cfg, pbar, SigmaHatModel::perfect_csir);
    TrialRunner runner(Scheme::perfect_csir_genie, cfg, policy, pbar);
    RngStream rng(6, 6);
    for (int i = 0; i < 50000; ++i) {
        const TrialOutcome out = runner.run(rng);
        CHECK(out.tx_power >= 0.0);
        CHECK(out.achievable_rate_nats >= 0.0);
        CHECK(out.outage == (out.achievable_rate_nats < cfg.rate_nats(pbar) - kOutageRateTol));
    }
}
