#include <doctest.h>

#include <cmath>

#include "rctsim/mc.hpp"

using namespace rctsim;

namespace {

// Synthetic Bernoulli(p) trial source for engine tests.
auto bernoulli_factory(double p) {
    return [p](int) {
        return [p](RngStream& rng, std::uint64_t n) {
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < n; ++i)
                if (rng.next_double() <= p) ++count;
            return count;
        };
    };
}

}  // namespace

TEST_CASE("wilson interval basics") {
    double lo, hi;
    wilson_interval(0, 100000, lo, hi);
    CHECK(lo == 0.0);
    // z^2 / (n + z^2) with the two-sided 95% quantile
    CHECK(hi == doctest::Approx(3.8413e-5).epsilon(1e-3));
    CHECK(hi > 3e-5);
    CHECK(hi < 4e-5);

    wilson_interval(100, 1000, lo, hi);
    CHECK(lo > 0.0);
    CHECK(lo < 0.1);
    CHECK(hi > 0.1);
    CHECK(hi < 1.0);

    wilson_interval(1000, 1000, lo, hi);
    CHECK(hi == 1.0);
}

TEST_CASE("wilson interval always contains the point estimate") {
    for (std::uint64_t k : {0ull, 1ull, 17ull, 500ull, 999ull, 1000ull}) {
        double lo, hi;
        wilson_interval(k, 1000, lo, hi);
        const double p = k / 1000.0;
        CHECK(lo >= 0.0);
        CHECK(lo <= p);
        CHECK(p <= hi);
        CHECK(hi <= 1.0);
    }
}

TEST_CASE("estimate merging is consistent with concatenation") {
    OutageEstimate a, b;
    a.trials = 130000;
    a.outages = 17;
    b.trials = 70000;
    b.outages = 4;
    const OutageEstimate ab = merge(a, b);
    CHECK(ab.trials == 200000);
    CHECK(ab.outages == 21);
    CHECK(ab.p_hat == doctest::Approx(21.0 / 200000.0).epsilon(1e-15));
    double lo, hi;
    wilson_interval(21, 200000, lo, hi);
    CHECK(ab.ci_low == lo);
    CHECK(ab.ci_high == hi);
    const OutageEstimate ba = merge(b, a);
    CHECK(ba.trials == ab.trials);
    CHECK(ba.ci_low == ab.ci_low);

    OutageEstimate c;
    c.trials = 50000;
    c.outages = 9;
    const OutageEstimate left = merge(merge(a, b), c);
    const OutageEstimate right = merge(a, merge(b, c));
    CHECK(left.trials == right.trials);
    CHECK(left.outages == right.outages);
    CHECK(left.ci_high == right.ci_high);
}

TEST_CASE("synthetic Bernoulli estimation") {
    const OutageEstimate est =
        run_bernoulli_blocks(bernoulli_factory(0.1), 1000000, 0.0, 3, 2);
    CHECK(est.trials == 1000000);
    CHECK(std::abs(est.p_hat - 0.1) < 0.001);
    CHECK(est.ci_low < 0.1);
    CHECK(est.ci_high > 0.1);
}

TEST_CASE("zero outages give an upper-bound-only estimate") {
    const OutageEstimate est =
        run_bernoulli_blocks(bernoulli_factory(0.0), 100000, 0.0, 5, 2);
    CHECK(est.outages == 0);
    CHECK(est.p_hat == 0.0);
    CHECK(est.upper_bound_only);
    CHECK(est.ci_high == doctest::Approx(3.8413e-5).epsilon(1e-3));
}

TEST_CASE("worker-count invariance, with and without early stopping") {
    for (double target : {0.0, 0.08}) {
        const OutageEstimate e1 =
            run_bernoulli_blocks(bernoulli_factory(0.01), 4000000, target, 17, 1);
        const OutageEstimate e4 =
            run_bernoulli_blocks(bernoulli_factory(0.01), 4000000, target, 17, 4);
        const OutageEstimate e16 =
            run_bernoulli_blocks(bernoulli_factory(0.01), 4000000, target, 17, 16);
        CHECK(e1.trials == e4.trials);
        CHECK(e1.outages == e4.outages);
        CHECK(e1.trials == e16.trials);
        CHECK(e1.outages == e16.outages);
        if (target > 0.0) CHECK(e1.trials < 4000000);  // early stop engaged
    }
}

TEST_CASE("early stopping honors the relative CI target") {
    const double target = 0.05;
    const OutageEstimate est =
        run_bernoulli_blocks(bernoulli_factory(0.05), 50000000, target, 23, 2);
    CHECK(est.trials < 50000000);
    CHECK(0.5 * (est.ci_high - est.ci_low) < target * est.p_hat);
}

TEST_CASE("interval coverage on synthetic sources") {
    // 500 repetitions each; the 95% interval must cover p at least 93% of
    // the time.
    struct Setting {
        double p;
        std::uint64_t n;
    };
    for (const Setting st : {Setting{0.1, 10000}, Setting{0.001, 100000}}) {
        int covered = 0;
        for (int rep = 0; rep < 500; ++rep) {
            RngStream rng(900 + rep, 0);
            std::uint64_t k = 0;
            for (std::uint64_t i = 0; i < st.n; ++i)
                if (rng.next_double() <= st.p) ++k;
            double lo, hi;
            wilson_interval(k, st.n, lo, hi);
            if (lo <= st.p && st.p <= hi) ++covered;
        }
        INFO("p=", st.p, " covered=", covered, "/500");
        CHECK(covered >= 465);
    }
}

TEST_CASE("estimate_outage is deterministic across worker counts") {
    SystemConfig cfg;
    cfg.r = 3;
    cfg.L_c = 40;
    cfg.L_B_tau = 1;
    cfg.s = 1.0;
    cfg.l = 2.0;
    cfg.g_m = 0.0;
    cfg.rate_offset_bits = 4.0;
    cfg.seed = 29;
    const double pbar = std::pow(10.0, 1.1);
    const PowerPolicy policy = calibrate(cfg, pbar, SigmaHatModel::perfect_csir);
    const OutageEstimate e1 =
        estimate_outage(Scheme::perfect_csir_genie, cfg, policy, pbar, 500000, 0.0, 29, 1);
    const OutageEstimate e4 =
        estimate_outage(Scheme::perfect_csir_genie, cfg, policy, pbar, 500000, 0.0, 29, 4);
    CHECK(e1.outages == e4.outages);
    CHECK(e1.trials == e4.trials);
    CHECK(e1.scheme_label == "perfect_csir_genie");
}

TEST_CASE("sweep marks infeasible points without aborting") {
    SystemConfig cfg;
    cfg.r = 2;
    cfg.L_c = 4;
    cfg.L_B_tau = 1;
    cfg.s = 1.0;
    cfg.l = 2.0;
    cfg.g_m = 0.45;
    cfg.rate_offset_bits = 0.0;
    cfg.seed = 5;
    // Orthogonal needs g_m < (4-2)/4 = 0.5: feasible but tight; the
    // three-way mode is infeasible outright (training fills 3 of 4 symbols,
    // alpha = 0.25 < g_m).
    const auto pts = sweep(Scheme::three_way, cfg, {10.0, 100.0}, 10000, 0.0, 5, 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].failed);
    CHECK_FALSE(pts[0].error.empty());
}
