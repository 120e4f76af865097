#include "rctsim/mc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace rctsim {

namespace {
constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile
}

void wilson_interval(std::uint64_t k, std::uint64_t n, double& lo, double& hi) {
    if (n == 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
    if (k == 0) lo = 0.0;
    if (k == n) hi = 1.0;
}

OutageEstimate merge(const OutageEstimate& a, const OutageEstimate& b) {
    OutageEstimate out = a;
    out.trials = a.trials + b.trials;
    out.outages = a.outages + b.outages;
    out.p_hat = out.trials ? static_cast<double>(out.outages) / out.trials : 0.0;
    wilson_interval(out.outages, out.trials, out.ci_low, out.ci_high);
    out.upper_bound_only = (out.outages == 0);
    if (a.scheme_label.empty()) out.scheme_label = b.scheme_label;
    if (a.pbar == 0.0) out.pbar = b.pbar;
    if (a.seed == 0) out.seed = b.seed;
    return out;
}

OutageEstimate run_bernoulli_blocks(
    const std::function<std::function<std::uint64_t(RngStream&, std::uint64_t)>(int)>&
        make_counter,
    std::uint64_t max_trials, double target_rel_ci, std::uint64_t seed, int workers) {
    if (max_trials < 1000)
        throw std::invalid_argument("run_bernoulli_blocks: max_trials must be >= 10^3");
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());

    const std::uint64_t n_blocks = (max_trials + kBlockTrials - 1) / kBlockTrials;
    auto block_len = [&](std::uint64_t b) {
        return (b + 1 == n_blocks) ? max_trials - b * kBlockTrials : kBlockTrials;
    };

    std::mutex mu;
    std::map<std::uint64_t, std::uint64_t> pending;  // block -> outage count
    std::uint64_t next_claim = 0;
    std::uint64_t next_commit = 0;
    std::uint64_t stop_after = n_blocks;  // commit blocks [0, stop_after)
    std::uint64_t acc_trials = 0, acc_outages = 0;

    // Early stopping is decided on the block-index-ordered prefix only, so
    // the result does not depend on worker count or completion order.
    auto commit_ready = [&]() {
        while (next_commit < stop_after) {
            auto it = pending.find(next_commit);
            if (it == pending.end()) break;
            acc_outages += it->second;
            acc_trials += block_len(next_commit);
            pending.erase(it);
            ++next_commit;
            if (target_rel_ci > 0.0 && acc_outages > 0) {
                double lo, hi;
                wilson_interval(acc_outages, acc_trials, lo, hi);
                const double p = static_cast<double>(acc_outages) / acc_trials;
                if (0.5 * (hi - lo) < target_rel_ci * p) {
                    stop_after = next_commit;
                    pending.clear();
                }
            }
        }
    };

    auto worker_fn = [&](int worker_idx) {
        auto counter = make_counter(worker_idx);
        while (true) {
            std::uint64_t b;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_claim >= stop_after) return;
                b = next_claim++;
            }
            RngStream stream(seed, b);
            const std::uint64_t count = counter(stream, block_len(b));
            {
                std::lock_guard<std::mutex> lock(mu);
                if (b < stop_after) {
                    pending.emplace(b, count);
                    commit_ready();
                }
            }
        }
    };

    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(worker_fn, w);
    worker_fn(0);
    for (auto& t : threads) t.join();

    {
        std::lock_guard<std::mutex> lock(mu);
        commit_ready();
    }

    OutageEstimate est;
    est.trials = acc_trials;
    est.outages = acc_outages;
    est.p_hat = acc_trials ? static_cast<double>(acc_outages) / acc_trials : 0.0;
    wilson_interval(acc_outages, acc_trials, est.ci_low, est.ci_high);
    est.seed = seed;
    est.upper_bound_only = (acc_outages == 0);
    return est;
}

OutageEstimate estimate_outage(Scheme scheme, const SystemConfig& cfg,
                               const PowerPolicy& policy, double pbar,
                               std::uint64_t max_trials, double target_rel_ci,
                               std::uint64_t seed, int workers) {
    auto make_counter = [&](int) {
        return [runner = TrialRunner(scheme, cfg, policy, pbar)](
                   RngStream& rng, std::uint64_t n) mutable {
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < n; ++i)
                if (runner.run(rng).outage) ++count;
            return count;
        };
    };
    OutageEstimate est =
        run_bernoulli_blocks(make_counter, max_trials, target_rel_ci, seed, workers);
    est.pbar = pbar;
    est.scheme_label = scheme_output_label(scheme);
    return est;
}

OutageEstimate estimate_outage(Scheme scheme, const SystemConfig& cfg, double pbar,
                               std::uint64_t max_trials, double target_rel_ci,
                               std::uint64_t seed, int workers) {
    const PowerPolicy policy =
        (scheme == Scheme::perfect_csit)
            ? make_perfect_csit_policy(cfg, pbar)
            : calibrate(cfg, pbar, model_for_scheme(scheme));
    return estimate_outage(scheme, cfg, policy, pbar, max_trials, target_rel_ci, seed,
                           workers);
}

std::vector<SweepPoint> sweep(Scheme scheme, const SystemConfig& cfg,
                              const std::vector<double>& pbar_grid,
                              std::uint64_t max_trials, double target_rel_ci,
                              std::uint64_t seed, int workers) {
    if (pbar_grid.empty()) throw std::invalid_argument("sweep: empty pbar grid");
    std::vector<SweepPoint> out;
    for (double pbar : pbar_grid) {
        SweepPoint pt;
        pt.pbar = pbar;
        try {
            pt.estimate = estimate_outage(scheme, cfg, pbar, max_trials, target_rel_ci,
                                          seed, workers);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace rctsim
