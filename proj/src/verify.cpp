#include "rctsim/verify.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "rctsim/channel.hpp"
#include "rctsim/config.hpp"
#include "rctsim/power_control.hpp"
#include "rctsim/rng.hpp"

namespace rctsim {

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

}  // namespace

std::vector<CheckResult> check_lemma1_residuals(std::uint64_t seed, double kappa_scale) {
    std::vector<CheckResult> results;
    for (int r : {2, 3, 5}) {
        std::vector<double> s_values = {1.0};
        if (r - 1 > 1) s_values.push_back(r - 1.0);
        std::vector<double> l_values = {2.0};
        if (r != 2) l_values.push_back(static_cast<double>(r));
        for (double s : s_values) {
            for (double l : l_values) {
                for (double pbar : {1e2, 1e4, 1e6}) {
                    SystemConfig cfg;
                    cfg.r = r;
                    cfg.L_c = 40;
                    cfg.L_B_tau = 1;
                    cfg.s = s;
                    cfg.l = l;
                    cfg.g_m = 0.5;
                    cfg.seed = seed;
                    std::ostringstream name;
                    name << "lemma1 residual r=" << r << " s=" << s << " l=" << l
                         << " pbar=" << pbar;
                    CheckResult res;
                    res.name = name.str();
                    try {
                        PowerPolicy policy =
                            calibrate(cfg, pbar, SigmaHatModel::perfect_csir);
                        policy.kappa *= kappa_scale;
                        const SigmaHatLaw law =
                            sigma_hat_law(cfg, pbar, SigmaHatModel::perfect_csir);
                        const double ratio =
                            mc_average_power_is(policy, law, 1000000, seed + 1) /
                            policy.target_avg;
                        res.pass = std::abs(ratio - 1.0) <= 0.02;
                        std::ostringstream det;
                        det << "E[P]/pbar = " << ratio;
                        res.detail = det.str();
                    } catch (const std::exception& e) {
                        res.pass = false;
                        res.detail = e.what();
                    }
                    results.push_back(std::move(res));
                }
            }
        }
    }
    return results;
}

CheckResult check_kappa_exponent(std::uint64_t seed) {
    SystemConfig cfg;
    cfg.r = 3;
    cfg.L_c = 40;
    cfg.L_B_tau = 1;
    cfg.s = 1.0;
    cfg.l = 2.0;
    cfg.g_m = 0.5;
    cfg.seed = seed;
    std::vector<double> log_p, log_k;
    CheckResult res;
    res.name = "lemma1 kappa exponent (r=3 s=1 l=2 g=0.5)";
    try {
        for (double pbar : {1e2, 1e3, 1e4, 1e5, 1e6}) {
            const PowerPolicy policy = calibrate(cfg, pbar, SigmaHatModel::perfect_csir);
            log_p.push_back(std::log(pbar));
            log_k.push_back(std::log(policy.kappa));
        }
        const double slope = fit_slope(log_p, log_k);
        const double expected = 1.0 - cfg.g_m / cfg.alpha(Scheme::perfect_csir_genie);
        res.pass = std::abs(slope - expected) <= 0.03;
        std::ostringstream det;
        det << "slope = " << slope << ", expected " << expected;
        res.detail = det.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

std::vector<CheckResult> check_lemma2_moments(std::uint64_t seed) {
    const int r = 3;
    const int l_a_tau2 = 1;
    const std::vector<double> pbars = {1e2, 1e3, 1e4, 1e5};
    const std::uint64_t samples = 1000000;

    // log E||p_err||^{2z} per pbar for z = 1, 2, 3
    std::vector<std::vector<double>> log_moments(3);
    RngStream rng(seed, 0x1E44A2ull);
    for (double pbar : pbars) {
        const double scale_sq = 1.0 / (pbar * l_a_tau2);
        double m1 = 0, m2 = 0, m3 = 0;
        for (std::uint64_t i = 0; i < samples; ++i) {
            double w_norm_sq = 0.0;
            for (int k = 0; k < r; ++k) w_norm_sq += rng.next_exponential();
            const double e = scale_sq * w_norm_sq;  // ||p_err||^2
            m1 += e;
            m2 += e * e;
            m3 += e * e * e;
        }
        log_moments[0].push_back(std::log(m1 / samples));
        log_moments[1].push_back(std::log(m2 / samples));
        log_moments[2].push_back(std::log(m3 / samples));
    }
    std::vector<double> log_p;
    for (double pbar : pbars) log_p.push_back(std::log(pbar));

    std::vector<CheckResult> results;
    for (int z = 1; z <= 3; ++z) {
        const double slope = fit_slope(log_p, log_moments[z - 1]);
        CheckResult res;
        res.name = "lemma2 moment slope z=" + std::to_string(z);
        res.pass = std::abs(slope + z) <= 0.05;
        std::ostringstream det;
        det << "slope = " << slope << ", expected " << -z;
        res.detail = det.str();
        results.push_back(std::move(res));
    }
    return results;
}

CheckResult check_lemma3_bound(int exponent_offset) {
    CheckResult res;
    res.name = "lemma3 chi-square tail bound sweep";
    res.pass = true;
    const int n_z = 60;
    const double z_lo = 1e-4, z_hi = 10.0;
    for (int r = 1; r <= 8; ++r) {
        for (int i = 0; i < n_z; ++i) {
            const double z =
                z_lo * std::pow(z_hi / z_lo, static_cast<double>(i) / (n_z - 1));
            const double cdf = chi_square_cdf(r, z);
            const double a = r + exponent_offset;
            const double bound =
                std::exp(a * std::log(z) - std::lgamma(a + 1.0));
            if (cdf > bound) {
                res.pass = false;
                std::ostringstream det;
                det << "first violation at r=" << r << " z=" << z << " (cdf=" << cdf
                    << " > bound=" << bound << ")";
                res.detail = det.str();
                return res;
            }
        }
    }
    res.detail = "cdf <= z^r/r! at all 480 sweep points";
    return res;
}

CheckResult check_lemma4_bound(std::uint64_t seed, std::uint64_t trials) {
    const int r = 3;
    const double pbar = 100.0;
    const double noise_std = std::sqrt(1.0 / (2.0 * pbar));
    RngStream rng(seed, 0x1E44A4ull);
    std::uint64_t violations = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        double sigma_sq = 0.0;
        for (int k = 0; k < 2 * r; ++k) {
            const double z = rng.next_normal();
            sigma_sq += 0.5 * z * z;
        }
        const double sigma = std::sqrt(sigma_sq);
        const double w_bar = noise_std * rng.next_normal();
        const double sigma_hat = sigma + w_bar;
        const double margin = (sigma + std::abs(w_bar)) - std::abs(sigma_hat);
        if (margin < 0.0) {
            ++violations;
            worst = std::min(worst, margin);
        }
    }
    CheckResult res;
    res.name = "lemma4 |sigma_hat| <= sigma + |w_bar| (" + std::to_string(trials) +
               " trials)";
    res.pass = violations == 0;
    std::ostringstream det;
    if (violations == 0)
        det << "no violation";
    else
        det << violations << " violations, worst margin " << worst;
    res.detail = det.str();
    return res;
}

std::vector<CheckResult> run_verification(std::uint64_t seed) {
    std::vector<CheckResult> all = check_lemma1_residuals(seed);
    all.push_back(check_kappa_exponent(seed));
    for (auto& r : check_lemma2_moments(seed)) all.push_back(std::move(r));
    all.push_back(check_lemma3_bound());
    all.push_back(check_lemma4_bound(seed));
    return all;
}

}  // namespace rctsim
