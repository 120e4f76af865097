#include "rctsim/dmt.hpp"

#include <algorithm>
#include <cmath>

namespace rctsim {

double dmt_perfect_csir(int r, int L_c, int L_B_tau, double s, double l, double g_m) {
    if (!(s >= 1.0) || !(s < r))
        throw std::domain_error("dmt_perfect_csir: need 1 <= s < r");
    if (l < 0.0 || l > r + 1.0)
        throw std::domain_error("dmt_perfect_csir: need 0 <= l <= r+1");
    if (L_c <= L_B_tau) throw std::domain_error("dmt_perfect_csir: need L_c > L_B_tau");
    const double alpha = static_cast<double>(L_c - L_B_tau) / L_c;
    if (!(g_m >= 0.0) || !(g_m < alpha))
        throw std::domain_error("dmt_perfect_csir: need 0 <= g_m < alpha");
    const double d = r * (std::min(l, s + 1.0) - g_m / alpha);
    if (d < 0.0) throw std::domain_error("dmt_perfect_csir: negative diversity order");
    return d;
}

double dmt_threeway(int r, int L_c, int L_B_tau, int L_A_tau1, int L_A_tau2, double s,
                    double l, double g_m) {
    if (!(s >= 1.0) || !(s < r)) throw std::domain_error("dmt_threeway: need 1 <= s < r");
    if (l < 0.0 || l > r) throw std::domain_error("dmt_threeway: need 0 <= l <= r");
    const int overhead = L_B_tau + L_A_tau1 + L_A_tau2;
    if (L_c <= overhead) throw std::domain_error("dmt_threeway: training exceeds L_c");
    const double alpha = static_cast<double>(L_c - overhead) / L_c;
    if (!(g_m >= 0.0) || !(g_m < alpha))
        throw std::domain_error("dmt_threeway: need 0 <= g_m < alpha");
    const double d = r * (std::min(l, s) + 1.0 - g_m / alpha);
    if (d < 0.0) throw std::domain_error("dmt_threeway: negative diversity order");
    return d;
}

OrthogonalDmt dmt_orthogonal(int r, int L_c, int L_B_tau, double g_m) {
    if (L_c <= 2 * L_B_tau)
        throw std::domain_error("dmt_orthogonal: need L_c > 2 L_B_tau");
    if (g_m < 0.0) throw std::domain_error("dmt_orthogonal: need g_m >= 0");
    OrthogonalDmt best{-1.0, 0};
    for (int ru = 2; ru <= r; ++ru) {
        const double alpha = static_cast<double>(L_c - ru * L_B_tau) / L_c;
        if (!(alpha > 0.0) || !(g_m < alpha)) continue;
        const double d = ru * (2.0 - g_m / alpha);
        if (d >= best.d) best = {d, ru};  // ties toward larger r'
    }
    if (best.r_used == 0)
        throw std::domain_error("dmt_orthogonal: no feasible antenna count at g_m = " +
                                std::to_string(g_m));
    return best;
}

std::vector<DmtPoint> dmt_curve(Scheme scheme, const SystemConfig& cfg,
                                const std::vector<double>& g_grid) {
    std::vector<DmtPoint> out;
    for (double g : g_grid) {
        DmtPoint pt;
        pt.scheme = scheme_name(scheme);
        pt.g_m = g;
        try {
            switch (scheme) {
                case Scheme::perfect_csir_genie:
                    pt.d = dmt_perfect_csir(cfg.r, cfg.L_c, cfg.L_B_tau, cfg.s, cfg.l, g);
                    pt.r_used = cfg.r;
                    pt.alpha = cfg.alpha(Scheme::perfect_csir_genie);
                    break;
                case Scheme::three_way:
                    pt.d = dmt_threeway(cfg.r, cfg.L_c, cfg.L_B_tau, cfg.L_A_tau1,
                                        cfg.L_A_tau2, cfg.s, cfg.l, g);
                    pt.r_used = cfg.r;
                    pt.alpha = cfg.alpha(Scheme::three_way);
                    break;
                case Scheme::orthogonal_baseline: {
                    const OrthogonalDmt o = dmt_orthogonal(cfg.r, cfg.L_c, cfg.L_B_tau, g);
                    pt.d = o.d;
                    pt.r_used = o.r_used;
                    pt.alpha = static_cast<double>(cfg.L_c - o.r_used * cfg.L_B_tau) / cfg.L_c;
                    break;
                }
                case Scheme::perfect_csit:
                    throw std::domain_error("no analytic DMT curve for perfect_csit");
            }
        } catch (const std::domain_error&) {
            continue;  // infeasible grid point: curve ends here
        }
        out.push_back(pt);
    }
    return out;
}

SlopeFit empirical_slope(const std::vector<OutagePoint>& points) {
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        if (p.outages == 0 || p.ci_low <= 0.0) continue;
        if (!(p.p_hat > 0.0)) continue;
        if ((p.ci_high - p.ci_low) / p.p_hat >= 0.30) continue;
        xs.push_back(std::log10(p.pbar));
        ys.push_back(-std::log10(p.p_hat));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 3)
        throw std::runtime_error("empirical_slope: need >= 3 usable points, have " +
                                 std::to_string(n));
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::runtime_error("empirical_slope: degenerate abscissa");
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double resid = ys[i] - my - slope * (xs[i] - mx);
        ssr += resid * resid;
    }
    SlopeFit fit;
    fit.slope = slope;
    fit.std_error = (n > 2) ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    fit.points_used = n;
    return fit;
}

}  // namespace rctsim
