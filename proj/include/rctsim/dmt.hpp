#pragma once

#include <string>
#include <vector>

#include "rctsim/config.hpp"
#include "rctsim/types.hpp"

namespace rctsim {

/// Diversity order of the channel-dependent reverse-training scheme with
/// perfect CSIR: d = r (min{l, s+1} - g_m / alpha), alpha = (L_c - L_B) / L_c.
/// Throws std::domain_error outside the feasible box or when d < 0 (negative
/// orders are rejected, not clipped).
double dmt_perfect_csir(int r, int L_c, int L_B_tau, double s, double l, double g_m);

/// Diversity order with three-way training:
/// d = r (min{l, s} + 1 - g_m / alpha), alpha counting all three phases.
double dmt_threeway(int r, int L_c, int L_B_tau, int L_A_tau1, int L_A_tau2, double s,
                    double l, double g_m);

struct OrthogonalDmt {
    double d;
    int r_used;
};

/// Orthogonal reverse-training baseline with antenna switch-off: maximizes
/// r' (2 - g_m L_c / (L_c - r' L_B)) over feasible r' in {2..r}, ties toward
/// larger r'. Throws std::domain_error when no r' is feasible.
OrthogonalDmt dmt_orthogonal(int r, int L_c, int L_B_tau, double g_m);

struct DmtPoint {
    std::string scheme;
    double g_m;
    double d;
    int r_used;
    double alpha;
};

/// Analytic curve over the feasible part of a g_m grid.
std::vector<DmtPoint> dmt_curve(Scheme scheme, const SystemConfig& cfg,
                                const std::vector<double>& g_grid);

struct SlopeFit {
    double slope;
    double std_error;
    int points_used;
};

struct OutagePoint {
    double pbar;
    std::uint64_t trials;
    std::uint64_t outages;
    double p_hat;
    double ci_low;
    double ci_high;
};

/// Least-squares slope of -log10(P_out) against log10(pbar). Points with a
/// zero CI lower bound or relative CI width >= 30% are excluded; fewer than
/// three usable points is an error. Finite-SNR slopes are reported, never
/// asserted against asymptotic orders.
SlopeFit empirical_slope(const std::vector<OutagePoint>& points);

}  // namespace rctsim
