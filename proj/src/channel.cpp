#include "rctsim/channel.hpp"

#include <cmath>
#include <limits>

namespace rctsim {

ChannelRealization sample_channel(int r, RngStream& rng) {
    if (r < 1) throw ConfigError("sample_channel: antenna count must be >= 1");
    ChannelRealization ch;
    ch.h.resize(r);
    for (int i = 0; i < r; ++i) ch.h[i] = rng.next_cnormal();
    ch.sigma = ch.h.norm();
    if (ch.sigma == 0.0)
        throw DegenerateEstimateError("sample_channel: zero channel vector");
    ch.v = ch.h / ch.sigma;
    return ch;
}

namespace {

// Lower regularized gamma by its power series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by modified Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_q: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_cdf(int r, double z) {
    if (r < 1) throw std::invalid_argument("chi_square_cdf: r must be >= 1");
    if (z < 0.0) throw std::invalid_argument("chi_square_cdf: z must be >= 0");
    return regularized_gamma_p(static_cast<double>(r), z);
}

double chi_square_tail_bound(int r, double z) {
    if (r < 1) throw std::invalid_argument("chi_square_tail_bound: r must be >= 1");
    if (z < 0.0) throw std::invalid_argument("chi_square_tail_bound: z must be >= 0");
    if (z == 0.0) return 0.0;
    return std::exp(static_cast<double>(r) * std::log(z) -
                    std::lgamma(static_cast<double>(r) + 1.0));
}

double scaled_chi_pdf(int r, double scale, double y) {
    if (y <= 0.0) return 0.0;
    const double t = y / scale;
    // f(t) = 2 t^{2r-1} e^{-t^2} / (r-1)!, then scale by 1/c.
    const double log_f = std::log(2.0) + (2.0 * r - 1.0) * std::log(t) - t * t -
                         std::lgamma(static_cast<double>(r));
    return std::exp(log_f) / scale;
}

}  // namespace rctsim
