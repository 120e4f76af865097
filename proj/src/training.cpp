#include "rctsim/training.hpp"

#include <cmath>

namespace rctsim {

double csir_error_var(double pbar, int l_a_tau1) {
    return 1.0 / (1.0 + pbar * l_a_tau1);
}

double reverse_noise_var(double pbar, int l_b_tau) {
    return 1.0 / (2.0 * pbar * l_b_tau);
}

CsirEstimate forward_train_with_noise(const ChannelRealization& ch, double pbar,
                                      int l_a_tau1, const CVector& w) {
    if (!(pbar > 0.0)) throw std::invalid_argument("forward_train: pbar must be > 0");
    if (l_a_tau1 < 1) throw std::invalid_argument("forward_train: l_a_tau1 must be >= 1");
    const double energy = pbar * l_a_tau1;
    const double gain = std::sqrt(energy) / (1.0 + energy);
    CsirEstimate est;
    est.h_hat = gain * (std::sqrt(energy) * ch.h + w);
    est.error_var = csir_error_var(pbar, l_a_tau1);
    est.h_hat_norm = est.h_hat.norm();
    if (est.h_hat_norm == 0.0)
        throw DegenerateEstimateError("forward_train: zero channel estimate");
    est.v_hat = est.h_hat / est.h_hat_norm;
    return est;
}

CsirEstimate forward_train(const ChannelRealization& ch, double pbar, int l_a_tau1,
                           RngStream& rng) {
    CVector w(ch.h.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.next_cnormal();
    return forward_train_with_noise(ch, pbar, l_a_tau1, w);
}

SingularValueEstimate reverse_train_with_noise(const ChannelRealization& ch,
                                               const CVector& v_hat, double pbar,
                                               int l_b_tau, double w_bar) {
    SingularValueEstimate est;
    est.noise_var = reverse_noise_var(pbar, l_b_tau);
    est.noise_realized = w_bar;
    est.sigma_hat = ch.h.dot(v_hat).real() + w_bar;
    return est;
}

SingularValueEstimate reverse_train(const ChannelRealization& ch, const CVector& v_hat,
                                    double pbar, int l_b_tau, RngStream& rng) {
    const double w_bar = std::sqrt(reverse_noise_var(pbar, l_b_tau)) * rng.next_normal();
    return reverse_train_with_noise(ch, v_hat, pbar, l_b_tau, w_bar);
}

SingularValueEstimate reverse_train_threeway(const CsirEstimate& csir,
                                             const ChannelRealization& ch, double pbar,
                                             int l_b_tau, RngStream& rng) {
    const CVector h_tilde = ch.h - csir.h_hat;
    const double w_bar = std::sqrt(reverse_noise_var(pbar, l_b_tau)) * rng.next_normal();
    SingularValueEstimate est;
    est.noise_realized = h_tilde.dot(csir.v_hat).real() + w_bar;
    est.noise_var = csir.error_var / 2.0 + reverse_noise_var(pbar, l_b_tau);
    est.sigma_hat = csir.h_hat_norm + est.noise_realized;
    return est;
}

SingularValueEstimate reverse_train_orthogonal(const ChannelRealization& ch, double pbar,
                                               int l_b_tau, RngStream& rng) {
    const double energy = pbar * l_b_tau;
    const double gain = std::sqrt(energy) / (1.0 + energy);
    double norm_sq = 0.0;
    for (Eigen::Index i = 0; i < ch.h.size(); ++i) {
        const Complex y = std::sqrt(energy) * ch.h[i] + rng.next_cnormal();
        norm_sq += std::norm(gain * y);
    }
    SingularValueEstimate est;
    est.sigma_hat = std::sqrt(norm_sq);
    est.noise_var = 0.0;  // no additive scalar noise channel in this baseline
    est.noise_realized = 0.0;
    return est;
}

CompositeChannelEstimate power_controlled_train_with_noise(const CVector& p_c,
                                                           double pbar, int l_a_tau2,
                                                           const CVector& w) {
    if (l_a_tau2 < 1)
        throw std::invalid_argument("power_controlled_train: l_a_tau2 must be >= 1");
    const double scale = 1.0 / std::sqrt(pbar * l_a_tau2);
    CompositeChannelEstimate est;
    est.p_hat = p_c + scale * w;
    est.cond_error_var = static_cast<double>(p_c.size()) / (pbar * l_a_tau2);
    return est;
}

CompositeChannelEstimate power_controlled_train(const CVector& p_c, double pbar,
                                                int l_a_tau2, RngStream& rng) {
    CVector w(p_c.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.next_cnormal();
    return power_controlled_train_with_noise(p_c, pbar, l_a_tau2, w);
}

}  // namespace rctsim
