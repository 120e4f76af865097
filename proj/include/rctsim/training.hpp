#pragma once

#include "rctsim/channel.hpp"
#include "rctsim/rng.hpp"
#include "rctsim/types.hpp"

namespace rctsim {

/// Receiver-side channel estimate from phase-I forward training.
struct CsirEstimate {
    CVector h_hat;      // per-entry MMSE estimate of h
    double error_var;   // per-entry error variance, 1 / (1 + pbar * L_A_tau1)
    CVector v_hat;      // h_hat / ||h_hat||_2
    double h_hat_norm;  // ||h_hat||_2
};

/// Transmitter-side singular-value estimate from reverse training.
/// sigma_hat may be negative; the power policy's threshold branch absorbs
/// low or negative estimates.
struct SingularValueEstimate {
    double sigma_hat;
    double noise_var;       // variance of the effective scalar noise
    double noise_realized;  // the realized effective noise of this draw
};

/// Receiver-side composite-channel estimate from phase-III training.
/// The estimator is the least-squares rule p_hat = y_tilde, whose
/// conditional error variance is the constant r / (pbar * L_A_tau2).
struct CompositeChannelEstimate {
    CVector p_hat;
    double cond_error_var;
};

double csir_error_var(double pbar, int l_a_tau1);
double reverse_noise_var(double pbar, int l_b_tau);

/// Phase I: y = h sqrt(pbar L) + w, per-entry MMSE estimate.
/// The *_with_noise form takes the noise realization explicitly (tests force
/// it to zero); the rng form samples w with i.i.d. CN(0,1) entries.
CsirEstimate forward_train_with_noise(const ChannelRealization& ch, double pbar,
                                      int l_a_tau1, const CVector& w);
CsirEstimate forward_train(const ChannelRealization& ch, double pbar, int l_a_tau1,
                           RngStream& rng);

/// Phase II with a beamformed pilot along v_hat:
/// sigma_hat = Re{h^H v_hat} + w_bar, w_bar ~ N(0, 1/(2 pbar L)).
SingularValueEstimate reverse_train_with_noise(const ChannelRealization& ch,
                                               const CVector& v_hat, double pbar,
                                               int l_b_tau, double w_bar);
SingularValueEstimate reverse_train(const ChannelRealization& ch, const CVector& v_hat,
                                    double pbar, int l_b_tau, RngStream& rng);

/// Phase II under noisy CSIR: sigma_hat = ||h_hat|| + w_eff with
/// w_eff = Re{h_tilde^H v_hat} + w_bar recorded in noise_realized.
SingularValueEstimate reverse_train_threeway(const CsirEstimate& csir,
                                             const ChannelRealization& ch, double pbar,
                                             int l_b_tau, RngStream& rng);

/// Channel-agnostic baseline: r orthogonal pilot slots (r * l_b_tau symbols
/// total), per-entry MMSE estimates at node A, sigma_hat = ||h_hat_A|| >= 0.
SingularValueEstimate reverse_train_orthogonal(const ChannelRealization& ch, double pbar,
                                               int l_b_tau, RngStream& rng);

/// Phase III: y_tilde = p_c + w / sqrt(pbar L), least-squares estimate.
CompositeChannelEstimate power_controlled_train_with_noise(const CVector& p_c,
                                                           double pbar, int l_a_tau2,
                                                           const CVector& w);
CompositeChannelEstimate power_controlled_train(const CVector& p_c, double pbar,
                                                int l_a_tau2, RngStream& rng);

}  // namespace rctsim
