#pragma once

#include "rctsim/rng.hpp"
#include "rctsim/types.hpp"

namespace rctsim {

/// One Rayleigh block-fading realization: h = sigma * v with sigma = ||h||_2
/// and v the unit channel direction.
struct ChannelRealization {
    CVector h;     // i.i.d. CN(0,1) entries
    double sigma;  // ||h||_2
    CVector v;     // h / ||h||_2
};

/// Draws an r-antenna channel with i.i.d. CN(0,1) entries.
/// Throws ConfigError for r == 0 and DegenerateEstimateError on the
/// measure-zero event h == 0.
ChannelRealization sample_channel(int r, RngStream& rng);

/// Pr{sigma^2 < z} for sigma^2 the squared norm of r i.i.d. CN(0,1) entries:
/// the regularized lower incomplete gamma P(r, z). Monotone in z, -> 1.
double chi_square_cdf(int r, double z);

/// Upper bound z^r / r! on chi_square_cdf(r, z).
double chi_square_tail_bound(int r, double z);

// Regularized incomplete gamma functions for real a > 0 (series for
// x < a + 1, Lentz continued fraction otherwise).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Density of scale * ||h||_2 at y (chi with 2r real degrees of freedom in
/// the unit-per-complex-entry convention); 0 for y <= 0.
double scaled_chi_pdf(int r, double scale, double y);

}  // namespace rctsim
