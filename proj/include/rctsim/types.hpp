#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rctsim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Link schemes simulated per coherence block.
enum class Scheme {
    perfect_csir_genie,   // perfect CSIR, channel-dependent reverse training
    three_way,            // noisy CSIR + noisy CSIT, three training phases
    orthogonal_baseline,  // channel-agnostic per-antenna reverse pilots
    perfect_csit,         // exact channel inversion comparator
};

std::string scheme_name(Scheme s);

// Output label; the simulated three-way outage is a surrogate lower-bound
// model (least-squares phase-III estimate), labeled as such in all outputs.
std::string scheme_output_label(Scheme s);

Scheme scheme_from_name(const std::string& name);

/// Configuration errors (bad file, parameter box violations). CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Power-policy calibration cannot satisfy the average-power constraint.
/// CLI exit code 4.
class CalibrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Zero-probability degenerate estimate (e.g. an exactly zero estimated
/// channel vector); surfaced rather than silently normalized.
class DegenerateEstimateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace rctsim
