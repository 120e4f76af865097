#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "rctsim/types.hpp"

namespace rctsim {

// Counter-based stream RNG (Philox4x64-10). The (seed, stream_id) pair is
// the cipher key, so distinct stream ids yield independent sequences and a
// stream can be handed to any worker without coordination. Identical
// (seed, stream_id) reproduces an identical sample sequence bit for bit.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{seed, stream_id}, seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        if (buf_pos_ == 4) refill();
        return buf_[buf_pos_++];
    }

    /// Uniform double in (0, 1]; never returns 0, so log() is safe.
    double next_double() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double();
        const double u2 = next_double();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * kPi * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    /// CN(0, 1): real and imaginary parts each N(0, 1/2).
    Complex next_cnormal() {
        const double a = next_normal();
        const double b = next_normal();
        return Complex(kInvSqrt2 * a, kInvSqrt2 * b);
    }

    /// Exponential(1) variate.
    double next_exponential() { return -std::log(next_double()); }

  private:
    static constexpr double kPi = 3.14159265358979323846;
    static constexpr double kInvSqrt2 = 0.70710678118654752440;

    // Philox4x64-10 round constants (Random123).
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
        const unsigned __int128 p =
            static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    void refill() {
        std::array<std::uint64_t, 4> c = ctr_;
        std::array<std::uint64_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, c[0], hi0, lo0);
            mulhilo(kMul1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        buf_ = c;
        buf_pos_ = 0;
        if (++ctr_[0] == 0)
            if (++ctr_[1] == 0)
                if (++ctr_[2] == 0) ++ctr_[3];
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> ctr_{0, 0, 0, 0};
    std::array<std::uint64_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

}  // namespace rctsim
