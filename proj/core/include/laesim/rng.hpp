#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace laesim {

/// Deterministic counter-based random stream. A stream is derived from a
/// master seed plus a list of labels (slot, satellite, fleet, LAV, ...);
/// identical labels reproduce the identical draw sequence and distinct
/// labels give independent streams. The generator and the normal transform
/// are fixed here rather than taken from <random> so that runs are
/// bit-reproducible across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels)
      : state_(scramble(master_seed + kGamma)) {
    for (std::uint64_t l : labels) {
      state_ = scramble(state_ ^ scramble(l + kGamma));
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly-symmetric complex normal, unit variance (E|z|^2 = 1).
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr double kInvSqrt2 = 0.7071067811865475244;

  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return scramble(state_);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace laesim
