#ifndef LPSUR_RNG_HPP
#define LPSUR_RNG_HPP

#include <cmath>
#include <cstdint>

namespace lpsur {

// Seedable counter-based generator (PCG64, XSL-RR 128/64 output).
// A (seed, stream) pair fully determines the draw sequence; distinct
// streams under one seed select distinct LCG increments, so Monte Carlo
// trials can be keyed as (master_seed, trial_index) without coordination.
class RngState {
 public:
  using result_type = std::uint64_t;

  explicit RngState(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), state_(0), has_spare_(false), spare_(0.0) {
    const std::uint64_t mixed = mix64(stream + 0x6a09e667f3bcc909ULL);
    inc_ = ((static_cast<u128>(mixed) << 64 | mix64(mixed)) << 1) | 1u;
    step();
    state_ += static_cast<u128>(mix64(seed)) << 64 | mix64(seed ^ 0x9e3779b97f4a7c15ULL);
    step();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() {
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // UniformRandomBitGenerator interface.
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia polar; the spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMult =
      (static_cast<u128>(0x2360ed051fc65da4ULL) << 64) | 0x4385df649fcccf5dULL;

  static std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  void step() { state_ = state_ * kMult + inc_; }

  std::uint64_t seed_;
  std::uint64_t stream_;
  u128 state_;
  u128 inc_;
  bool has_spare_;
  double spare_;
};

}  // namespace lpsur

#endif  // LPSUR_RNG_HPP
