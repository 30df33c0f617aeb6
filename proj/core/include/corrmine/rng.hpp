#pragma once

#include <cmath>
#include <cstdint>

namespace corrmine {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based splitmix64 generator. Every draw is a pure function of
/// (seed, stream, counter), so substreams can be consumed in any order and
/// from any thread without changing the values they produce.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  class Stream {
   public:
    Stream(std::uint64_t seed, std::uint64_t stream_index)
        : key_(detail::mix64(seed + detail::kGolden * detail::mix64(
                                        stream_index + detail::kGolden))) {}

    std::uint64_t next_u64() {
      counter_ += detail::kGolden;
      return detail::mix64(key_ + counter_);
    }

    /// Uniform draw strictly inside (0, 1).
    double next_unit() {
      return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second member of each pair is
    /// cached, so a stream yields a fixed sequence regardless of call sites.
    double next_normal() {
      if (have_spare_) {
        have_spare_ = false;
        return spare_;
      }
      double u1 = next_unit();
      double u2 = next_unit();
      double radius = std::sqrt(-2.0 * std::log(u1));
      double angle = 6.283185307179586476925286766559 * u2;
      spare_ = radius * std::sin(angle);
      have_spare_ = true;
      return radius * std::cos(angle);
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
  };

  Stream stream(std::uint64_t index) const { return Stream(seed_, index); }

  std::uint64_t seed() const { return seed_; }

  /// Independent child seed, e.g. one per Monte Carlo trial.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::mix64(seed ^ detail::mix64(salt * detail::kGolden + 0x632be59bd9b4e019ULL));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace corrmine
