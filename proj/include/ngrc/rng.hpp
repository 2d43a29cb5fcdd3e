#pragma once

#include <cstdint>
#include <vector>

namespace ngrc {

/// Counter-based pseudo-random generator: SplitMix64 run in counter mode.
///
/// Output n of stream `key` is splitmix64_mix(key + (n+1) * GOLDEN). Streams
/// for sub-tasks (shots, channels) are derived with `derive`, so any draw is
/// a pure function of (seed, path, draw index). This makes generation
/// order-independent and reproducible across implementations; the exact
/// constants are part of the file-format-level contract and documented in
/// the README.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Child stream key for a tagged sub-task.
  static std::uint64_t derive(std::uint64_t key, std::uint64_t tag) {
    return mix(key ^ (tag * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull));
  }

  CounterRng child(std::uint64_t tag) const { return CounterRng(derive(key_, tag)); }

  std::uint64_t next_u64() {
    ctr_ += 0x9E3779B97F4A7C15ull;
    return mix(key_ + ctr_);
  }

  /// Uniform in (0,1]; never 0, so log() is safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; one pair of uniforms per two calls.
  double next_gaussian();

  /// Student-t with integer dof nu >= 1 (ratio of a normal and a chi).
  /// When normalize_variance and nu > 2, scaled to unit variance.
  double next_student_t(int nu, bool normalize_variance = true);

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ngrc
