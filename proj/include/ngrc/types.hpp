#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ngrc {

enum class Layout : std::uint32_t {
  RawMultiplexed = 0,
  PerQubitDemodulated = 1,
};

/// One shot's digitized in-phase/quadrature time series for one channel.
/// Samples are dimensionless ADC units, one entry per digitized time step.
struct IQTrace {
  std::vector<double> i;
  std::vector<double> q;

  IQTrace() = default;
  IQTrace(std::vector<double> i_, std::vector<double> q_);
  explicit IQTrace(std::size_t n) : i(n, 0.0), q(n, 0.0) {}

  std::size_t size() const { return i.size(); }
  std::complex<double> at(std::size_t n) const { return {i[n], q[n]}; }

  /// Throws on length mismatch or non-finite samples.
  void validate() const;
};

/// One readout measurement: one trace per qubit channel (or exactly one
/// raw multiplexed trace), plus the prepared-state label. Multi-qubit
/// labels pack one bit per qubit, LSB = qubit 1; single-qubit multi-class
/// labels are the class index.
struct Shot {
  std::vector<IQTrace> channels;
  std::uint64_t label = 0;

  std::size_t n_samples() const { return channels.empty() ? 0 : channels[0].size(); }
};

/// Labeled dataset: homogeneous shots plus channel/layout metadata.
struct ShotSet {
  std::vector<Shot> shots;
  std::uint32_t n_qubits = 1;
  std::uint32_t n_classes = 2;  // per qubit
  Layout layout = Layout::PerQubitDemodulated;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return shots.size(); }
  std::size_t n_channels() const { return shots.empty() ? 0 : shots[0].channels.size(); }
  std::size_t n_samples() const { return shots.empty() ? 0 : shots[0].n_samples(); }

  /// Highest valid packed label value + 1.
  std::uint64_t label_space() const;

  /// Checks all container invariants: homogeneous layout/shape, finite
  /// samples, labels in range, and meta-declared per-configuration counts
  /// (key "shots_per_config") against actual counts when present.
  void validate() const;
};

/// Bit of `label` for a given qubit index (0-based).
inline int label_bit(std::uint64_t label, int qubit) {
  return static_cast<int>((label >> qubit) & 1ull);
}

}  // namespace ngrc
