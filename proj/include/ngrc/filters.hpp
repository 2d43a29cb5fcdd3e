#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ngrc/types.hpp"

namespace ngrc {

/// Unweighted complex sum of a trace over [begin, end).
std::complex<double> boxcar_filter(const IQTrace& trace, std::size_t begin, std::size_t end);

struct MatchedFilterWeights {
  std::vector<std::complex<double>> k;

  void save(const std::string& path) const;  // "MFW1" binary record
  static MatchedFilterWeights load(const std::string& path);
};

/// Per-step SNR-optimal weights for two-class discrimination:
///   k_n = <[S0]_n - [S1]_n> / (var([S0]_n) + var([S1]_n))
/// with complex means and real total variances var(I) + var(Q), population
/// (1/M) normalization. Throws naming the step if a denominator is zero.
MatchedFilterWeights matched_filter_weights(std::span<const IQTrace> ground_shots,
                                            std::span<const IQTrace> excited_shots);

/// Weighted complex sum: sum_n k_n * (I_n + i Q_n).
std::complex<double> matched_filter_apply(const IQTrace& trace,
                                          const MatchedFilterWeights& weights);

/// 1-D discriminator in the complex plane: filtered values are projected
/// onto an axis (through the class means by default, Fisher direction on
/// request) and cut at a threshold found by grid search over the projected
/// training values (101 evenly spaced candidates), maximizing training
/// fidelity; ties go to the smallest threshold.
struct ComplexDiscriminator {
  std::complex<double> axis;  // unit vector; project(z) = Re(conj(axis) * z)
  double threshold = 0.0;
  double train_fidelity = 0.0;

  double project(std::complex<double> z) const;
  int decode(std::complex<double> z) const;  // class 1 iff projection > threshold
};

ComplexDiscriminator fit_complex_discriminator(std::span<const std::complex<double>> values,
                                               std::span<const int> labels,
                                               bool fisher_axis = false);

}  // namespace ngrc
