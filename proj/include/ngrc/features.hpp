#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "ngrc/config.hpp"
#include "ngrc/types.hpp"

namespace ngrc {

/// Describes one NG-RC feature construction.
///
/// Linear features are the window means of every channel, interleaved
/// (I_0, Q_0, I_1, Q_1, ...) channel by channel. Nonlinear features are all
/// monomials of the linear features with repetition, in graded lexicographic
/// order: quadratic pairs (a <= b), then cubic triples (a <= b <= c). The
/// global canonical index space is [constant?, linear..., quadratic...,
/// cubic...]; term_subset holds indices into that space.
struct FeatureSpec {
  int degree = 1;  // 1, 2 or 3
  std::size_t window_w = 1;
  bool include_constant = true;
  std::vector<std::size_t> masks;  // per-channel end_step; for complexity
                                   // accounting also the retained lengths
  bool cross_qubit = true;
  int neighbor_radius = -1;  // >=0 limits monomial mixing to nearby channels
  std::optional<std::vector<std::size_t>> term_subset;
  Layout layout = Layout::PerQubitDemodulated;

  void validate() const;

  Config to_config() const;
  static FeatureSpec from_config(const Config& cfg);
};

/// Windows kept for a masked channel: ceil(end_step / w). Windows wholly
/// past the mask end are dropped from the feature set.
std::size_t active_windows(std::size_t end_step, std::size_t w);

/// Number of linear features for a spec applied to a given channel/sample
/// shape (2 per active window per channel).
std::size_t linear_feature_count(const FeatureSpec& spec, std::size_t n_channels,
                                 std::size_t n_samples);

/// All monomials of degree 2..degree over n_lin variables, with repetition,
/// graded lexicographic. Each entry is the sorted variable index multiset.
std::vector<std::vector<std::uint32_t>> enumerate_monomials(std::size_t n_lin, int degree);

/// Total feature count before any term_subset reduction.
std::size_t full_feature_count(const FeatureSpec& spec, std::size_t n_channels,
                               std::size_t n_samples);

std::vector<double> build_features(const Shot& shot, const FeatureSpec& spec);

/// Column m holds shot m's features; N_f x M.
Eigen::MatrixXd build_feature_matrix(const ShotSet& set, const FeatureSpec& spec,
                                     int threads = 0);

struct Complexity {
  std::uint64_t parameters = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t activations = 0;
};

/// Evaluation-cost accounting. Demodulation is charged 4 real
/// multiplications per retained sample (per-channel mask end), zero for the
/// RawMultiplexed layout; each quadratic monomial costs one multiplication
/// and each cubic one more (quadratic intermediates are reused); every
/// weight costs one multiplication per model, constant included. Window
/// divisions fold into the weights and are not charged. With a term_subset,
/// only products actually needed are charged, including quadratic
/// intermediates required by retained cubics.
Complexity count_complexity(const FeatureSpec& spec, int n_models);

}  // namespace ngrc
