#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ngrc/features.hpp"
#include "ngrc/types.hpp"

namespace ngrc {

enum class DecodeKind : std::uint32_t { Threshold = 0, Argmax = 1 };

/// Trained readout: weights, decode rule and the feature spec that produced
/// the inputs. d = 1 for Threshold, d = n_classes for Argmax.
struct Discriminator {
  Eigen::MatrixXd w_out;  // d x N_f
  FeatureSpec spec;
  DecodeKind decode_kind = DecodeKind::Threshold;
  double threshold = 0.5;
  double alpha = 0.0;
  int target_qubit = -1;

  void save(const std::string& path) const;  // "DISC" binary record
  static Discriminator load(const std::string& path);
};

/// Closed-form ridge regression W = Y X^T (X X^T + alpha I)^-1, solved via
/// a symmetric factorization of the normal equations (no explicit inverse).
/// features is N_f x M, targets d x M. Throws Err::SingularSystem (advising
/// alpha > 0) when alpha = 0 and the Gram matrix is rank deficient.
Eigen::MatrixXd ridge_fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                          double alpha);

/// Streaming ridge state: q_acc = sum Y_l X_l^T, p_acc = alpha I + sum X_l X_l^T.
/// q_acc stays 0 x N_f until the first update fixes the output dimension.
struct RidgeAccumulator {
  Eigen::MatrixXd q_acc;
  Eigen::MatrixXd p_acc;
  double alpha = 0.0;
  std::size_t n_seen = 0;
};

RidgeAccumulator seq_init(double alpha, Eigen::Index n_features);
RidgeAccumulator seq_update(const RidgeAccumulator& acc, const Eigen::MatrixXd& batch_features,
                            const Eigen::MatrixXd& batch_targets);
void seq_update_inplace(RidgeAccumulator& acc, const Eigen::MatrixXd& batch_features,
                        const Eigen::MatrixXd& batch_targets);
Eigen::MatrixXd seq_solve(const RidgeAccumulator& acc);

Eigen::MatrixXd predict(const Discriminator& disc, const Eigen::MatrixXd& features);

/// Threshold: class 1 iff output > threshold (strict; an output equal to
/// the threshold decodes as class 0). Argmax: smallest index among ties.
std::vector<int> decode(const Discriminator& disc, const Eigen::MatrixXd& outputs);

struct ThresholdSearch {
  double threshold = 0.0;
  double fidelity = 0.0;
};

/// Grid {0.00, 0.01, ..., 1.00}; maximizes training fidelity of the rule
/// `class 1 iff output > t`; ties break toward the smallest threshold.
ThresholdSearch threshold_search(std::span<const double> outputs, std::span<const int> labels);

/// Default regularization grids: decade endpoints from the readout
/// protocol, two points per decade, plus alpha = 0 first.
std::vector<double> single_qubit_alpha_grid();  // 0 and 1e-7..1e-1 (13 points)
std::vector<double> multi_qubit_alpha_grid();   // 0 and 1e-7..1e3 (21 points)

struct GridPoint {
  double alpha = 0.0;
  double threshold = 0.0;  // NaN for argmax rows
  double fidelity = 0.0;
};

struct SweepResult {
  Discriminator best;
  double test_fidelity = 0.0;
  std::vector<GridPoint> grid;
};

struct SweepOptions {
  DecodeKind decode = DecodeKind::Threshold;
  int target_qubit = -1;       // -1: label is already the binary/class target
  std::size_t batch_k = 0;     // 0: one batch; otherwise accumulate in batches of k
  int threads = 0;
  const ShotSet* selection = nullptr;  // alpha/threshold chosen here; default: the test set
};

/// Trains once per alpha (the Gram and cross products are accumulated once
/// and shared across the grid; P(alpha) = P(0) + alpha I), evaluates on the
/// selection set, and returns the best (alpha, threshold) discriminator
/// plus the full fidelity grid. Singular grid entries are skipped; an
/// all-singular grid throws.
SweepResult sweep(const ShotSet& train, const ShotSet& test, const FeatureSpec& spec,
                  std::span<const double> alphas, const SweepOptions& options = {});

/// Target matrix for a label column: binary bit targets (d=1) or one-hot
/// columns (d=n_classes).
Eigen::MatrixXd make_targets(const ShotSet& set, DecodeKind kind, int target_qubit,
                             std::uint32_t n_classes);
std::vector<int> true_classes(const ShotSet& set, DecodeKind kind, int target_qubit);

}  // namespace ngrc
