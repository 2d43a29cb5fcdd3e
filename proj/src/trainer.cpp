#include "ngrc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ngrc/error.hpp"
#include "ngrc/io.hpp"
#include "ngrc/metrics.hpp"

namespace ngrc {

namespace {

/// Solves (S) X = B for symmetric positive (semi)definite S without forming
/// an inverse. Rank deficiency is detected from the LDL^T pivots.
Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& s, const Eigen::MatrixXd& b, double alpha) {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success) {
    throw Error(Err::SingularSystem, "normal-equation factorization failed");
  }
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.cwiseAbs().minCoeff();
  if (dmax <= 0.0 || dmin <= dmax * 1e-12 || d.minCoeff() < -dmax * 1e-8) {
    if (alpha == 0.0) {
      throw Error(Err::SingularSystem,
                  "features are rank deficient with alpha = 0; use alpha > 0");
    }
    throw Error(Err::SingularSystem, "normal equations are numerically singular");
  }
  return ldlt.solve(b);
}

}  // namespace

Eigen::MatrixXd ridge_fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                          double alpha) {
  if (features.cols() != targets.cols()) {
    throw Error(Err::ShapeMismatch, "features and targets disagree on shot count");
  }
  if (features.cols() < 1) throw Error(Err::BadArgument, "need at least one shot");
  if (alpha < 0.0) throw Error(Err::BadArgument, "alpha must be >= 0");
  Eigen::MatrixXd gram = features * features.transpose();
  if (alpha > 0.0) gram.diagonal().array() += alpha;
  const Eigen::MatrixXd cross = features * targets.transpose();  // N_f x d
  return solve_spd(gram, cross, alpha).transpose();
}

RidgeAccumulator seq_init(double alpha, Eigen::Index n_features) {
  if (alpha < 0.0) throw Error(Err::BadArgument, "alpha must be >= 0");
  if (n_features < 1) throw Error(Err::BadArgument, "need n_features >= 1");
  RidgeAccumulator acc;
  acc.alpha = alpha;
  acc.q_acc.resize(0, n_features);
  acc.p_acc = Eigen::MatrixXd::Zero(n_features, n_features);
  if (alpha > 0.0) acc.p_acc.diagonal().array() = alpha;
  acc.n_seen = 0;
  return acc;
}

void seq_update_inplace(RidgeAccumulator& acc, const Eigen::MatrixXd& batch_features,
                        const Eigen::MatrixXd& batch_targets) {
  if (batch_features.rows() != acc.p_acc.rows()) {
    throw Error(Err::ShapeMismatch, "batch feature dimension does not match accumulator");
  }
  if (batch_features.cols() != batch_targets.cols()) {
    throw Error(Err::ShapeMismatch, "batch features and targets disagree on shot count");
  }
  if (acc.q_acc.rows() == 0 && batch_targets.rows() > 0) {
    acc.q_acc = Eigen::MatrixXd::Zero(batch_targets.rows(), acc.p_acc.cols());
  }
  if (batch_targets.rows() != acc.q_acc.rows()) {
    throw Error(Err::ShapeMismatch, "batch target dimension changed between updates");
  }
  if (batch_features.cols() == 0) return;
  acc.p_acc.noalias() += batch_features * batch_features.transpose();
  acc.q_acc.noalias() += batch_targets * batch_features.transpose();
  acc.n_seen += static_cast<std::size_t>(batch_features.cols());
}

RidgeAccumulator seq_update(const RidgeAccumulator& acc, const Eigen::MatrixXd& batch_features,
                            const Eigen::MatrixXd& batch_targets) {
  RidgeAccumulator next = acc;
  seq_update_inplace(next, batch_features, batch_targets);
  return next;
}

Eigen::MatrixXd seq_solve(const RidgeAccumulator& acc) {
  const Eigen::MatrixXd q = acc.q_acc.rows() == 0
                                ? Eigen::MatrixXd::Zero(1, acc.p_acc.cols())
                                : acc.q_acc;
  return solve_spd(acc.p_acc, q.transpose(), acc.alpha).transpose();
}

Eigen::MatrixXd predict(const Discriminator& disc, const Eigen::MatrixXd& features) {
  if (features.rows() != disc.w_out.cols()) {
    throw Error(Err::ShapeMismatch, "feature dimension " + std::to_string(features.rows()) +
                                        " does not match weights (" +
                                        std::to_string(disc.w_out.cols()) + ")");
  }
  return disc.w_out * features;
}

std::vector<int> decode(const Discriminator& disc, const Eigen::MatrixXd& outputs) {
  std::vector<int> classes(static_cast<std::size_t>(outputs.cols()));
  if (disc.decode_kind == DecodeKind::Threshold) {
    if (outputs.rows() != 1) {
      throw Error(Err::ShapeMismatch, "threshold decode expects a single output row");
    }
    for (Eigen::Index m = 0; m < outputs.cols(); ++m) {
      classes[static_cast<std::size_t>(m)] = outputs(0, m) > disc.threshold ? 1 : 0;
    }
  } else {
    for (Eigen::Index m = 0; m < outputs.cols(); ++m) {
      Eigen::Index best = 0;
      for (Eigen::Index r = 1; r < outputs.rows(); ++r) {
        if (outputs(r, m) > outputs(best, m)) best = r;  // ties keep smallest index
      }
      classes[static_cast<std::size_t>(m)] = static_cast<int>(best);
    }
  }
  return classes;
}

ThresholdSearch threshold_search(std::span<const double> outputs, std::span<const int> labels) {
  if (outputs.size() != labels.size() || outputs.empty()) {
    throw Error(Err::ShapeMismatch, "outputs/labels size mismatch");
  }
  ThresholdSearch best;
  std::size_t best_correct = 0;
  bool first = true;
  for (int g = 0; g <= 100; ++g) {
    const double t = static_cast<double>(g) / 100.0;
    std::size_t correct = 0;
    for (std::size_t m = 0; m < outputs.size(); ++m) {
      const int pred = outputs[m] > t ? 1 : 0;
      correct += pred == labels[m];
    }
    if (first || correct > best_correct) {
      first = false;
      best_correct = correct;
      best.threshold = t;
    }
  }
  best.fidelity = static_cast<double>(best_correct) / static_cast<double>(outputs.size());
  return best;
}

std::vector<double> single_qubit_alpha_grid() {
  std::vector<double> grid{0.0};
  for (int k = 0; k <= 12; ++k) grid.push_back(std::pow(10.0, -7.0 + 0.5 * k));
  return grid;
}

std::vector<double> multi_qubit_alpha_grid() {
  std::vector<double> grid{0.0};
  for (int k = 0; k <= 20; ++k) grid.push_back(std::pow(10.0, -7.0 + 0.5 * k));
  return grid;
}

Eigen::MatrixXd make_targets(const ShotSet& set, DecodeKind kind, int target_qubit,
                             std::uint32_t n_classes) {
  const auto m_total = static_cast<Eigen::Index>(set.size());
  if (kind == DecodeKind::Threshold) {
    Eigen::MatrixXd y(1, m_total);
    for (Eigen::Index m = 0; m < m_total; ++m) {
      const std::uint64_t label = set.shots[static_cast<std::size_t>(m)].label;
      const int bit = target_qubit >= 0 ? label_bit(label, target_qubit)
                                        : (label != 0 ? 1 : 0);
      y(0, m) = static_cast<double>(bit);
    }
    return y;
  }
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_classes), m_total);
  for (Eigen::Index m = 0; m < m_total; ++m) {
    const std::uint64_t label = set.shots[static_cast<std::size_t>(m)].label;
    if (label >= n_classes) {
      throw Error(Err::LabelOutOfRange, "label exceeds one-hot dimension");
    }
    y(static_cast<Eigen::Index>(label), m) = 1.0;
  }
  return y;
}

std::vector<int> true_classes(const ShotSet& set, DecodeKind kind, int target_qubit) {
  std::vector<int> out(set.size());
  for (std::size_t m = 0; m < set.size(); ++m) {
    const std::uint64_t label = set.shots[m].label;
    if (kind == DecodeKind::Threshold) {
      out[m] = target_qubit >= 0 ? label_bit(label, target_qubit) : (label != 0 ? 1 : 0);
    } else {
      out[m] = static_cast<int>(label);
    }
  }
  return out;
}

SweepResult sweep(const ShotSet& train, const ShotSet& test, const FeatureSpec& spec,
                  std::span<const double> alphas, const SweepOptions& options) {
  if (alphas.empty()) throw Error(Err::BadArgument, "alpha grid must be nonempty");
  const ShotSet& sel = options.selection ? *options.selection : test;

  const Eigen::MatrixXd x_train = build_feature_matrix(train, spec, options.threads);
  const Eigen::MatrixXd x_sel = build_feature_matrix(sel, spec, options.threads);
  const Eigen::MatrixXd y_train =
      make_targets(train, options.decode, options.target_qubit, train.n_classes);
  const std::vector<int> sel_truth = true_classes(sel, options.decode, options.target_qubit);

  const Eigen::Index n_f = x_train.rows();
  RidgeAccumulator acc = seq_init(0.0, n_f);
  const std::size_t m_total = static_cast<std::size_t>(x_train.cols());
  const std::size_t k = options.batch_k > 0 ? options.batch_k : m_total;
  for (std::size_t lo = 0; lo < m_total; lo += k) {
    const std::size_t hi = std::min(m_total, lo + k);
    seq_update_inplace(acc, x_train.middleCols(lo, hi - lo), y_train.middleCols(lo, hi - lo));
  }

  SweepResult result;
  bool have_best = false;
  double best_fid = -1.0;
  std::size_t n_singular = 0;
  for (const double alpha : alphas) {
    Eigen::MatrixXd p = acc.p_acc;
    if (alpha > 0.0) p.diagonal().array() += alpha;
    Eigen::MatrixXd w;
    try {
      w = solve_spd(p, acc.q_acc.transpose(), alpha).transpose();
    } catch (const Error& e) {
      if (e.code() == Err::SingularSystem) {
        ++n_singular;
        continue;
      }
      throw;
    }
    Eigen::MatrixXd outputs = w * x_sel;
    if (options.decode == DecodeKind::Threshold) {
      const Eigen::VectorXd row = outputs.row(0);
      std::size_t best_correct = 0;
      double best_t = 0.0;
      for (int g = 0; g <= 100; ++g) {
        const double t = static_cast<double>(g) / 100.0;
        std::size_t correct = 0;
        for (Eigen::Index m = 0; m < row.size(); ++m) {
          const int pred = row(m) > t ? 1 : 0;
          correct += pred == sel_truth[static_cast<std::size_t>(m)];
        }
        const double fid = static_cast<double>(correct) / static_cast<double>(row.size());
        result.grid.push_back({alpha, t, fid});
        if (g == 0 || correct > best_correct) {
          best_correct = correct;
          best_t = t;
        }
      }
      const double fid = static_cast<double>(best_correct) / static_cast<double>(row.size());
      if (!have_best || fid > best_fid) {
        have_best = true;
        best_fid = fid;
        result.best.w_out = std::move(w);
        result.best.threshold = best_t;
        result.best.alpha = alpha;
      }
    } else {
      Discriminator tmp;
      tmp.w_out = w;
      tmp.decode_kind = DecodeKind::Argmax;
      const std::vector<int> pred = decode(tmp, outputs);
      const double fid = fidelity(pred, sel_truth);
      result.grid.push_back({alpha, std::numeric_limits<double>::quiet_NaN(), fid});
      if (!have_best || fid > best_fid) {
        have_best = true;
        best_fid = fid;
        result.best.w_out = std::move(w);
        result.best.threshold = 0.0;
        result.best.alpha = alpha;
      }
    }
  }
  if (!have_best) {
    throw Error(Err::SingularSystem,
                "every alpha in the grid produced a singular system (" +
                    std::to_string(n_singular) + " tried)");
  }
  result.best.spec = spec;
  result.best.decode_kind = options.decode;
  result.best.target_qubit = options.target_qubit;

  if (options.selection) {
    const Eigen::MatrixXd x_test = build_feature_matrix(test, spec, options.threads);
    const std::vector<int> test_truth = true_classes(test, options.decode, options.target_qubit);
    const std::vector<int> pred = decode(result.best, predict(result.best, x_test));
    result.test_fidelity = fidelity(pred, test_truth);
  } else {
    result.test_fidelity = best_fid;
  }
  return result;
}

namespace {
constexpr char kDiscMagic[4] = {'D', 'I', 'S', 'C'};
}

void Discriminator::save(const std::string& path) const {
  std::string out;
  out.append(kDiscMagic, 4);
  bin::write_u32(out, 1);
  bin::write_str(out, spec.to_config().serialize());
  bin::write_u32(out, static_cast<std::uint32_t>(decode_kind));
  bin::write_f64(out, threshold);
  bin::write_f64(out, alpha);
  bin::write_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(target_qubit)));
  bin::write_u64(out, static_cast<std::uint64_t>(w_out.rows()));
  bin::write_u64(out, static_cast<std::uint64_t>(w_out.cols()));
  for (Eigen::Index r = 0; r < w_out.rows(); ++r) {
    for (Eigen::Index c = 0; c < w_out.cols(); ++c) bin::write_f64(out, w_out(r, c));
  }
  bin::write_file(path, out);
}

Discriminator Discriminator::load(const std::string& path) {
  const std::string buf = bin::read_file(path);
  bin::Reader r{buf};
  r.expect_magic(kDiscMagic, "DISC discriminator");
  const std::uint32_t version = r.u32();
  if (version != 1) throw Error(Err::MalformedHeader, "unsupported DISC version");
  Discriminator disc;
  disc.spec = FeatureSpec::from_config(Config::parse_string(r.str()));
  disc.decode_kind = static_cast<DecodeKind>(r.u32());
  disc.threshold = r.f64();
  disc.alpha = r.f64();
  disc.target_qubit = static_cast<int>(static_cast<std::int64_t>(r.u64()));
  const auto rows = static_cast<Eigen::Index>(r.u64());
  const auto cols = static_cast<Eigen::Index>(r.u64());
  disc.w_out.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) disc.w_out(i, j) = r.f64();
  }
  return disc;
}

}  // namespace ngrc
