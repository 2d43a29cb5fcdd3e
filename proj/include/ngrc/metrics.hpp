#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ngrc/features.hpp"

namespace ngrc {

/// Fraction of correct classifications.
double fidelity(std::span<const int> predicted, std::span<const int> truth);

/// Relative decrease in classification error versus the matched-filter
/// baseline: ((1-f_mf) - (1-f_ml)) / (1-f_mf). Undefined at f_mf = 1.
double infidelity_reduction(double f_mf, double f_ml);

/// (prod f_r)^(1/N_q).
double geometric_mean_fidelity(std::span<const double> per_qubit);

/// Cross-fidelity of predictions for qubit j against preparations of qubit
/// k: 1 - [P(1_j|0_k) + P(0_j|1_k)], with the conditional probabilities
/// estimated per prepared configuration of the remaining qubits and then
/// averaged over configurations. Values near zero mean the prediction is
/// insensitive to qubit k.
double cross_fidelity(std::span<const int> preds_j, std::span<const std::uint64_t> prepared,
                      int qubit_k, int n_qubits);

/// Full N_q x N_q table; entry (j,k) is cross_fidelity of model j against
/// preparations of qubit k.
std::vector<std::vector<double>> cross_fidelity_matrix(
    const std::vector<std::vector<int>>& preds_per_qubit,
    std::span<const std::uint64_t> prepared, int n_qubits);

struct CrossFidelitySummary {
  std::vector<double> mean_abs_per_distance;  // index d-1 holds distance d
  double overall = 0.0;                       // mean of the per-distance means
};

CrossFidelitySummary cross_fidelity_by_distance(const std::vector<std::vector<double>>& cf);

/// One evaluated model (or baseline) in a report.
struct RunRecord {
  std::string model;
  std::size_t window_w = 0;
  double alpha = 0.0;
  std::optional<double> fidelity;                  // single-model tasks
  std::vector<double> per_qubit_fidelity;          // multi-qubit tasks
  std::optional<double> baseline_fidelity;         // matched filter, same run
  std::optional<Complexity> complexity;
  std::vector<std::vector<double>> cross_fidelity; // empty unless n_qubits >= 2
};

struct MetricsReport {
  std::vector<RunRecord> runs;
  std::vector<std::string> notices;

  /// All floats rendered with 6 significant digits.
  std::string to_json() const;
  std::string to_csv() const;
};

/// Collates runs; derives geometric-mean fidelity, infidelity reduction
/// against each run's baseline (omitted with a notice when absent), and
/// cross-fidelity distance summaries.
MetricsReport assemble_report(std::span<const RunRecord> runs);

}  // namespace ngrc
