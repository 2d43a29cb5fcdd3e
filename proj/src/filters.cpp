#include "ngrc/filters.hpp"

#include <algorithm>
#include <cmath>

#include "ngrc/error.hpp"
#include "ngrc/io.hpp"

namespace ngrc {

std::complex<double> boxcar_filter(const IQTrace& trace, std::size_t begin, std::size_t end) {
  if (begin >= end || end > trace.size()) {
    throw Error(Err::BadArgument, "boxcar range [" + std::to_string(begin) + "," +
                                      std::to_string(end) + ") invalid for trace of " +
                                      std::to_string(trace.size()));
  }
  std::complex<double> sum = 0.0;
  for (std::size_t n = begin; n < end; ++n) sum += trace.at(n);
  return sum;
}

MatchedFilterWeights matched_filter_weights(std::span<const IQTrace> ground_shots,
                                            std::span<const IQTrace> excited_shots) {
  if (ground_shots.size() < 2 || excited_shots.size() < 2) {
    throw Error(Err::BadArgument, "need at least 2 shots per class");
  }
  const std::size_t n = ground_shots[0].size();
  auto stats = [n](std::span<const IQTrace> shots, std::vector<std::complex<double>>& mean,
                   std::vector<double>& var) {
    mean.assign(n, 0.0);
    var.assign(n, 0.0);
    const double m = static_cast<double>(shots.size());
    for (const IQTrace& tr : shots) {
      if (tr.size() != n) throw Error(Err::LengthMismatch, "shots differ in length");
      for (std::size_t k = 0; k < n; ++k) mean[k] += tr.at(k);
    }
    for (std::size_t k = 0; k < n; ++k) mean[k] /= m;
    for (const IQTrace& tr : shots) {
      for (std::size_t k = 0; k < n; ++k) var[k] += std::norm(tr.at(k) - mean[k]);
    }
    for (std::size_t k = 0; k < n; ++k) var[k] /= m;
  };
  std::vector<std::complex<double>> mean0, mean1;
  std::vector<double> var0, var1;
  stats(ground_shots, mean0, var0);
  stats(excited_shots, mean1, var1);

  MatchedFilterWeights w;
  w.k.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double denom = var0[k] + var1[k];
    if (denom == 0.0) {
      throw Error(Err::ZeroDenominator,
                  "matched filter: zero variance at time step " + std::to_string(k));
    }
    w.k[k] = (mean0[k] - mean1[k]) / denom;
  }
  return w;
}

std::complex<double> matched_filter_apply(const IQTrace& trace,
                                          const MatchedFilterWeights& weights) {
  if (trace.size() != weights.k.size()) {
    throw Error(Err::LengthMismatch, "trace length " + std::to_string(trace.size()) +
                                         " != weight length " + std::to_string(weights.k.size()));
  }
  std::complex<double> sum = 0.0;
  for (std::size_t n = 0; n < trace.size(); ++n) sum += weights.k[n] * trace.at(n);
  return sum;
}

double ComplexDiscriminator::project(std::complex<double> z) const {
  return (std::conj(axis) * z).real();
}

int ComplexDiscriminator::decode(std::complex<double> z) const {
  return project(z) > threshold ? 1 : 0;
}

ComplexDiscriminator fit_complex_discriminator(std::span<const std::complex<double>> values,
                                               std::span<const int> labels, bool fisher_axis) {
  if (values.size() != labels.size() || values.empty()) {
    throw Error(Err::ShapeMismatch, "values/labels size mismatch");
  }
  std::complex<double> mu0 = 0.0, mu1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    if (labels[m] == 0) {
      mu0 += values[m];
      ++n0;
    } else {
      mu1 += values[m];
      ++n1;
    }
  }
  if (n0 == 0 || n1 == 0) throw Error(Err::DegenerateClasses, "both classes must be present");
  mu0 /= static_cast<double>(n0);
  mu1 /= static_cast<double>(n1);
  std::complex<double> dir = mu1 - mu0;
  if (std::abs(dir) == 0.0) {
    throw Error(Err::DegenerateClasses, "class means coincide, no separating axis");
  }

  if (fisher_axis) {
    // 2x2 pooled covariance in (re, im); axis = Sigma^-1 (mu1 - mu0).
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) {
      const std::complex<double> mu = labels[m] == 0 ? mu0 : mu1;
      const std::complex<double> d = values[m] - mu;
      sxx += d.real() * d.real();
      syy += d.imag() * d.imag();
      sxy += d.real() * d.imag();
    }
    const double mtot = static_cast<double>(values.size());
    sxx /= mtot;
    syy /= mtot;
    sxy /= mtot;
    const double det = sxx * syy - sxy * sxy;
    if (det > 0.0) {
      const double dx = dir.real(), dy = dir.imag();
      dir = {(syy * dx - sxy * dy) / det, (sxx * dy - sxy * dx) / det};
    }
  }

  ComplexDiscriminator disc;
  disc.axis = dir / std::abs(dir);

  std::vector<double> proj(values.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < values.size(); ++m) {
    proj[m] = disc.project(values[m]);
    lo = std::min(lo, proj[m]);
    hi = std::max(hi, proj[m]);
  }
  if (hi <= lo) hi = lo + 1.0;
  double best_t = lo;
  std::size_t best_correct = 0;
  for (int g = 0; g <= 100; ++g) {
    const double t = lo + (hi - lo) * static_cast<double>(g) / 100.0;
    std::size_t correct = 0;
    for (std::size_t m = 0; m < values.size(); ++m) {
      const int pred = proj[m] > t ? 1 : 0;
      correct += pred == labels[m];
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_t = t;
    }
  }
  disc.threshold = best_t;
  disc.train_fidelity = static_cast<double>(best_correct) / static_cast<double>(values.size());
  return disc;
}

namespace {
constexpr char kMfwMagic[4] = {'M', 'F', 'W', '1'};
}

void MatchedFilterWeights::save(const std::string& path) const {
  std::string out;
  out.append(kMfwMagic, 4);
  bin::write_u32(out, 1);
  bin::write_u64(out, k.size());
  for (const std::complex<double>& w : k) {
    bin::write_f64(out, w.real());
    bin::write_f64(out, w.imag());
  }
  bin::write_file(path, out);
}

MatchedFilterWeights MatchedFilterWeights::load(const std::string& path) {
  const std::string buf = bin::read_file(path);
  bin::Reader r{buf};
  r.expect_magic(kMfwMagic, "MFW1 matched-filter weight");
  const std::uint32_t version = r.u32();
  if (version != 1) throw Error(Err::MalformedHeader, "unsupported MFW1 version");
  const std::uint64_t n = r.u64();
  MatchedFilterWeights w;
  w.k.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) {
    const double re = r.f64();
    const double im = r.f64();
    w.k.emplace_back(re, im);
  }
  return w;
}

}  // namespace ngrc
