#include "ngrc/features.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "ngrc/dsp.hpp"
#include "ngrc/error.hpp"

namespace ngrc {

void FeatureSpec::validate() const {
  if (degree < 1 || degree > 3) throw Error(Err::BadArgument, "degree must be 1, 2 or 3");
  if (window_w == 0) throw Error(Err::BadArgument, "window_w must be >= 1");
  if (term_subset) {
    std::set<std::size_t> seen;
    for (const std::size_t t : *term_subset) {
      if (!seen.insert(t).second) {
        throw Error(Err::BadArgument, "term_subset has duplicate index " + std::to_string(t));
      }
    }
  }
}

std::size_t active_windows(std::size_t end_step, std::size_t w) {
  return (end_step + w - 1) / w;
}

namespace {

std::size_t channel_end(const FeatureSpec& spec, std::size_t ch, std::size_t n_samples) {
  if (spec.masks.empty()) return n_samples;
  return spec.masks.at(ch);
}

/// Precomputed per-spec index structure shared by feature construction and
/// complexity accounting.
struct Indexer {
  std::size_t n_lin = 0;
  std::vector<std::size_t> var_channel;        // linear index -> channel
  std::vector<std::size_t> win_per_channel;    // active windows per channel
  std::vector<std::vector<std::uint32_t>> monomials;  // quads then cubics
  std::size_t n_quad = 0;
  std::size_t n_cubic = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> quad_pos;

  std::size_t constant() const { return 0; }
  std::size_t total(bool include_constant) const {
    return (include_constant ? 1 : 0) + n_lin + n_quad + n_cubic;
  }
};

Indexer make_indexer(const FeatureSpec& spec, std::size_t n_channels, std::size_t n_samples) {
  spec.validate();
  if (!spec.masks.empty() && spec.masks.size() != n_channels) {
    throw Error(Err::ShapeMismatch, "spec has " + std::to_string(spec.masks.size()) +
                                        " masks for " + std::to_string(n_channels) + " channels");
  }
  Indexer ix;
  ix.win_per_channel.resize(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const std::size_t end = channel_end(spec, c, n_samples);
    if (end == 0 || end > n_samples) {
      throw Error(Err::BadArgument, "mask end " + std::to_string(end) + " out of range");
    }
    const std::size_t wins = active_windows(end, spec.window_w);
    ix.win_per_channel[c] = wins;
    for (std::size_t k = 0; k < 2 * wins; ++k) ix.var_channel.push_back(c);
  }
  ix.n_lin = ix.var_channel.size();

  const int radius = spec.cross_qubit ? spec.neighbor_radius : 0;
  auto allowed = [&](std::initializer_list<std::uint32_t> vars) {
    if (radius < 0) return true;
    std::size_t lo = n_channels, hi = 0;
    for (const std::uint32_t v : vars) {
      lo = std::min(lo, ix.var_channel[v]);
      hi = std::max(hi, ix.var_channel[v]);
    }
    return hi - lo <= static_cast<std::size_t>(radius);
  };

  const auto n = static_cast<std::uint32_t>(ix.n_lin);
  if (spec.degree >= 2) {
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a; b < n; ++b) {
        if (!allowed({a, b})) continue;
        ix.quad_pos[{a, b}] = ix.monomials.size();
        ix.monomials.push_back({a, b});
      }
    }
    ix.n_quad = ix.monomials.size();
  }
  if (spec.degree >= 3) {
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a; b < n; ++b) {
        for (std::uint32_t c = b; c < n; ++c) {
          if (!allowed({a, b, c})) continue;
          ix.monomials.push_back({a, b, c});
        }
      }
    }
    ix.n_cubic = ix.monomials.size() - ix.n_quad;
  }
  return ix;
}

}  // namespace

std::size_t linear_feature_count(const FeatureSpec& spec, std::size_t n_channels,
                                 std::size_t n_samples) {
  std::size_t n_lin = 0;
  for (std::size_t c = 0; c < n_channels; ++c) {
    n_lin += 2 * active_windows(channel_end(spec, c, n_samples), spec.window_w);
  }
  return n_lin;
}

std::vector<std::vector<std::uint32_t>> enumerate_monomials(std::size_t n_lin, int degree) {
  if (n_lin < 1) throw Error(Err::BadArgument, "need n_lin >= 1");
  if (degree < 1 || degree > 3) throw Error(Err::BadArgument, "degree must be 1, 2 or 3");
  std::vector<std::vector<std::uint32_t>> out;
  const auto n = static_cast<std::uint32_t>(n_lin);
  if (degree >= 2) {
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = a; b < n; ++b) out.push_back({a, b});
  }
  if (degree >= 3) {
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = a; b < n; ++b)
        for (std::uint32_t c = b; c < n; ++c) out.push_back({a, b, c});
  }
  return out;
}

std::size_t full_feature_count(const FeatureSpec& spec, std::size_t n_channels,
                               std::size_t n_samples) {
  return make_indexer(spec, n_channels, n_samples).total(spec.include_constant);
}

std::vector<double> build_features(const Shot& shot, const FeatureSpec& spec) {
  const std::size_t n_channels = shot.channels.size();
  if (n_channels == 0) throw Error(Err::ShapeMismatch, "shot has no channels");
  if (spec.layout == Layout::RawMultiplexed && n_channels != 1) {
    throw Error(Err::LayoutMismatch, "raw-layout spec expects a single channel");
  }
  const std::size_t n_samples = shot.n_samples();
  const Indexer ix = make_indexer(spec, n_channels, n_samples);

  std::vector<double> lin;
  lin.reserve(ix.n_lin);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const std::size_t end = channel_end(spec, c, n_samples);
    const WindowedTrace wt =
        spec.masks.empty() ? window_average(shot.channels[c], spec.window_w)
                           : window_average(apply_boxcar_mask(shot.channels[c], end), spec.window_w);
    for (std::size_t k = 0; k < ix.win_per_channel[c]; ++k) {
      lin.push_back(wt.i[k]);
      lin.push_back(wt.q[k]);
    }
  }

  std::vector<double> full;
  full.reserve(ix.total(spec.include_constant));
  if (spec.include_constant) full.push_back(1.0);
  full.insert(full.end(), lin.begin(), lin.end());
  std::vector<double> quad_vals(ix.n_quad);
  for (std::size_t k = 0; k < ix.n_quad; ++k) {
    const auto& m = ix.monomials[k];
    quad_vals[k] = lin[m[0]] * lin[m[1]];
    full.push_back(quad_vals[k]);
  }
  // Cubics reuse the cached quadratic of their first two variables.
  for (std::size_t k = ix.n_quad; k < ix.monomials.size(); ++k) {
    const auto& m = ix.monomials[k];
    const std::size_t qp = ix.quad_pos.at({m[0], m[1]});
    full.push_back(quad_vals[qp] * lin[m[2]]);
  }

  if (!spec.term_subset) return full;
  std::vector<double> reduced;
  reduced.reserve(spec.term_subset->size());
  for (const std::size_t t : *spec.term_subset) {
    if (t >= full.size()) {
      throw Error(Err::BadArgument, "term_subset index " + std::to_string(t) + " out of range");
    }
    reduced.push_back(full[t]);
  }
  return reduced;
}

Eigen::MatrixXd build_feature_matrix(const ShotSet& set, const FeatureSpec& spec, int threads) {
  if (set.layout != spec.layout) {
    throw Error(Err::LayoutMismatch, "shot set layout does not match feature spec layout");
  }
  if (set.size() == 0) throw Error(Err::BadArgument, "empty shot set");
  const std::vector<double> first = build_features(set.shots[0], spec);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(first.size()),
                    static_cast<Eigen::Index>(set.size()));
  X.col(0) = Eigen::Map<const Eigen::VectorXd>(first.data(), first.size());

  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }
  const std::size_t m_total = set.size();
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t m = lo; m < hi; ++m) {
      const std::vector<double> v = build_features(set.shots[m], spec);
      X.col(static_cast<Eigen::Index>(m)) =
          Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    }
  };
  if (threads <= 1 || m_total < 64) {
    worker(1, m_total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (m_total - 1 + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = 1 + static_cast<std::size_t>(t) * chunk;
      const std::size_t hi = std::min(m_total, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return X;
}

Complexity count_complexity(const FeatureSpec& spec, int n_models) {
  spec.validate();
  if (spec.masks.empty()) {
    throw Error(Err::BadArgument, "complexity accounting needs per-channel mask ends");
  }
  if (n_models < 1) throw Error(Err::BadArgument, "n_models must be >= 1");
  std::size_t max_end = 0;
  for (const std::size_t e : spec.masks) max_end = std::max(max_end, e);
  const Indexer ix = make_indexer(spec, spec.masks.size(), max_end);

  std::uint64_t demod = 0;
  if (spec.layout == Layout::PerQubitDemodulated) {
    for (const std::size_t e : spec.masks) demod += 4ull * e;
  }

  std::uint64_t n_f = 0;
  std::uint64_t product_mults = 0;
  if (!spec.term_subset) {
    n_f = ix.total(spec.include_constant);
    product_mults = ix.n_quad + ix.n_cubic;
  } else {
    n_f = spec.term_subset->size();
    const std::size_t lin_base = spec.include_constant ? 1 : 0;
    const std::size_t quad_base = lin_base + ix.n_lin;
    const std::size_t cubic_base = quad_base + ix.n_quad;
    std::set<std::size_t> needed_quads;
    std::uint64_t retained_cubics = 0;
    for (const std::size_t t : *spec.term_subset) {
      if (t >= ix.total(spec.include_constant)) {
        throw Error(Err::BadArgument, "term_subset index " + std::to_string(t) + " out of range");
      }
      if (t >= cubic_base) {
        const auto& m = ix.monomials[ix.n_quad + (t - cubic_base)];
        needed_quads.insert(ix.quad_pos.at({m[0], m[1]}));
        ++retained_cubics;
      } else if (t >= quad_base) {
        needed_quads.insert(t - quad_base);
      }
    }
    product_mults = needed_quads.size() + retained_cubics;
  }

  Complexity out;
  out.parameters = static_cast<std::uint64_t>(n_models) * n_f;
  out.multiplications = demod + product_mults + static_cast<std::uint64_t>(n_models) * n_f;
  out.activations = 0;
  return out;
}

Config FeatureSpec::to_config() const {
  Config cfg;
  cfg.set("degree", std::to_string(degree));
  cfg.set("window", std::to_string(window_w));
  cfg.set("constant", include_constant ? "true" : "false");
  cfg.set("layout", layout == Layout::RawMultiplexed ? "raw" : "demod");
  cfg.set("cross_qubit", cross_qubit ? "true" : "false");
  cfg.set("neighbor_radius", std::to_string(neighbor_radius));
  if (!masks.empty()) {
    std::ostringstream ss;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      if (k) ss << ",";
      ss << masks[k];
    }
    cfg.set("masks", ss.str());
  }
  if (term_subset) {
    std::ostringstream ss;
    for (std::size_t k = 0; k < term_subset->size(); ++k) {
      if (k) ss << ",";
      ss << (*term_subset)[k];
    }
    cfg.set("terms", ss.str());
  }
  return cfg;
}

FeatureSpec FeatureSpec::from_config(const Config& cfg) {
  FeatureSpec spec;
  spec.degree = static_cast<int>(cfg.get_int("degree", 1));
  spec.window_w = static_cast<std::size_t>(cfg.get_int("window", 1));
  spec.include_constant = cfg.get_bool("constant", true);
  const std::string layout = cfg.get_string("layout", "demod");
  if (layout == "raw") {
    spec.layout = Layout::RawMultiplexed;
  } else if (layout == "demod") {
    spec.layout = Layout::PerQubitDemodulated;
  } else {
    throw Error(Err::BadConfigValue, "layout must be raw or demod, got " + layout);
  }
  spec.cross_qubit = cfg.get_bool("cross_qubit", true);
  spec.neighbor_radius = static_cast<int>(cfg.get_int("neighbor_radius", -1));
  if (cfg.has("masks")) {
    for (const std::uint64_t e : cfg.get_uint_list("masks")) {
      spec.masks.push_back(static_cast<std::size_t>(e));
    }
  }
  if (cfg.has("terms")) {
    std::vector<std::size_t> terms;
    for (const std::uint64_t t : cfg.get_uint_list("terms")) {
      terms.push_back(static_cast<std::size_t>(t));
    }
    spec.term_subset = std::move(terms);
  }
  spec.validate();
  return spec;
}

}  // namespace ngrc
