#include "ngrc/types.hpp"

#include <cmath>
#include <map>

#include "ngrc/error.hpp"

namespace ngrc {

IQTrace::IQTrace(std::vector<double> i_, std::vector<double> q_)
    : i(std::move(i_)), q(std::move(q_)) {
  validate();
}

void IQTrace::validate() const {
  if (i.size() != q.size()) {
    throw Error(Err::LengthMismatch, "IQTrace: i has " + std::to_string(i.size()) +
                                         " samples, q has " + std::to_string(q.size()));
  }
  for (std::size_t n = 0; n < i.size(); ++n) {
    if (!std::isfinite(i[n]) || !std::isfinite(q[n])) {
      throw Error(Err::BadArgument, "IQTrace: non-finite sample at index " + std::to_string(n));
    }
  }
}

std::uint64_t ShotSet::label_space() const {
  if (n_qubits > 1) return 1ull << n_qubits;
  return n_classes;
}

void ShotSet::validate() const {
  const std::size_t nc = n_channels();
  const std::size_t ns = n_samples();
  if (layout == Layout::RawMultiplexed && !shots.empty() && nc != 1) {
    throw Error(Err::LayoutMismatch, "RawMultiplexed set must have exactly one channel");
  }
  std::map<std::uint64_t, std::size_t> counts;
  for (std::size_t m = 0; m < shots.size(); ++m) {
    const Shot& s = shots[m];
    if (s.channels.size() != nc) {
      throw Error(Err::LengthMismatch, "shot " + std::to_string(m) + ": channel count differs");
    }
    for (const IQTrace& tr : s.channels) {
      tr.validate();
      if (tr.size() != ns) {
        throw Error(Err::LengthMismatch, "shot " + std::to_string(m) + ": n_samples differs");
      }
    }
    if (s.label >= label_space()) {
      throw Error(Err::LabelOutOfRange, "shot " + std::to_string(m) + ": label " +
                                            std::to_string(s.label) + " outside declared space");
    }
    ++counts[s.label];
  }
  auto it = meta.find("shots_per_config");
  if (it != meta.end() && !shots.empty()) {
    const std::size_t declared = std::stoull(it->second);
    for (const auto& [label, count] : counts) {
      if (count != declared) {
        throw Error(Err::LengthMismatch,
                    "label " + std::to_string(label) + " has " + std::to_string(count) +
                        " shots, meta declares " + std::to_string(declared));
      }
    }
  }
}

}  // namespace ngrc
