#include "ngrc/dsp.hpp"

#include <cmath>
#include <complex>

#include "ngrc/error.hpp"

namespace ngrc {

IQTrace demodulate(const IQTrace& raw, double if_freq, std::size_t lowpass_len) {
  if (!(if_freq >= 0.0 && if_freq < 0.5)) {
    throw Error(Err::BadArgument, "if_freq must lie in [0, 0.5) cycles/step");
  }
  if (lowpass_len == 0) lowpass_len = 1;
  const std::size_t n = raw.size();
  std::vector<double> mi(n), mq(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phase = -2.0 * M_PI * if_freq * static_cast<double>(k);
    const std::complex<double> z = raw.at(k) * std::polar(1.0, phase);
    mi[k] = z.real();
    mq[k] = z.imag();
  }
  IQTrace out(n);
  double acc_i = 0.0, acc_q = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc_i += mi[k];
    acc_q += mq[k];
    if (k >= lowpass_len) {
      acc_i -= mi[k - lowpass_len];
      acc_q -= mq[k - lowpass_len];
    }
    const double len = static_cast<double>(std::min(k + 1, lowpass_len));
    out.i[k] = acc_i / len;
    out.q[k] = acc_q / len;
  }
  return out;
}

IQTrace apply_boxcar_mask(const IQTrace& trace, std::size_t end_step) {
  if (end_step == 0 || end_step > trace.size()) {
    throw Error(Err::BadArgument, "boxcar end_step " + std::to_string(end_step) +
                                      " out of range (1.." + std::to_string(trace.size()) + ")");
  }
  IQTrace out = trace;
  for (std::size_t n = end_step; n < out.size(); ++n) {
    out.i[n] = 0.0;
    out.q[n] = 0.0;
  }
  return out;
}

WindowedTrace window_average(const IQTrace& trace, std::size_t w) {
  if (w == 0) throw Error(Err::BadArgument, "window size must be >= 1");
  const std::size_t n = trace.size();
  const std::size_t n_win = (n + w - 1) / w;
  WindowedTrace out;
  out.i.resize(n_win);
  out.q.resize(n_win);
  for (std::size_t win = 0; win < n_win; ++win) {
    const std::size_t lo = win * w;
    const std::size_t hi = std::min(lo + w, n);
    double si = 0.0, sq = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      si += trace.i[k];
      sq += trace.q[k];
    }
    const double len = static_cast<double>(hi - lo);
    out.i[win] = si / len;
    out.q[win] = sq / len;
  }
  return out;
}

ShotSet demodulate_shotset(const ShotSet& raw, const std::vector<double>& if_freqs,
                           std::size_t lowpass_len) {
  if (raw.layout != Layout::RawMultiplexed) {
    throw Error(Err::LayoutMismatch, "demodulate_shotset needs a RawMultiplexed set");
  }
  if (if_freqs.size() != raw.n_qubits) {
    throw Error(Err::ShapeMismatch, "need one if_freq per qubit");
  }
  ShotSet out;
  out.n_qubits = raw.n_qubits;
  out.n_classes = raw.n_classes;
  out.layout = Layout::PerQubitDemodulated;
  out.meta = raw.meta;
  out.shots.reserve(raw.size());
  for (const Shot& s : raw.shots) {
    Shot d;
    d.label = s.label;
    d.channels.reserve(if_freqs.size());
    for (const double f : if_freqs) {
      d.channels.push_back(demodulate(s.channels[0], f, lowpass_len));
    }
    out.shots.push_back(std::move(d));
  }
  return out;
}

}  // namespace ngrc
