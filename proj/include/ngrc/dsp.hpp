#pragma once

#include <cstddef>
#include <vector>

#include "ngrc/types.hpp"

namespace ngrc {

/// Windowed (I, Q) pairs produced by window_average.
struct WindowedTrace {
  std::vector<double> i;
  std::vector<double> q;
  std::size_t size() const { return i.size(); }
};

/// Digital downconversion: out[n] = (I+iQ)[n] * exp(-2*pi*i*f*n) followed by
/// a trailing moving average of length `lowpass_len` (edge samples use the
/// truncated window). Output has the same length as the input.
IQTrace demodulate(const IQTrace& raw, double if_freq, std::size_t lowpass_len = 4);

/// Samples with index < end_step pass through; the rest become exactly 0.
IQTrace apply_boxcar_mask(const IQTrace& trace, std::size_t end_step);

/// Non-overlapping window means. Window n' covers [n'*w, min((n'+1)*w, N))
/// and divides by the number of samples it covers (full windows divide by w,
/// masked zeros included; a final partial window divides by its own length).
WindowedTrace window_average(const IQTrace& trace, std::size_t w);

/// Demodulate each qubit of a raw multiplexed set to a per-qubit channel.
ShotSet demodulate_shotset(const ShotSet& raw, const std::vector<double>& if_freqs,
                           std::size_t lowpass_len = 4);

}  // namespace ngrc
