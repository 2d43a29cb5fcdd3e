#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ngrc/types.hpp"

namespace ngrc {

enum class FileFormat { Binary, CSV };

/// Binary container, little-endian:
///   magic "NGRQ", u32 version=1, u32 layout, u32 n_qubits, u32 n_classes,
///   u32 n_channels, u32 n_samples, u64 n_shots, then per shot: u64 packed
///   label followed by channel-major f64 pairs (i0,q0,i1,q1,...).
/// A trailing optional meta section (u32 count, then length-prefixed
/// key/value strings) follows the shot records; readers that stop after the
/// shots still parse the file.
/// CSV: header `shot,label,ch,idx,i,q`, one row per sample, full-precision
/// decimals (%.17g) so values survive a round trip.
void save_shotset(const ShotSet& set, const std::string& path, FileFormat format);
ShotSet load_shotset(const std::string& path, FileFormat format);

/// Deterministic stratified split: each prepared configuration is shuffled
/// with a label-keyed counter RNG and cut at round(fraction * count).
/// Output shots keep their original relative order.
std::pair<ShotSet, ShotSet> split_train_test(const ShotSet& set, double train_fraction,
                                             std::uint64_t seed);

/// FNV-1a 64-bit hash, used for artifact manifests and reproducibility checks.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t hash_file(const std::string& path);
std::uint64_t hash_shotset(const ShotSet& set);

namespace bin {
// Little-endian primitives shared by every "NGRQ"-style container.
void write_u32(std::string& out, std::uint32_t v);
void write_u64(std::string& out, std::uint64_t v);
void write_f64(std::string& out, double v);
void write_str(std::string& out, const std::string& s);

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string str();
  void expect_magic(const char magic[4], const std::string& what);
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
}  // namespace bin

}  // namespace ngrc
