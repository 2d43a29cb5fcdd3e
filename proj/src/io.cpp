#include "ngrc/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "ngrc/error.hpp"
#include "ngrc/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace ngrc {

namespace bin {

void write_u32(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::string& out, std::uint64_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::string& out, double v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_str(std::string& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

std::uint32_t Reader::u32() {
  if (pos + 4 > buf.size()) throw Error(Err::MalformedHeader, "truncated file (u32)");
  std::uint32_t v;
  std::memcpy(&v, buf.data() + pos, 4);
  pos += 4;
  return v;
}

std::uint64_t Reader::u64() {
  if (pos + 8 > buf.size()) throw Error(Err::MalformedHeader, "truncated file (u64)");
  std::uint64_t v;
  std::memcpy(&v, buf.data() + pos, 8);
  pos += 8;
  return v;
}

double Reader::f64() {
  if (pos + 8 > buf.size()) throw Error(Err::LengthMismatch, "truncated file (f64 sample)");
  double v;
  std::memcpy(&v, buf.data() + pos, 8);
  pos += 8;
  return v;
}

std::string Reader::str() {
  const std::uint32_t n = u32();
  if (pos + n > buf.size()) throw Error(Err::MalformedHeader, "truncated file (string)");
  std::string s = buf.substr(pos, n);
  pos += n;
  return s;
}

void Reader::expect_magic(const char magic[4], const std::string& what) {
  if (pos + 4 > buf.size() || std::memcmp(buf.data() + pos, magic, 4) != 0) {
    throw Error(Err::MalformedHeader, "bad magic, not a " + what + " file");
  }
  pos += 4;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Err::FileNotFound, "cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Err::UnwritablePath, "cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Err::UnwritablePath, "short write: " + path);
}

}  // namespace bin

namespace {

constexpr char kShotMagic[4] = {'N', 'G', 'R', 'Q'};
constexpr std::uint32_t kVersion = 1;

std::string encode_binary(const ShotSet& set) {
  std::string out;
  out.append(kShotMagic, 4);
  bin::write_u32(out, kVersion);
  bin::write_u32(out, static_cast<std::uint32_t>(set.layout));
  bin::write_u32(out, set.n_qubits);
  bin::write_u32(out, set.n_classes);
  bin::write_u32(out, static_cast<std::uint32_t>(set.n_channels()));
  bin::write_u32(out, static_cast<std::uint32_t>(set.n_samples()));
  bin::write_u64(out, set.size());
  for (const Shot& s : set.shots) {
    bin::write_u64(out, s.label);
    for (const IQTrace& tr : s.channels) {
      for (std::size_t n = 0; n < tr.size(); ++n) {
        bin::write_f64(out, tr.i[n]);
        bin::write_f64(out, tr.q[n]);
      }
    }
  }
  bin::write_u32(out, static_cast<std::uint32_t>(set.meta.size()));
  for (const auto& [k, v] : set.meta) {
    bin::write_str(out, k);
    bin::write_str(out, v);
  }
  return out;
}

ShotSet decode_binary(const std::string& buf) {
  bin::Reader r{buf};
  r.expect_magic(kShotMagic, "NGRQ shot set");
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw Error(Err::MalformedHeader, "unsupported NGRQ version " + std::to_string(version));
  }
  ShotSet set;
  const std::uint32_t layout = r.u32();
  if (layout > 1) throw Error(Err::MalformedHeader, "unknown layout " + std::to_string(layout));
  set.layout = static_cast<Layout>(layout);
  set.n_qubits = r.u32();
  set.n_classes = r.u32();
  const std::uint32_t n_channels = r.u32();
  const std::uint32_t n_samples = r.u32();
  const std::uint64_t n_shots = r.u64();
  if (set.n_qubits == 0 || set.n_classes < 2) {
    throw Error(Err::MalformedHeader, "invalid qubit/class counts");
  }
  set.shots.reserve(n_shots);
  for (std::uint64_t m = 0; m < n_shots; ++m) {
    Shot s;
    s.label = r.u64();
    if (s.label >= set.label_space()) {
      throw Error(Err::LabelOutOfRange, "shot " + std::to_string(m) + ": label " +
                                            std::to_string(s.label) + " out of range");
    }
    s.channels.resize(n_channels);
    for (std::uint32_t c = 0; c < n_channels; ++c) {
      IQTrace& tr = s.channels[c];
      tr.i.resize(n_samples);
      tr.q.resize(n_samples);
      for (std::uint32_t n = 0; n < n_samples; ++n) {
        tr.i[n] = r.f64();
        tr.q[n] = r.f64();
      }
    }
    set.shots.push_back(std::move(s));
  }
  if (r.pos < buf.size()) {
    const std::uint32_t n_meta = r.u32();
    for (std::uint32_t k = 0; k < n_meta; ++k) {
      const std::string key = r.str();
      set.meta[key] = r.str();
    }
  }
  return set;
}

std::string format_f64(double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof tmp, "%.17g", v);
  return tmp;
}

std::string encode_csv(const ShotSet& set) {
  std::string out = "shot,label,ch,idx,i,q\n";
  for (std::size_t m = 0; m < set.size(); ++m) {
    const Shot& s = set.shots[m];
    for (std::size_t c = 0; c < s.channels.size(); ++c) {
      const IQTrace& tr = s.channels[c];
      for (std::size_t n = 0; n < tr.size(); ++n) {
        out += std::to_string(m);
        out += ',';
        out += std::to_string(s.label);
        out += ',';
        out += std::to_string(c);
        out += ',';
        out += std::to_string(n);
        out += ',';
        out += format_f64(tr.i[n]);
        out += ',';
        out += format_f64(tr.q[n]);
        out += '\n';
      }
    }
  }
  return out;
}

ShotSet decode_csv(const std::string& buf) {
  std::istringstream in(buf);
  std::string line;
  if (!std::getline(in, line)) throw Error(Err::MalformedHeader, "empty CSV file");
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "shot,label,ch,idx,i,q") {
    throw Error(Err::MalformedHeader, "bad CSV header: " + line);
  }
  struct Cell {
    std::uint64_t label;
    std::vector<IQTrace> channels;
  };
  std::map<std::uint64_t, Cell> rows;  // shot index -> data
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[6];
    for (int k = 0; k < 6; ++k) {
      if (!std::getline(ls, f[k], ',')) {
        throw Error(Err::LengthMismatch, "CSV line " + std::to_string(lineno) + ": too few columns");
      }
    }
    const std::uint64_t shot = std::stoull(f[0]);
    const std::uint64_t label = std::stoull(f[1]);
    const std::size_t ch = std::stoull(f[2]);
    const std::size_t idx = std::stoull(f[3]);
    Cell& cell = rows[shot];
    cell.label = label;
    if (cell.channels.size() <= ch) cell.channels.resize(ch + 1);
    IQTrace& tr = cell.channels[ch];
    if (tr.i.size() <= idx) {
      tr.i.resize(idx + 1);
      tr.q.resize(idx + 1);
    }
    tr.i[idx] = std::strtod(f[4].c_str(), nullptr);
    tr.q[idx] = std::strtod(f[5].c_str(), nullptr);
  }
  ShotSet set;
  std::uint64_t max_label = 0;
  for (auto& [shot, cell] : rows) {
    Shot s;
    s.label = cell.label;
    max_label = std::max(max_label, cell.label);
    s.channels = std::move(cell.channels);
    set.shots.push_back(std::move(s));
  }
  // Layout/class metadata is not part of the CSV; infer a plausible header.
  set.n_qubits = 1;
  set.n_classes = static_cast<std::uint32_t>(std::max<std::uint64_t>(2, max_label + 1));
  set.layout = Layout::PerQubitDemodulated;
  return set;
}

}  // namespace

void save_shotset(const ShotSet& set, const std::string& path, FileFormat format) {
  set.validate();
  bin::write_file(path, format == FileFormat::Binary ? encode_binary(set) : encode_csv(set));
}

ShotSet load_shotset(const std::string& path, FileFormat format) {
  const std::string buf = bin::read_file(path);
  ShotSet set = format == FileFormat::Binary ? decode_binary(buf) : decode_csv(buf);
  set.validate();
  return set;
}

std::pair<ShotSet, ShotSet> split_train_test(const ShotSet& set, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(Err::BadArgument, "train_fraction must lie in (0,1)");
  }
  if (set.size() < 2) throw Error(Err::BadArgument, "need at least 2 shots to split");

  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  for (std::size_t m = 0; m < set.size(); ++m) groups[set.shots[m].label].push_back(m);

  std::vector<bool> in_train(set.size(), false);
  std::vector<std::size_t> train_counts;
  for (auto& [label, idx] : groups) {
    CounterRng rng(CounterRng::derive(seed, label));
    // Fisher-Yates over the group's positions.
    for (std::size_t a = idx.size(); a > 1; --a) {
      const std::size_t b = static_cast<std::size_t>(rng.next_u64() % a);
      std::swap(idx[a - 1], idx[b]);
    }
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < n_train && k < idx.size(); ++k) in_train[idx[k]] = true;
    train_counts.push_back(std::min(n_train, idx.size()));
  }

  ShotSet train, test;
  train.n_qubits = test.n_qubits = set.n_qubits;
  train.n_classes = test.n_classes = set.n_classes;
  train.layout = test.layout = set.layout;
  train.meta = test.meta = set.meta;
  for (std::size_t m = 0; m < set.size(); ++m) {
    (in_train[m] ? train : test).shots.push_back(set.shots[m]);
  }
  // Per-configuration counts changed; refresh or drop the declared count.
  const bool uniform =
      std::all_of(train_counts.begin(), train_counts.end(),
                  [&](std::size_t c) { return c == train_counts.front(); });
  auto fix_meta = [&](ShotSet& s, bool is_train) {
    if (!s.meta.count("shots_per_config")) return;
    if (uniform && !groups.empty()) {
      const std::size_t group_size = groups.begin()->second.size();
      const bool same_group_sizes =
          std::all_of(groups.begin(), groups.end(),
                      [&](const auto& g) { return g.second.size() == group_size; });
      if (same_group_sizes) {
        const std::size_t n = is_train ? train_counts.front() : group_size - train_counts.front();
        s.meta["shots_per_config"] = std::to_string(n);
        return;
      }
    }
    s.meta.erase("shots_per_config");
  };
  fix_meta(train, true);
  fix_meta(test, false);
  return {std::move(train), std::move(test)};
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::size_t k = 0; k < size; ++k) {
    h ^= p[k];
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t hash_file(const std::string& path) {
  const std::string buf = bin::read_file(path);
  return fnv1a64(buf.data(), buf.size());
}

std::uint64_t hash_shotset(const ShotSet& set) {
  const std::string buf = encode_binary(set);
  return fnv1a64(buf.data(), buf.size());
}

}  // namespace ngrc
