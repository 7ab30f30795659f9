// Copyright 2026 The ensemble-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/pool.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <thread>

#include "forge/diversity.hpp"
#include "forge/error.hpp"
#include "forge/random.hpp"

namespace forge {
namespace {

struct Attempt {
  TrainedClassifier classifier;
  bool accepted = false;
};

Attempt run_attempt(const PoolConfig& config, const Dataset& train_split,
                    const Dataset& validation, std::uint64_t master_seed, int index) {
  auto rng = make_stream(master_seed, StreamPurpose::kPoolAttempt, static_cast<std::uint64_t>(index));
  const int d = static_cast<int>(train_split.dim());
  Attempt out;
  auto& c = out.classifier;
  c.spec = config.forced_spec ? *config.forced_spec : random_spec(rng, d);
  c.descriptor = encode(c.spec, d);
  c.network = train(c.spec, train_split, rng, config.epochs).network;
  c.validation_error = classification_error(c.network, validation);
  out.accepted = c.validation_error < config.error_cap;
  return out;
}

int worker_count(const PoolConfig& config) {
  if (config.threads > 0) return config.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// --- binary encoding -------------------------------------------------------

constexpr std::array<char, 8> kMagic = {'F', 'O', 'R', 'G', 'E', 'P', 'L', '\0'};
constexpr std::size_t kHeaderBytes = kMagic.size() + 4 + 8;

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void f64s(const std::vector<double>& values) {
    for (double v : values) f64(v);
  }
  void raw(const std::string& s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  void f64s(std::vector<double>& out, std::size_t count) {
    need(count * 8);
    out.resize(count);
    for (auto& v : out) v = f64();
  }
  std::string raw(std::size_t count) {
    need(count);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), count);
    pos_ += count;
    return s;
  }
  bool done() const { return pos_ == size_; }

 private:
  void need(std::size_t count) const {
    if (size_ - pos_ < count) throw Error(ErrorCode::kFormat, "pool file is truncated");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void write_config(Writer& w, const PoolConfig& c) {
  w.i32(c.size);
  w.f64(c.error_cap);
  w.i32(c.max_attempts);
  w.i32(c.epochs);
  w.i32(c.candidates);
  w.u8(c.forced_spec ? 1 : 0);
  if (c.forced_spec) {
    w.i32(c.forced_spec->hidden_nodes);
    w.u8(static_cast<std::uint8_t>(c.forced_spec->activation));
    w.u8(static_cast<std::uint8_t>(c.forced_spec->learning_rate_index));
  }
}

PoolConfig read_config(Reader& r) {
  PoolConfig c;
  c.size = r.i32();
  c.error_cap = r.f64();
  c.max_attempts = r.i32();
  c.epochs = r.i32();
  c.candidates = r.i32();
  if (r.u8() != 0) {
    ClassifierSpec spec;
    spec.hidden_nodes = r.i32();
    spec.activation = static_cast<Activation>(r.u8());
    spec.learning_rate_index = r.u8();
    c.forced_spec = spec;
  }
  return c;
}

}  // namespace

void PoolConfig::validate() const {
  if (size < 1) throw Error(ErrorCode::kConfig, "pool size must be at least 1");
  if (!(error_cap >= 0.0 && error_cap <= 1.0)) {
    throw Error(ErrorCode::kConfig, "error cap must lie in [0, 1]");
  }
  if (max_attempts < 0) throw Error(ErrorCode::kConfig, "max_attempts must be non-negative");
  if (epochs < 1) throw Error(ErrorCode::kConfig, "epochs must be at least 1");
  if (candidates < 1) throw Error(ErrorCode::kConfig, "candidate count must be at least 1");
  if (threads < 0) throw Error(ErrorCode::kConfig, "thread count must be non-negative");
}

Pool::Pool(PoolConfig config, std::uint64_t master_seed, int input_dim,
           std::vector<TrainedClassifier> classifiers, Stats stats,
           std::optional<NormalizationStats> normalization)
    : config_(std::move(config)),
      master_seed_(master_seed),
      input_dim_(input_dim),
      classifiers_(std::move(classifiers)),
      stats_(stats),
      normalization_(std::move(normalization)) {
  config_.threads = 0;  // execution setting, not part of the pool
  descriptors_.reserve(classifiers_.size());
  for (const auto& c : classifiers_) {
    if (encode(c.spec, input_dim_) != c.descriptor) {
      throw Error(ErrorCode::kFormat,
                  "descriptor " + c.descriptor.to_string() + " does not match its spec");
    }
    if (c.network.input_dim != input_dim_ || c.network.hidden_dim != c.spec.hidden_nodes) {
      throw Error(ErrorCode::kFormat, "network shape does not match its spec");
    }
    descriptors_.push_back(c.descriptor);
  }
  pool_kw_ = kw_variance(descriptors_);
}

Pool build_pool(const PoolConfig& config, const DatasetBundle& data, std::uint64_t master_seed) {
  config.validate();
  const int d = static_cast<int>(data.train.dim());
  if (data.train.empty()) throw Error(ErrorCode::kEmptySplit, "training split has no samples");
  if (data.validation.empty()) throw Error(ErrorCode::kEmptySplit, "validation split has no samples");
  if (config.forced_spec) validate_spec(*config.forced_spec, d);

  const int limit = config.attempt_limit();
  const int workers = worker_count(config);
  std::vector<TrainedClassifier> accepted;
  Pool::Stats stats;

  int next = 0;
  while (static_cast<int>(accepted.size()) < config.size && next < limit) {
    // Train a batch of consecutive attempts, then consume them in order.
    const int batch = std::min(workers, limit - next);
    std::vector<Attempt> results(batch);
    if (batch == 1) {
      results[0] = run_attempt(config, data.train, data.validation, master_seed, next);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(batch);
      for (int t = 0; t < batch; ++t) {
        threads.emplace_back([&, t] {
          results[t] = run_attempt(config, data.train, data.validation, master_seed, next + t);
        });
      }
    }
    for (auto& r : results) {
      if (static_cast<int>(accepted.size()) == config.size) break;
      ++stats.attempts;
      if (r.accepted) {
        accepted.push_back(std::move(r.classifier));
      } else {
        ++stats.rejections;
      }
    }
    next += batch;
  }
  if (static_cast<int>(accepted.size()) < config.size) {
    throw Error(ErrorCode::kExhaustion,
                "only " + std::to_string(accepted.size()) + " of " + std::to_string(config.size) +
                    " classifiers reached validation error below " +
                    std::to_string(config.error_cap) + " within " + std::to_string(limit) +
                    " attempts");
  }
  return Pool(config, master_seed, d, std::move(accepted), stats, data.stats);
}

std::uint64_t candidate_seed(std::uint64_t master_seed, int index) {
  if (index == 0) return master_seed;
  return derive_seed(master_seed, StreamPurpose::kPoolCandidate, static_cast<std::uint64_t>(index));
}

Pool build_max_diversity_pool(const PoolConfig& config, const DatasetBundle& data,
                              std::uint64_t master_seed) {
  config.validate();
  std::optional<Pool> best;
  for (int c = 0; c < config.candidates; ++c) {
    Pool candidate = build_pool(config, data, candidate_seed(master_seed, c));
    if (!best || candidate.pool_kw() > best->pool_kw()) {
      auto stats = candidate.stats();
      stats.candidate = c;
      best = Pool(config, candidate.master_seed(), candidate.input_dim(), candidate.classifiers(),
                  stats, candidate.normalization());
    }
  }
  return std::move(*best);
}

std::vector<std::uint8_t> serialize_pool(const Pool& pool) {
  Writer w;
  w.raw(std::string(kMagic.data(), kMagic.size()));
  w.u32(kPoolFormatVersion);
  w.u64(0);  // payload length, patched below

  w.u64(pool.master_seed());
  write_config(w, pool.config());
  w.i32(pool.input_dim());
  w.i32(pool.stats().attempts);
  w.i32(pool.stats().rejections);
  w.i32(pool.stats().candidate);
  const auto& norm = pool.normalization();
  w.u8(norm ? 1 : 0);
  if (norm) {
    w.u32(static_cast<std::uint32_t>(norm->dim()));
    w.f64s(norm->minimum());
    w.f64s(norm->maximum());
  }
  w.f64(pool.pool_kw());
  w.u32(static_cast<std::uint32_t>(pool.size()));
  for (const auto& c : pool.classifiers()) {
    w.raw(c.descriptor.to_string());
    w.i32(c.spec.hidden_nodes);
    w.u8(static_cast<std::uint8_t>(c.spec.activation));
    w.u8(static_cast<std::uint8_t>(c.spec.learning_rate_index));
    w.f64(c.network.learning_rate);
    w.f64(c.validation_error);
    for (auto block : c.network.weights.blocks()) {
      for (double v : block) w.f64(v);
    }
  }

  auto& bytes = w.bytes();
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  for (int i = 0; i < 8; ++i) {
    bytes[kMagic.size() + 4 + i] = static_cast<std::uint8_t>(payload >> (8 * i));
  }
  const auto sum = fnv1a(bytes.data(), bytes.size());
  w.u64(sum);
  return std::move(bytes);
}

Pool deserialize_pool(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kFormat, "not a pool file (bad magic)");
  }
  Reader header(bytes.data() + kMagic.size(), bytes.size() - kMagic.size());
  const auto version = header.u32();
  if (version != kPoolFormatVersion) {
    throw Error(ErrorCode::kVersion, "pool file version " + std::to_string(version) +
                                         " is not supported (expected " +
                                         std::to_string(kPoolFormatVersion) + ")");
  }
  const auto payload = header.u64();
  if (bytes.size() < kHeaderBytes + 8 || bytes.size() - kHeaderBytes - 8 != payload) {
    throw Error(ErrorCode::kFormat, "pool file is truncated or has trailing bytes");
  }
  const std::size_t body_end = kHeaderBytes + payload;
  Reader trailer(bytes.data() + body_end, 8);
  if (trailer.u64() != fnv1a(bytes.data(), body_end)) {
    throw Error(ErrorCode::kChecksum, "pool file checksum mismatch");
  }

  Reader r(bytes.data() + kHeaderBytes, payload);
  const auto master_seed = r.u64();
  auto config = read_config(r);
  const int input_dim = r.i32();
  Pool::Stats stats;
  stats.attempts = r.i32();
  stats.rejections = r.i32();
  stats.candidate = r.i32();
  std::optional<NormalizationStats> norm;
  if (r.u8() != 0) {
    const auto dim = r.u32();
    std::vector<double> lo;
    std::vector<double> hi;
    r.f64s(lo, dim);
    r.f64s(hi, dim);
    norm = NormalizationStats(std::move(lo), std::move(hi));
  }
  const double stored_kw = r.f64();
  const auto count = r.u32();
  if (input_dim < 1 || input_dim + 1 > kMaxHiddenNodes) {
    throw Error(ErrorCode::kFormat, "pool file has invalid input dimension");
  }
  std::vector<TrainedClassifier> classifiers;
  classifiers.reserve(std::min<std::uint32_t>(count, 4096));
  for (std::uint32_t i = 0; i < count; ++i) {
    TrainedClassifier c;
    c.descriptor = IdentityDescriptor::from_string(r.raw(kDescriptorBits));
    c.spec.hidden_nodes = r.i32();
    c.spec.activation = static_cast<Activation>(r.u8());
    c.spec.learning_rate_index = r.u8();
    if (c.spec.hidden_nodes < 1 || c.spec.hidden_nodes > kMaxHiddenNodes) {
      throw Error(ErrorCode::kFormat, "classifier record has invalid hidden node count");
    }
    c.network = MlpNetwork::zeros(input_dim, c.spec.hidden_nodes, c.spec.activation, 0.0);
    c.network.learning_rate = r.f64();
    c.validation_error = r.f64();
    for (auto block : c.network.weights.blocks()) {
      for (double& v : block) v = r.f64();
    }
    classifiers.push_back(std::move(c));
  }
  if (!r.done()) throw Error(ErrorCode::kFormat, "pool payload has trailing bytes");

  try {
    Pool pool(std::move(config), master_seed, input_dim, std::move(classifiers), stats,
              std::move(norm));
    if (std::bit_cast<std::uint64_t>(pool.pool_kw()) != std::bit_cast<std::uint64_t>(stored_kw)) {
      throw Error(ErrorCode::kFormat, "stored pool diversity does not match its descriptors");
    }
    return pool;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormat) throw;
    throw Error(ErrorCode::kFormat, std::string("inconsistent pool record: ") + e.what());
  }
}

void save_pool(const Pool& pool, const std::filesystem::path& path) {
  const auto bytes = serialize_pool(pool);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

Pool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_pool(bytes);
}

}  // namespace forge
