#include "teamscope/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <thread>

#include "teamscope/binary_io.hpp"
#include "teamscope/digest.hpp"
#include "teamscope/error.hpp"
#include "teamscope/rng.hpp"
#include "teamscope/simd/kernels.hpp"

namespace teamscope {

std::string EmbeddingConfig::hash() const {
  return sha256_hex(fmt::format("dim={};epochs={};neg={};lr={:.17g};min_lr={:.17g};min_count={};seed={}", dimension,
                                epochs, negatives, learning_rate, min_learning_rate, min_count, seed));
}

EmbeddingModel::EmbeddingModel(std::size_t dimension, std::vector<std::string> vocab, std::vector<float> vectors,
                               std::string config_hash)
    : dimension_(dimension), vocab_(std::move(vocab)), vectors_(std::move(vectors)), config_hash_(std::move(config_hash)) {
  if (vectors_.size() != vocab_.size() * dimension_) throw std::invalid_argument("embedding matrix has wrong size");
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) throw std::invalid_argument("duplicate keyword " + vocab_[i]);
  }
}

bool EmbeddingModel::contains(std::string_view keyword) const { return index_.count(std::string(keyword)) > 0; }

const float* EmbeddingModel::vector(std::string_view keyword) const {
  auto it = index_.find(std::string(keyword));
  return it == index_.end() ? nullptr : vectors_.data() + it->second * dimension_;
}

namespace {

constexpr double kMaxExp = 6.0;

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

struct Trainer {
  const EmbeddingConfig& cfg;
  std::size_t dim;
  std::vector<std::vector<std::uint32_t>> bags;  // vocab indices
  std::vector<double> noise_cdf;
  std::vector<float> in, out;
  std::uint64_t total_pairs = 0;

  std::uint32_t sample_negative(Rng& rng) const {
    const double u = uniform01(rng) * noise_cdf.back();
    const auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - noise_cdf.begin(), noise_cdf.size() - 1));
  }

  // Trains bags[order[lo..hi)] for one epoch; `done` counts processed pairs for the learning-rate schedule.
  void run(std::span<const std::size_t> order, Rng& rng, std::uint64_t& done, std::uint64_t progress_scale) {
    const auto& k = simd::kernels();
    std::vector<float> grad(dim);
    const double span_pairs = static_cast<double>(total_pairs) * static_cast<double>(cfg.epochs);
    for (std::size_t b : order) {
      const auto& bag = bags[b];
      for (std::size_t i = 0; i < bag.size(); ++i) {
        for (std::size_t j = 0; j < bag.size(); ++j) {
          if (i == j || bag[i] == bag[j]) continue;
          const double progress = static_cast<double>(done * progress_scale) / std::max(1.0, span_pairs);
          const auto lr = static_cast<float>(
              std::max(cfg.min_learning_rate, cfg.learning_rate * (1.0 - std::min(1.0, progress))));
          ++done;
          float* center = in.data() + static_cast<std::size_t>(bag[i]) * dim;
          std::fill(grad.begin(), grad.end(), 0.0f);
          for (std::size_t s = 0; s <= cfg.negatives; ++s) {
            std::uint32_t target;
            float label;
            if (s == 0) {
              target = bag[j];
              label = 1.0f;
            } else {
              target = sample_negative(rng);
              if (target == bag[j]) continue;
              label = 0.0f;
            }
            float* ctx = out.data() + static_cast<std::size_t>(target) * dim;
            const float f = k.dot_f32(center, ctx, dim);
            float g;
            if (f > kMaxExp) {
              g = (label - 1.0f) * lr;
            } else if (f < -kMaxExp) {
              g = label * lr;
            } else {
              g = (label - sigmoid(f)) * lr;
            }
            k.axpy_f32(g, ctx, grad.data(), dim);
            k.axpy_f32(g, center, ctx, dim);
          }
          k.axpy_f32(1.0f, grad.data(), center, dim);
        }
      }
    }
  }
};

}  // namespace

EmbeddingModel train_embeddings(std::span<const std::vector<std::string>> bags, const EmbeddingConfig& cfg) {
  if (cfg.dimension == 0) throw ConfigError("embedding dimension must be positive");
  std::map<std::string, std::size_t> counts;
  for (const auto& bag : bags) {
    for (const auto& kw : bag) ++counts[kw];
  }
  std::vector<std::string> vocab;
  std::vector<std::size_t> freq;
  for (const auto& [kw, c] : counts) {
    if (c >= std::max<std::size_t>(1, cfg.min_count)) {
      vocab.push_back(kw);
      freq.push_back(c);
    }
  }
  if (vocab.empty()) throw DataError("embedding vocabulary is empty (no keyword reaches min_count)");
  std::map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index[vocab[i]] = static_cast<std::uint32_t>(i);

  Trainer t{cfg, cfg.dimension, {}, {}, {}, {}, 0};
  for (const auto& bag : bags) {
    std::vector<std::uint32_t> ids;
    for (const auto& kw : bag) {
      if (auto it = index.find(kw); it != index.end()) ids.push_back(it->second);
    }
    if (ids.size() < 2) continue;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) t.total_pairs += (i != j && ids[i] != ids[j]) ? 1 : 0;
    }
    t.bags.push_back(std::move(ids));
  }
  double acc = 0.0;
  for (std::size_t c : freq) {
    acc += std::pow(static_cast<double>(c), 0.75);
    t.noise_cdf.push_back(acc);
  }

  const std::size_t dim = cfg.dimension;
  t.in.resize(vocab.size() * dim);
  t.out.assign(vocab.size() * dim, 0.0f);
  {
    Rng init(substream_seed(cfg.seed, 0x1e7, 0));
    for (auto& v : t.in) v = static_cast<float>((uniform01(init) - 0.5) / static_cast<double>(dim));
  }

  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, t.bags.size()));
  std::vector<std::size_t> order(t.bags.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::uint64_t done = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffler(substream_seed(cfg.seed, 0x5f, epoch));
    shuffle(std::span(order), shuffler);
    if (threads == 1) {
      Rng rng(substream_seed(cfg.seed, 0x9e, epoch));
      t.run(order, rng, done, 1);
      continue;
    }
    // Lock-free updates on shared rows; results depend on thread interleaving.
    std::vector<std::thread> pool;
    std::vector<std::uint64_t> local(threads, done / threads);
    const std::size_t chunk = (order.size() + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
      const std::size_t lo = std::min(order.size(), w * chunk), hi = std::min(order.size(), lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        Rng rng(substream_seed(cfg.seed, 0x9e + w + 1, epoch));
        t.run(std::span(order).subspan(lo, hi - lo), rng, local[w], threads);
      });
    }
    for (auto& th : pool) th.join();
    done = 0;
    for (auto l : local) done += l;
  }
  for (float v : t.in) {
    if (!std::isfinite(v)) throw NumericError("embedding training diverged");
  }
  return EmbeddingModel(dim, std::move(vocab), std::move(t.in), cfg.hash());
}

std::optional<double> typicality(const EmbeddingModel& model, std::string_view k1, std::string_view k2) {
  const float* a = model.vector(k1);
  const float* b = model.vector(k2);
  if (!a || !b) return std::nullopt;
  return static_cast<double>(simd::kernels().dot_f32(a, b, model.dimension()));
}

std::optional<double> novelty(const EmbeddingModel& model, std::string_view k1, std::string_view k2) {
  const auto t = typicality(model, k1, k2);
  if (!t) return std::nullopt;
  return -*t;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embeddings " + path.string());
  BinaryWriter w(out);
  w.header("TSEV", kEmbeddingVersion);
  w.u32(static_cast<std::uint32_t>(model.dimension()));
  w.u32(static_cast<std::uint32_t>(model.vocab_size()));
  w.str(model.config_hash());
  for (const auto& kw : model.vocab()) w.str(kw);
  w.f32s(model.vectors());
  if (!out) throw IoError("failed writing embeddings " + path.string());
}

EmbeddingModel load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read embeddings " + path.string());
  BinaryReader r(in, path.string());
  r.expect_header("TSEV", kEmbeddingVersion);
  const std::size_t dim = r.u32();
  const std::size_t n = r.u32();
  std::string hash = r.str();
  std::vector<std::string> vocab;
  vocab.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vocab.push_back(r.str());
  auto vectors = r.f32s();
  if (vectors.size() != n * dim) throw FormatError(path.string() + ": embedding matrix size mismatch");
  try {
    return EmbeddingModel(dim, std::move(vocab), std::move(vectors), std::move(hash));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace teamscope
