#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace teamscope {

struct EmbeddingConfig {
  std::size_t dimension = 100;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::size_t min_count = 5;
  std::uint64_t seed = 0;
  // 1 = deterministic; more threads train lock-free and are not bitwise reproducible.
  std::size_t threads = 1;

  std::string hash() const;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // `vectors` holds vocab.size() rows of `dimension` floats.
  EmbeddingModel(std::size_t dimension, std::vector<std::string> vocab, std::vector<float> vectors,
                 std::string config_hash = {});

  std::size_t dimension() const { return dimension_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<float>& vectors() const { return vectors_; }
  const std::string& config_hash() const { return config_hash_; }

  bool contains(std::string_view keyword) const;
  // Row for a keyword, or nullptr when it is not embedded.
  const float* vector(std::string_view keyword) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> vocab_;
  std::vector<float> vectors_;
  std::string config_hash_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Skip-gram with negative sampling. Each bag is one unordered context: every
// ordered pair of distinct keywords in it is a positive example. Negatives
// follow the unigram^(3/4) distribution. Throws DataError when no keyword
// reaches min_count.
EmbeddingModel train_embeddings(std::span<const std::vector<std::string>> bags, const EmbeddingConfig& config);

// Inner product of the two vectors; nullopt if either keyword is missing.
std::optional<double> typicality(const EmbeddingModel& model, std::string_view k1, std::string_view k2);
std::optional<double> novelty(const EmbeddingModel& model, std::string_view k1, std::string_view k2);

inline constexpr std::uint32_t kEmbeddingVersion = 1;

void save_embeddings(const std::filesystem::path& path, const EmbeddingModel& model);
EmbeddingModel load_embeddings(const std::filesystem::path& path);

}  // namespace teamscope
