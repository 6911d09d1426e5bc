#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teamscope {

class AuthorIndex;
class Corpus;
struct PaperRecord;

enum Feature : std::size_t {
  kIsFirstAuthor,
  kIsCorresponding,
  kFracRefsIntroduced,
  kFracTopicsDirected,
  kCareerAge,
  kLogPriorCitations,
  kPriorTopics,
  kPriorPapers,
  kBylinePositionNorm,
  kRefsMissing,    // paper has no references; kFracRefsIntroduced imputed as 0
  kTopicsMissing,  // paper has no topics; kFracTopicsDirected imputed as 0
  kFeatureCount,
};

std::string_view feature_name(std::size_t f);

using FeatureVector = std::array<double, kFeatureCount>;

struct AuthorPaperFeatures {
  std::string paper_id;
  std::string author_id;
  std::size_t position = 0;
  std::size_t team_size = 0;
  FeatureVector x{};
};

// |refs(paper) ∩ prior_references(author, year)| / |refs(paper)|; nullopt without references.
std::optional<double> introduced_references(const PaperRecord& paper, std::string_view author,
                                            const AuthorIndex& index);

// |topics(paper) ∩ prior_topics(author, year)| / |topics(paper)|; nullopt without topics.
std::optional<double> directed_topics(const PaperRecord& paper, std::string_view author, const AuthorIndex& index);

// Features for one byline author. Career quantities use only papers dated
// before the paper's year.
AuthorPaperFeatures author_paper_features(const PaperRecord& paper, std::size_t position, const AuthorIndex& index);

// One row per byline author, in byline order.
std::vector<AuthorPaperFeatures> paper_features(const PaperRecord& paper, const AuthorIndex& index);

// All papers, corpus order then byline order.
std::vector<AuthorPaperFeatures> extract_features(const Corpus& corpus, const AuthorIndex& index,
                                                  std::size_t threads = 1);

struct LabeledExample {
  std::string paper_id;
  FeatureVector x{};
  int label = 0;  // 1 = Lead, 0 = Support
};

struct ClassifierConfig {
  std::size_t hidden = 16;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  double l2 = 1e-4;
  double validation_fraction = 0.2;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;

  std::string hash() const;
};

// One tanh hidden layer and a sigmoid output giving P(Lead).
class RoleClassifier {
 public:
  RoleClassifier() = default;
  RoleClassifier(std::size_t hidden, FeatureVector mean, FeatureVector scale);

  std::size_t hidden() const { return hidden_; }
  double probability(const FeatureVector& x) const;
  bool predict(const FeatureVector& x) const { return probability(x) >= threshold_; }

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }
  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(std::string h) { config_hash_ = std::move(h); }

  // Flat parameter layout: W1 (hidden x kFeatureCount, row-major), b1, w2, b2.
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }
  const FeatureVector& mean() const { return mean_; }
  const FeatureVector& scale() const { return scale_; }

  FeatureVector normalize(const FeatureVector& x) const;
  // Forward pass on normalized input; fills `hidden_out` when non-null.
  double forward(const FeatureVector& z, std::vector<double>* hidden_out = nullptr) const;

 private:
  std::size_t hidden_ = 0;
  FeatureVector mean_{};
  FeatureVector scale_{};
  std::vector<double> params_;
  double threshold_ = 0.5;
  std::string config_hash_;
};

struct PrecisionRecall {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::optional<double> precision;  // nullopt with no predicted positives
  std::optional<double> recall;     // nullopt with no positive labels
};

PrecisionRecall evaluate_precision_recall(std::span<const int> predictions, std::span<const int> labels);

struct TrainingReport {
  std::vector<std::string> train_papers;
  std::vector<std::string> validation_papers;
  std::vector<std::string> test_papers;
  std::size_t train_examples = 0;
  std::size_t validation_examples = 0;
  std::size_t test_examples = 0;
  std::size_t best_epoch = 0;
  double threshold = 0.5;
  double test_base_rate = 0.0;
  PrecisionRecall test;
};

struct TrainedClassifier {
  RoleClassifier model;
  TrainingReport report;
};

// Splits by paper, trains with Adam on cross-entropy, keeps the epoch with the
// lowest validation loss and picks the F1-maximizing threshold on the
// validation split. Throws DataError unless both classes are present.
TrainedClassifier train_role_classifier(std::span<const LabeledExample> examples, const ClassifierConfig& config);

// Mean absolute difference over twice the mean; 0 for equal or all-zero values.
double gini(std::span<const double> values);

enum class Unevenness { Gini, Variance, Range };

std::string_view unevenness_name(Unevenness u);
std::optional<Unevenness> unevenness_from_name(std::string_view name);
double unevenness(std::span<const double> p, Unevenness kind);

// L-hat = c0 + c1 * mean(p) + c2 * u(p) + c3 / n, clipped to [1/n, 1].
// The default head is mean(p).
struct LRatioHead {
  Unevenness kind = Unevenness::Gini;
  std::array<double, 4> coef{0.0, 1.0, 0.0, 0.0};
};

double predict_lratio(std::span<const double> probabilities, const LRatioHead& head);
double predict_lratio(std::span<const AuthorPaperFeatures> authors, const RoleClassifier& model,
                      const LRatioHead& head);

struct LRatioTarget {
  std::vector<double> probabilities;
  double lratio = 0.0;
};

// Least-squares fit of the head coefficients.
LRatioHead fit_lratio_head(std::span<const LRatioTarget> targets, Unevenness kind = Unevenness::Gini);

struct RoleModel {
  RoleClassifier classifier;
  LRatioHead head;
};

inline constexpr std::uint32_t kRoleModelVersion = 1;

void save_role_model(const std::filesystem::path& path, const RoleModel& model);
RoleModel load_role_model(const std::filesystem::path& path);

}  // namespace teamscope
