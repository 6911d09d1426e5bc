#include "teamscope/role_predictor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <fmt/format.h>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "teamscope/binary_io.hpp"
#include "teamscope/corpus.hpp"
#include "teamscope/digest.hpp"
#include "teamscope/error.hpp"
#include "teamscope/parallel.hpp"
#include "teamscope/rng.hpp"
#include "teamscope/simd/kernels.hpp"

namespace teamscope {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "is_first_author",   "is_corresponding",  "frac_refs_introduced", "frac_topics_directed",
    "career_age",        "log_prior_citations", "n_prior_topics",     "n_prior_papers",
    "byline_position_norm", "refs_missing",   "topics_missing",
};

constexpr double kLogitClamp = 30.0;

double sigmoid(double o) {
  o = std::clamp(o, -kLogitClamp, kLogitClamp);
  return 1.0 / (1.0 + std::exp(-o));
}

}  // namespace

std::string_view feature_name(std::size_t f) { return kFeatureNames.at(f); }

std::optional<double> introduced_references(const PaperRecord& paper, std::string_view author,
                                            const AuthorIndex& index) {
  if (paper.refs.empty()) return std::nullopt;
  std::size_t known = 0;
  for (const auto& r : paper.refs) known += index.knew_reference(author, r, paper.year) ? 1 : 0;
  return static_cast<double>(known) / static_cast<double>(paper.refs.size());
}

std::optional<double> directed_topics(const PaperRecord& paper, std::string_view author, const AuthorIndex& index) {
  if (paper.topics.empty()) return std::nullopt;
  std::unordered_set<std::string> distinct(paper.topics.begin(), paper.topics.end());
  std::size_t known = 0;
  for (const auto& t : distinct) known += index.knew_topic(author, t, paper.year) ? 1 : 0;
  return static_cast<double>(known) / static_cast<double>(distinct.size());
}

AuthorPaperFeatures author_paper_features(const PaperRecord& paper, std::size_t position, const AuthorIndex& index) {
  const std::string& a = paper.authors.at(position);
  const std::size_t n = paper.team_size();
  AuthorPaperFeatures f{paper.id, a, position, n, {}};
  auto& x = f.x;
  x[kIsFirstAuthor] = position == 0 ? 1.0 : 0.0;
  x[kIsCorresponding] = paper.is_corresponding(a) ? 1.0 : 0.0;
  const auto refs = introduced_references(paper, a, index);
  const auto topics = directed_topics(paper, a, index);
  x[kFracRefsIntroduced] = refs.value_or(0.0);
  x[kRefsMissing] = refs ? 0.0 : 1.0;
  x[kFracTopicsDirected] = topics.value_or(0.0);
  x[kTopicsMissing] = topics ? 0.0 : 1.0;
  x[kCareerAge] = static_cast<double>(index.career_age(a, paper.year));
  x[kLogPriorCitations] = std::log1p(static_cast<double>(index.prior_citations(a, paper.year)));
  x[kPriorTopics] = static_cast<double>(index.prior_topic_count(a, paper.year));
  x[kPriorPapers] = static_cast<double>(index.prior_papers(a, paper.year));
  x[kBylinePositionNorm] = n > 1 ? static_cast<double>(position) / static_cast<double>(n - 1) : 0.0;
  return f;
}

std::vector<AuthorPaperFeatures> paper_features(const PaperRecord& paper, const AuthorIndex& index) {
  std::vector<AuthorPaperFeatures> out;
  out.reserve(paper.team_size());
  for (std::size_t i = 0; i < paper.team_size(); ++i) out.push_back(author_paper_features(paper, i, index));
  return out;
}

std::vector<AuthorPaperFeatures> extract_features(const Corpus& corpus, const AuthorIndex& index,
                                                  std::size_t threads) {
  std::vector<std::vector<AuthorPaperFeatures>> per_paper(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) { per_paper[i] = paper_features(corpus.paper(i), index); });
  std::vector<AuthorPaperFeatures> out;
  for (auto& rows : per_paper) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

std::string ClassifierConfig::hash() const {
  return sha256_hex(fmt::format("hidden={};epochs={};batch={};lr={:.17g};l2={:.17g};val={:.17g};test={:.17g};seed={}",
                                hidden, epochs, batch_size, learning_rate, l2, validation_fraction, test_fraction,
                                seed));
}

// ---------------------------------------------------------------------------

RoleClassifier::RoleClassifier(std::size_t hidden, FeatureVector mean, FeatureVector scale)
    : hidden_(hidden), mean_(mean), scale_(scale), params_(hidden * kFeatureCount + 2 * hidden + 1, 0.0) {}

FeatureVector RoleClassifier::normalize(const FeatureVector& x) const {
  FeatureVector z{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) z[i] = (x[i] - mean_[i]) / scale_[i];
  return z;
}

double RoleClassifier::forward(const FeatureVector& z, std::vector<double>* hidden_out) const {
  const auto& k = simd::kernels();
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * kFeatureCount;
  const double* w2 = b1 + hidden_;
  const double b2 = w2[hidden_];
  double o = b2;
  if (hidden_out) hidden_out->resize(hidden_);
  for (std::size_t j = 0; j < hidden_; ++j) {
    const double h = std::tanh(k.dot_f64(w1 + j * kFeatureCount, z.data(), kFeatureCount) + b1[j]);
    if (hidden_out) (*hidden_out)[j] = h;
    o += w2[j] * h;
  }
  return sigmoid(o);
}

double RoleClassifier::probability(const FeatureVector& x) const { return forward(normalize(x)); }

PrecisionRecall evaluate_precision_recall(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("predictions and labels differ in length");
  PrecisionRecall pr;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] != 0, l = labels[i] != 0;
    if (p && l) ++pr.tp;
    else if (p) ++pr.fp;
    else if (l) ++pr.fn;
    else ++pr.tn;
  }
  if (pr.tp + pr.fp > 0) pr.precision = static_cast<double>(pr.tp) / static_cast<double>(pr.tp + pr.fp);
  if (pr.tp + pr.fn > 0) pr.recall = static_cast<double>(pr.tp) / static_cast<double>(pr.tp + pr.fn);
  return pr;
}

namespace {

struct Split {
  std::vector<std::size_t> train, validation, test;
};

Split split_by_paper(std::span<const LabeledExample> examples, const ClassifierConfig& cfg, TrainingReport& report) {
  std::set<std::string> ids;
  for (const auto& e : examples) ids.insert(e.paper_id);
  std::vector<std::string> papers(ids.begin(), ids.end());
  Rng rng(substream_seed(cfg.seed, 0x5b1, 0));
  shuffle(std::span(papers), rng);

  const auto n = papers.size();
  auto n_test = static_cast<std::size_t>(std::floor(cfg.test_fraction * static_cast<double>(n)));
  auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(n)));
  if (n_test + n_val >= n) n_test = n_val = 0;
  std::map<std::string, int> bucket;
  for (std::size_t i = 0; i < n; ++i) {
    const int b = i < n_test ? 2 : (i < n_test + n_val ? 1 : 0);
    bucket[papers[i]] = b;
    (b == 0 ? report.train_papers : b == 1 ? report.validation_papers : report.test_papers).push_back(papers[i]);
  }
  for (auto* v : {&report.train_papers, &report.validation_papers, &report.test_papers}) std::sort(v->begin(), v->end());

  Split s;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const int b = bucket[examples[i].paper_id];
    (b == 0 ? s.train : b == 1 ? s.validation : s.test).push_back(i);
  }
  return s;
}

double mean_loss(const RoleClassifier& m, std::span<const LabeledExample> ex, std::span<const std::size_t> idx) {
  if (idx.empty()) return 0.0;
  double loss = 0.0;
  for (std::size_t i : idx) {
    const double p = m.forward(m.normalize(ex[i].x));
    loss -= ex[i].label ? std::log(p) : std::log1p(-p);
  }
  return loss / static_cast<double>(idx.size());
}

// Highest-F1 cut between consecutive observed probabilities, placed at their
// midpoint; ties take the lower threshold.
double best_f1_threshold(const RoleClassifier& m, std::span<const LabeledExample> ex,
                         std::span<const std::size_t> idx) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(idx.size());
  std::size_t positives = 0;
  for (std::size_t i : idx) {
    scored.emplace_back(m.probability(ex[i].x), ex[i].label);
    positives += ex[i].label ? 1 : 0;
  }
  if (scored.empty() || positives == 0) return 0.5;
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double best_f1 = -1.0, best_t = 0.5;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    (scored[i].second ? tp : fp) += 1;
    if (i + 1 < scored.size() && scored[i + 1].first == scored[i].first) continue;
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(tp + fp + positives);
    if (f1 >= best_f1) {
      best_f1 = f1;
      best_t = i + 1 < scored.size() ? 0.5 * (scored[i].first + scored[i + 1].first) : scored[i].first;
    }
  }
  return best_t;
}

}  // namespace

TrainedClassifier train_role_classifier(std::span<const LabeledExample> examples, const ClassifierConfig& cfg) {
  std::size_t positives = 0;
  for (const auto& e : examples) positives += e.label ? 1 : 0;
  if (positives == 0 || positives == examples.size()) {
    throw DataError("role classifier needs both Lead and Support examples");
  }
  if (cfg.hidden == 0) throw ConfigError("hidden layer width must be positive");

  TrainedClassifier out;
  TrainingReport& report = out.report;
  const Split split = split_by_paper(examples, cfg, report);
  report.train_examples = split.train.size();
  report.validation_examples = split.validation.size();
  report.test_examples = split.test.size();
  if (split.train.empty()) throw DataError("role classifier training split is empty");

  FeatureVector mean{}, scale{};
  for (std::size_t i : split.train) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) mean[f] += examples[i].x[f];
  }
  for (auto& m : mean) m /= static_cast<double>(split.train.size());
  for (std::size_t i : split.train) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) scale[f] += std::pow(examples[i].x[f] - mean[f], 2);
  }
  for (auto& s : scale) {
    s = std::sqrt(s / static_cast<double>(split.train.size()));
    if (!(s > 1e-12)) s = 1.0;
  }

  const std::size_t H = cfg.hidden, D = kFeatureCount;
  RoleClassifier model(H, mean, scale);
  model.set_config_hash(cfg.hash());
  auto& theta = model.parameters();
  {
    Rng init(substream_seed(cfg.seed, 0x1417, 0));
    const double s1 = 1.0 / std::sqrt(static_cast<double>(D));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(H));
    for (std::size_t i = 0; i < H * D; ++i) theta[i] = s1 * standard_normal(init);
    for (std::size_t j = 0; j < H; ++j) theta[H * D + H + j] = s2 * standard_normal(init);
  }

  std::vector<FeatureVector> z(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) z[i] = model.normalize(examples[i].x);

  const auto& k = simd::kernels();
  const std::size_t P = theta.size();
  std::vector<double> grad(P), m1(P, 0.0), m2(P, 0.0), hidden;
  constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  std::size_t step = 0;

  auto best_theta = theta;
  double best_val = std::numeric_limits<double>::infinity();
  const auto& monitor = split.validation.empty() ? split.train : split.validation;

  std::vector<std::size_t> order = split.train;
  const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(substream_seed(cfg.seed, 0xe90c, epoch));
    shuffle(std::span(order), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      double* gw1 = grad.data();
      double* gb1 = gw1 + H * D;
      double* gw2 = gb1 + H;
      double& gb2 = gw2[H];
      const double* w2 = theta.data() + H * D + H;
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        const double p = model.forward(z[i], &hidden);
        const double d_out = p - static_cast<double>(examples[i].label);
        gb2 += d_out;
        k.axpy_f64(d_out, hidden.data(), gw2, H);
        for (std::size_t j = 0; j < H; ++j) {
          const double dh = d_out * w2[j] * (1.0 - hidden[j] * hidden[j]);
          k.axpy_f64(dh, z[i].data(), gw1 + j * D, D);
          gb1[j] += dh;
        }
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t q = 0; q < P; ++q) grad[q] *= inv;
      // Weight decay on the two weight blocks only.
      for (std::size_t q = 0; q < H * D; ++q) grad[q] += cfg.l2 * theta[q];
      for (std::size_t q = H * D + H; q < H * D + 2 * H; ++q) grad[q] += cfg.l2 * theta[q];

      ++step;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t q = 0; q < P; ++q) {
        m1[q] = beta1 * m1[q] + (1.0 - beta1) * grad[q];
        m2[q] = beta2 * m2[q] + (1.0 - beta2) * grad[q] * grad[q];
        theta[q] -= cfg.learning_rate * (m1[q] / c1) / (std::sqrt(m2[q] / c2) + adam_eps);
      }
    }
    const double val = mean_loss(model, examples, monitor);
    if (val < best_val) {
      best_val = val;
      best_theta = theta;
      report.best_epoch = epoch;
    }
  }
  theta = best_theta;

  model.set_threshold(best_f1_threshold(model, examples, monitor));
  report.threshold = model.threshold();

  std::vector<int> pred, labels;
  for (std::size_t i : split.test) {
    pred.push_back(model.predict(examples[i].x) ? 1 : 0);
    labels.push_back(examples[i].label);
  }
  report.test = evaluate_precision_recall(pred, labels);
  if (!labels.empty()) {
    report.test_base_rate = static_cast<double>(std::count(labels.begin(), labels.end(), 1)) /
                            static_cast<double>(labels.size());
  }
  out.model = std::move(model);
  return out;
}

// ---------------------------------------------------------------------------

double gini(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  if (!(sum > 0.0)) return 0.0;
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  // sum_ij |x_i - x_j| = 2 sum_i (2i - n + 1) x_(i) over sorted values.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * s[i];
  return acc / (static_cast<double>(n) * sum);
}

std::string_view unevenness_name(Unevenness u) {
  switch (u) {
    case Unevenness::Gini:
      return "gini";
    case Unevenness::Variance:
      return "variance";
    case Unevenness::Range:
      return "range";
  }
  return "gini";
}

std::optional<Unevenness> unevenness_from_name(std::string_view name) {
  for (auto u : {Unevenness::Gini, Unevenness::Variance, Unevenness::Range}) {
    if (unevenness_name(u) == name) return u;
  }
  return std::nullopt;
}

double unevenness(std::span<const double> p, Unevenness kind) {
  if (p.empty()) return 0.0;
  switch (kind) {
    case Unevenness::Gini:
      return gini(p);
    case Unevenness::Variance: {
      const double m = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
      double v = 0.0;
      for (double x : p) v += (x - m) * (x - m);
      return v / static_cast<double>(p.size());
    }
    case Unevenness::Range: {
      const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
      return *hi - *lo;
    }
  }
  return 0.0;
}

namespace {

std::array<double, 4> head_inputs(std::span<const double> p, Unevenness kind) {
  const double n = static_cast<double>(p.size());
  return {1.0, std::accumulate(p.begin(), p.end(), 0.0) / n, unevenness(p, kind), 1.0 / n};
}

}  // namespace

double predict_lratio(std::span<const double> probabilities, const LRatioHead& head) {
  if (probabilities.empty()) throw std::invalid_argument("predict_lratio needs at least one author");
  const auto in = head_inputs(probabilities, head.kind);
  double v = 0.0;
  for (std::size_t i = 0; i < 4; ++i) v += head.coef[i] * in[i];
  const double lo = in[3];
  if (!std::isfinite(v)) v = lo;
  return std::clamp(v, lo, 1.0);
}

double predict_lratio(std::span<const AuthorPaperFeatures> authors, const RoleClassifier& model,
                      const LRatioHead& head) {
  std::vector<double> p;
  p.reserve(authors.size());
  for (const auto& a : authors) p.push_back(model.probability(a.x));
  return predict_lratio(p, head);
}

LRatioHead fit_lratio_head(std::span<const LRatioTarget> targets, Unevenness kind) {
  LRatioHead head;
  head.kind = kind;
  if (targets.empty()) return head;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(targets.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t r = 0; r < targets.size(); ++r) {
    if (targets[r].probabilities.empty()) throw DataError("L-ratio target without authors");
    const auto in = head_inputs(targets[r].probabilities, kind);
    for (std::size_t c = 0; c < 4; ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = in[c];
    y(static_cast<Eigen::Index>(r)) = targets[r].lratio;
  }
  // Minimum-norm solution keeps the fit defined when team sizes do not vary.
  const Eigen::VectorXd beta = X.completeOrthogonalDecomposition().solve(y);
  for (std::size_t c = 0; c < 4; ++c) head.coef[c] = beta(static_cast<Eigen::Index>(c));
  return head;
}

// ---------------------------------------------------------------------------

void save_role_model(const std::filesystem::path& path, const RoleModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model " + path.string());
  BinaryWriter w(out);
  w.header("TSRM", kRoleModelVersion);
  const auto& c = model.classifier;
  w.u32(static_cast<std::uint32_t>(kFeatureCount));
  for (std::size_t f = 0; f < kFeatureCount; ++f) w.str(feature_name(f));
  w.u32(static_cast<std::uint32_t>(c.hidden()));
  w.f64s(c.mean());
  w.f64s(c.scale());
  w.f64s(c.parameters());
  w.f64(c.threshold());
  w.str(c.config_hash());
  w.str(unevenness_name(model.head.kind));
  w.f64s(model.head.coef);
  if (!out) throw IoError("failed writing model " + path.string());
}

RoleModel load_role_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model " + path.string());
  BinaryReader r(in, path.string());
  r.expect_header("TSRM", kRoleModelVersion);
  if (r.u32() != kFeatureCount) throw FormatError(path.string() + ": feature count mismatch");
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    if (r.str() != feature_name(f)) throw FormatError(path.string() + ": feature layout mismatch");
  }
  const std::size_t hidden = r.u32();
  const auto mean = r.f64s();
  const auto scale = r.f64s();
  auto params = r.f64s();
  if (mean.size() != kFeatureCount || scale.size() != kFeatureCount ||
      params.size() != hidden * kFeatureCount + 2 * hidden + 1) {
    throw FormatError(path.string() + ": inconsistent model dimensions");
  }
  FeatureVector m{}, s{};
  std::copy(mean.begin(), mean.end(), m.begin());
  std::copy(scale.begin(), scale.end(), s.begin());
  RoleModel model;
  model.classifier = RoleClassifier(hidden, m, s);
  model.classifier.parameters() = std::move(params);
  model.classifier.set_threshold(r.f64());
  model.classifier.set_config_hash(r.str());
  const auto kind = unevenness_from_name(r.str());
  if (!kind) throw FormatError(path.string() + ": unknown unevenness measure");
  model.head.kind = *kind;
  const auto coef = r.f64s();
  if (coef.size() != 4) throw FormatError(path.string() + ": bad L-ratio head");
  std::copy(coef.begin(), coef.end(), model.head.coef.begin());
  return model;
}

}  // namespace teamscope
