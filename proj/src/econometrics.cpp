#include "teamscope/econometrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "teamscope/error.hpp"
#include "teamscope/parallel.hpp"
#include "teamscope/rng.hpp"
#include "teamscope/stats.hpp"

namespace teamscope {

const Coefficient* RegressionResult::find(const std::string& name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

void check_names(std::span<const Regressor> regressors) {
  std::set<std::string> seen;
  for (const auto& r : regressors) {
    if (!seen.insert(r.name).second) throw DataError("duplicate regressor '" + r.name + "'");
  }
}

// Solves min ||y - X b|| and fills estimates and standard errors. `absorbed`
// parameters (fixed effects) are subtracted from the residual degrees of freedom.
RegressionResult fit(const MatrixXd& X, const VectorXd& y, const std::vector<std::string>& names,
                     std::size_t absorbed, bool centered_r2, const SeOptions& se) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  if (n <= p + absorbed) {
    throw DataError("regression needs more observations (" + std::to_string(n) + ") than parameters (" +
                    std::to_string(p + absorbed) + ")");
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
  const double max_norm = X.colwise().norm().maxCoeff();
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p || !(max_norm > 0.0)) {
    // Name every column with weight in some null-space direction.
    Eigen::FullPivLU<MatrixXd> lu(X);
    lu.setThreshold(1e-10);
    const MatrixXd kernel = lu.kernel();
    std::vector<std::string> bad;
    for (Index c = 0; c < static_cast<Index>(p); ++c) {
      if (max_norm > 0.0 && kernel.row(c).cwiseAbs().maxCoeff() <= 1e-8 * kernel.cwiseAbs().maxCoeff()) continue;
      bad.push_back(names[static_cast<std::size_t>(c)]);
    }
    throw DataError("design matrix is rank deficient; collinear columns: " + join(bad));
  }
  const VectorXd beta = qr.solve(y);
  const VectorXd resid = y - X * beta;
  const double rss = resid.squaredNorm();
  const double tss = centered_r2 ? (y.array() - y.mean()).matrix().squaredNorm() : y.squaredNorm();

  RegressionResult r;
  r.n = n;
  r.dof = n - p - absorbed;
  r.sigma2 = rss / static_cast<double>(r.dof);
  r.r2 = tss > 0.0 ? 1.0 - rss / tss : (rss == 0.0 ? 1.0 : 0.0);

  // (X'X)^-1 = P R^-1 R^-T P' from the pivoted QR.
  const MatrixXd R = qr.matrixR().topLeftCorner(static_cast<Index>(p), static_cast<Index>(p)).triangularView<Eigen::Upper>();
  const MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(static_cast<Index>(p), static_cast<Index>(p)));
  const MatrixXd P = qr.colsPermutation();
  const MatrixXd bread = P * (Rinv * Rinv.transpose()) * P.transpose();

  MatrixXd cov;
  if (se.clusters.empty()) {
    cov = r.sigma2 * bread;
  } else {
    if (se.clusters.size() != n) throw DataError("cluster labels must match the observations");
    std::map<std::string, VectorXd> scores;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = scores.try_emplace(se.clusters[i], VectorXd::Zero(static_cast<Index>(p)));
      it->second += X.row(static_cast<Index>(i)).transpose() * resid(static_cast<Index>(i));
    }
    const double g = static_cast<double>(scores.size());
    if (g < 2) throw DataError("clustered standard errors need at least two clusters");
    MatrixXd meat = MatrixXd::Zero(static_cast<Index>(p), static_cast<Index>(p));
    for (const auto& [_, s] : scores) meat += s * s.transpose();
    const double adj = g / (g - 1.0) * (static_cast<double>(n) - 1.0) / static_cast<double>(r.dof);
    cov = adj * bread * meat * bread;
    r.se_type = "clustered";
  }

  for (std::size_t k = 0; k < p; ++k) {
    Coefficient c;
    c.name = names[k];
    c.estimate = beta(static_cast<Index>(k));
    c.se = std::sqrt(std::max(0.0, cov(static_cast<Index>(k), static_cast<Index>(k))));
    c.t = c.se > 0.0 ? c.estimate / c.se : 0.0;
    if (!std::isfinite(c.estimate)) throw NumericError("non-finite estimate for '" + c.name + "'");
    r.coefficients.push_back(c);
  }
  return r;
}

}  // namespace

RegressionResult ols(std::span<const double> y, std::span<const Regressor> regressors, bool intercept,
                     const SeOptions& se) {
  check_names(regressors);
  const auto n = static_cast<Index>(y.size());
  const auto p = static_cast<Index>(regressors.size() + (intercept ? 1 : 0));
  if (p == 0) throw DataError("regression has no regressors");
  MatrixXd X(n, p);
  std::vector<std::string> names;
  Index col = 0;
  if (intercept) {
    X.col(col++).setOnes();
    names.push_back("intercept");
  }
  for (const auto& r : regressors) {
    if (r.values.size() != y.size()) throw DataError("regressor '" + r.name + "' has the wrong length");
    X.col(col++) = Eigen::Map<const VectorXd>(r.values.data(), n);
    names.push_back(r.name);
  }
  return fit(X, Eigen::Map<const VectorXd>(y.data(), n), names, 0, intercept, se);
}

RegressionResult within_fixed_effects(std::span<const double> y, std::span<const Regressor> regressors,
                                      std::span<const std::string> entities, const SeOptions& se) {
  check_names(regressors);
  if (entities.size() != y.size()) throw DataError("entity ids must match the observations");
  if (regressors.empty()) throw DataError("regression has no regressors");
  for (const auto& r : regressors) {
    if (r.values.size() != y.size()) throw DataError("regressor '" + r.name + "' has the wrong length");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < entities.size(); ++i) groups[entities[i]].push_back(i);

  std::vector<std::size_t> keep;
  std::size_t singletons = 0, absorbed = 0;
  for (const auto& [_, idx] : groups) {
    if (idx.size() < 2) {
      ++singletons;
      continue;
    }
    ++absorbed;
    keep.insert(keep.end(), idx.begin(), idx.end());
  }
  if (absorbed == 0) throw DataError("fixed-effects regression needs an entity with at least two observations");

  const auto n = static_cast<Index>(keep.size());
  const auto k = static_cast<Index>(regressors.size());
  MatrixXd X(n, k);
  VectorXd yy(n);
  std::vector<std::string> names;
  for (const auto& r : regressors) names.push_back(r.name);
  Index row = 0;
  std::vector<Index> group_start;
  for (const auto& [_, idx] : groups) {
    if (idx.size() < 2) continue;
    const double m = static_cast<double>(idx.size());
    double ym = 0.0;
    for (auto i : idx) ym += y[i];
    ym /= m;
    std::vector<double> xm(static_cast<std::size_t>(k), 0.0);
    for (auto i : idx) {
      for (Index c = 0; c < k; ++c) xm[static_cast<std::size_t>(c)] += regressors[static_cast<std::size_t>(c)].values[i];
    }
    for (auto& v : xm) v /= m;
    for (auto i : idx) {
      yy(row) = y[i] - ym;
      for (Index c = 0; c < k; ++c) {
        X(row, c) = regressors[static_cast<std::size_t>(c)].values[i] - xm[static_cast<std::size_t>(c)];
      }
      ++row;
    }
  }
  for (Index c = 0; c < k; ++c) {
    double scale = 0.0;
    for (auto i : keep) scale = std::max(scale, std::abs(regressors[static_cast<std::size_t>(c)].values[i]));
    if (!(X.col(c).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))) {
      throw DataError("regressor '" + names[static_cast<std::size_t>(c)] + "' has no within-entity variation");
    }
  }
  SeOptions kept_se;
  if (!se.clusters.empty()) {
    if (se.clusters.size() != y.size()) throw DataError("cluster labels must match the observations");
    for (const auto& [_, idx] : groups) {
      if (idx.size() < 2) continue;
      for (auto i : idx) kept_se.clusters.push_back(se.clusters[i]);
    }
  }
  RegressionResult r = fit(X, yy, names, absorbed, false, kept_se);
  r.entities = absorbed;
  r.singletons_dropped = singletons;
  return r;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: lengths differ");
  if (x.size() < 2) return std::nullopt;
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<CurveBin> bootstrap_binned_curve(std::span<const double> x, std::span<const double> y,
                                             const CurveOptions& options) {
  if (x.size() != y.size()) throw std::invalid_argument("curve: x and y differ in length");
  if (options.bins == 0) throw ConfigError("curve needs at least one bin");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (x.empty()) return {};
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = options.lo.value_or(*mn);
  const double hi = options.hi.value_or(*mx);
  if (!(hi >= lo)) throw ConfigError("curve range is empty");
  const double width = hi > lo ? (hi - lo) / static_cast<double>(options.bins) : 1.0;

  std::vector<std::vector<std::size_t>> members(options.bins);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo && x[i] <= hi)) continue;
    auto b = hi > lo ? static_cast<std::size_t>((x[i] - lo) / width) : 0;
    members[std::min(b, options.bins - 1)].push_back(i);
  }

  std::vector<CurveBin> out;
  for (std::size_t b = 0; b < options.bins; ++b) {
    const auto& idx = members[b];
    if (idx.empty()) continue;
    CurveBin bin;
    bin.bin = b;
    bin.x_lo = lo + width * static_cast<double>(b);
    bin.x_hi = b + 1 == options.bins ? hi : lo + width * static_cast<double>(b + 1);
    bin.n = idx.size();
    for (auto i : idx) {
      bin.mean_x += x[i];
      bin.mean_y += y[i];
    }
    bin.mean_x /= static_cast<double>(idx.size());
    bin.mean_y /= static_cast<double>(idx.size());

    std::vector<double> means(std::max<std::size_t>(1, options.replicates));
    parallel_for(means.size(), options.threads, [&](std::size_t r) {
      Rng rng(substream_seed(options.seed, b, r));
      double s = 0.0;
      for (std::size_t k = 0; k < idx.size(); ++k) s += y[idx[uniform_index(rng, idx.size())]];
      means[r] = s / static_cast<double>(idx.size());
    });
    std::sort(means.begin(), means.end());
    bin.ci_low = quantile_sorted(means, options.alpha / 2.0);
    bin.ci_high = quantile_sorted(means, 1.0 - options.alpha / 2.0);
    out.push_back(bin);
  }
  return out;
}

}  // namespace teamscope
