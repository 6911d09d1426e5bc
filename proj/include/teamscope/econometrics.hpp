#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace teamscope {

struct Regressor {
  std::string name;
  std::vector<double> values;
};

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
};

struct RegressionResult {
  std::vector<Coefficient> coefficients;
  std::size_t n = 0;
  std::size_t dof = 0;  // residual degrees of freedom
  double r2 = 0.0;      // within R^2 for fixed-effects fits
  double sigma2 = 0.0;
  std::size_t entities = 0;            // absorbed fixed effects
  std::size_t singletons_dropped = 0;  // observations from single-observation entities
  std::string se_type = "conventional";

  const Coefficient* find(const std::string& name) const;
};

struct SeOptions {
  // Cluster labels parallel to the observations; empty means conventional SEs.
  std::vector<std::string> clusters;
};

// Least squares with an optional leading intercept column named "intercept".
// Throws DataError naming the collinear columns when the design is rank deficient,
// and when there are no more observations than parameters.
RegressionResult ols(std::span<const double> y, std::span<const Regressor> regressors, bool intercept = true,
                     const SeOptions& se = {});

// Entity-demeaned OLS. Singleton entities are dropped and reported; residual
// degrees of freedom are N - k - G for G absorbed entities. Throws DataError
// when no entity has two observations or a regressor has no within variation.
RegressionResult within_fixed_effects(std::span<const double> y, std::span<const Regressor> regressors,
                                      std::span<const std::string> entities, const SeOptions& se = {});

// Product-moment correlation; nullopt when either vector is constant or shorter than 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CurveOptions {
  std::size_t bins = 10;
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  // Bin range; defaults to the observed [min, max] of x.
  std::optional<double> lo;
  std::optional<double> hi;
  std::size_t threads = 1;
};

struct CurveBin {
  std::size_t bin = 0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t n = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Equal-width bins; each occupied bin gets a percentile bootstrap CI of its
// mean y from `replicates` within-bin resamples. Replicate r of bin b draws
// from its own substream of (seed, b, r). Empty bins are omitted and values
// outside [lo, hi] are ignored.
std::vector<CurveBin> bootstrap_binned_curve(std::span<const double> x, std::span<const double> y,
                                             const CurveOptions& options);

}  // namespace teamscope
