#ifndef GAZE_STATS_HPP
#define GAZE_STATS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaze/missing.hpp"

namespace gaze {

// The six descriptive statistics used to expand distributional feature
// categories into subtypes: mean, median, standard deviation, interquartile
// range, skewness and kurtosis.
//
// Conventions: sd is the population standard deviation (divide by N),
// kurtosis is raw m4/m2^2 (a Gaussian gives 3, not 0), and quantiles use
// linear interpolation between order statistics. sk/ku are missing when
// sd == 0.
struct DistrStats {
  double mn = 0, md = 0, sd = 0, iq = 0;
  double sk = 0, ku = 0;
};

DistrStats distr_stat(std::span<const double> values);

// Moments of |samples|, same conventions as distr_stat. Used for the
// velocity/acceleration profile features of every event family.
struct ProfileStats {
  double mean = 0, median = 0, sd = 0;
  double skew = 0, kurt = 0;
};

ProfileStats profile_stats(std::span<const double> samples);

struct LinFit {
  double slope = 0, intercept = 0, r2 = 0;
};

// Ordinary least squares of y on x. Throws on length < 2 or constant x.
// r2 = 1 - SSres/SStot, defined as 0 when SStot == 0.
LinFit linfit(std::span<const double> x, std::span<const double> y);

struct PolyFit {
  std::vector<double> coeffs;  // ascending degree
  double r2 = 0;
};

// Least-squares polynomial fit, degree 2 or 3. Throws when the design is
// rank deficient or too few points.
PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree);

// Outcome of stepwise model selection over the candidate terms {t, t^2}:
// which terms the final model retains.
enum class TermSet { L0Q0, L0Q1, L1Q0, L1Q1 };

// Forward-entry (p < p_enter) / backward-removal (p > p_remove) stepwise
// regression with partial F-tests, intercept always included.
TermSet stepwise_lq(std::span<const double> t, std::span<const double> y,
                    double p_enter = 0.05, double p_remove = 0.10);

// Linear-interpolation quantile ("type 7") of an unsorted sample, p in [0,1].
double quantile(std::span<const double> values, double p);
double quantile_sorted(std::span<const double> sorted, double p);

// Values clamped to the [lo_pct, hi_pct] percentile limits.
std::vector<double> winsorize(std::span<const double> values,
                              double lo_pct = 5.0, double hi_pct = 95.0);

// Pearson chi-square goodness-of-fit test against a normal with estimated
// mean/sd; ceil(2*N^(2/5)) equal-probability cells, bins-3 degrees of
// freedom. Returns the p value; 0 for degenerate (sd == 0) samples.
// Requires N >= 30.
double pearson_chi2_normality(std::span<const double> values);

// Whether a feature's values are proportions in [0,1]; gates the arcsine
// and logit transforms.
enum class FeatureKind { General, Proportion01 };

struct TransformedSeries {
  std::string name;
  std::vector<double> values;
  // Same transform, frozen parameters (e.g. the reflection base), applicable
  // to values outside the fitted series.
  std::function<double(double)> apply;
};

// The normalization battery: log(X+1), sqrt(X+0.5), signed cube root,
// reciprocal, arcsine / logit for proportions, plus reflected variants of
// the first four. Transforms whose domain excludes some value are skipped.
std::vector<TransformedSeries> transform_battery(std::span<const double> values,
                                                 FeatureKind kind);

}  // namespace gaze

#endif
