#include "gaze/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace gaze {

namespace {

double median_of_sorted(const std::vector<double>& s) {
  const std::size_t n = s.size();
  if (n % 2 == 1) return s[n / 2];
  return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

struct Moments {
  double mean, m2, m3, m4;
};

Moments central_moments(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  return {mean, m2 / n, m3 / n, m4 / n};
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (sorted.size() == 1) return sorted[0];
  p = std::clamp(p, 0.0, 1.0);
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, p);
}

DistrStats distr_stat(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("distr_stat: empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());

  const Moments m = central_moments(values);
  DistrStats out;
  out.mn = m.mean;
  out.md = median_of_sorted(s);
  out.sd = std::sqrt(m.m2);
  out.iq = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  if (out.sd > 0) {
    out.sk = m.m3 / std::pow(m.m2, 1.5);
    out.ku = m.m4 / (m.m2 * m.m2);
  } else {
    out.sk = missing();
    out.ku = missing();
  }
  return out;
}

ProfileStats profile_stats(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("profile_stats: empty sample");
  std::vector<double> a(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) a[i] = std::fabs(samples[i]);
  const DistrStats d = distr_stat(a);
  return {d.mn, d.md, d.sd, d.sk, d.ku};
}

LinFit linfit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linfit: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("linfit: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0) throw std::invalid_argument("linfit: constant x");

  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy <= 0) {
    f.r2 = 0;  // constant y: define r2 = 0 instead of 0/0
    f.slope = 0;
    f.intercept = my;
    return f;
  }
  double ssres = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ssres += e * e;
  }
  f.r2 = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  return f;
}

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (degree != 2 && degree != 3) throw std::invalid_argument("polyfit: degree must be 2 or 3");
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: size mismatch");
  const int n = static_cast<int>(x.size());
  const int k = degree + 1;
  if (n < k) throw std::invalid_argument("polyfit: not enough points");

  Eigen::MatrixXd X(n, k);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    double p = 1;
    for (int j = 0; j < k; ++j) {
      X(i, j) = p;
      p *= x[i];
    }
    Y(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < k) throw std::invalid_argument("polyfit: rank-deficient design");
  Eigen::VectorXd c = qr.solve(Y);

  PolyFit f;
  f.coeffs.assign(c.data(), c.data() + k);
  const double my = Y.mean();
  const double sstot = (Y.array() - my).square().sum();
  if (sstot <= 0) {
    f.r2 = 0;
  } else {
    const double ssres = (Y - X * c).squaredNorm();
    f.r2 = std::clamp(1.0 - ssres / sstot, 0.0, 1.0);
  }
  return f;
}

namespace {

// Residual sum of squares of y regressed on an intercept plus the selected
// columns of the candidate term matrix.
double sse_for_terms(const Eigen::MatrixXd& terms, const Eigen::VectorXd& y,
                     bool use_l, bool use_q) {
  const int n = static_cast<int>(y.size());
  int k = 1 + (use_l ? 1 : 0) + (use_q ? 1 : 0);
  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  int c = 1;
  if (use_l) X.col(c++) = terms.col(0);
  if (use_q) X.col(c++) = terms.col(1);
  Eigen::VectorXd b = X.colPivHouseholderQr().solve(y);
  return (y - X * b).squaredNorm();
}

double partial_f_pvalue(double sse_reduced, double sse_full, int n, int k_full) {
  const int df2 = n - k_full;
  if (df2 <= 0) return 1.0;
  if (sse_full <= 0) return sse_reduced > sse_full ? 0.0 : 1.0;
  const double f = (sse_reduced - sse_full) * df2 / sse_full;
  if (f <= 0) return 1.0;
  boost::math::fisher_f dist(1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

}  // namespace

TermSet stepwise_lq(std::span<const double> t, std::span<const double> y,
                    double p_enter, double p_remove) {
  if (t.size() != y.size()) throw std::invalid_argument("stepwise_lq: size mismatch");
  const int n = static_cast<int>(t.size());
  if (n < 4) throw std::invalid_argument("stepwise_lq: need at least 4 points");

  double mn = t[0], mx = t[0];
  for (double v : t) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  if (mx <= mn) throw std::invalid_argument("stepwise_lq: constant t");

  Eigen::MatrixXd terms(n, 2);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    terms(i, 0) = t[i];
    terms(i, 1) = t[i] * t[i];
    Y(i) = y[i];
  }

  bool in_l = false, in_q = false;
  for (int iter = 0; iter < 8; ++iter) {
    bool changed = false;

    // forward entry: candidate with the smallest p below the entry threshold
    double best_p = 1.0;
    int best = -1;
    const double sse_cur = sse_for_terms(terms, Y, in_l, in_q);
    const int k_cur = 1 + in_l + in_q;
    if (!in_l) {
      const double p = partial_f_pvalue(sse_cur, sse_for_terms(terms, Y, true, in_q), n, k_cur + 1);
      if (p < best_p) {
        best_p = p;
        best = 0;
      }
    }
    if (!in_q) {
      const double p = partial_f_pvalue(sse_cur, sse_for_terms(terms, Y, in_l, true), n, k_cur + 1);
      if (p < best_p) {
        best_p = p;
        best = 1;
      }
    }
    if (best >= 0 && best_p < p_enter) {
      (best == 0 ? in_l : in_q) = true;
      changed = true;
    }

    // backward removal: retained term with the largest p above the exit threshold
    double worst_p = -1.0;
    int worst = -1;
    const double sse_full = sse_for_terms(terms, Y, in_l, in_q);
    const int k_full = 1 + in_l + in_q;
    if (in_l) {
      const double p = partial_f_pvalue(sse_for_terms(terms, Y, false, in_q), sse_full, n, k_full);
      if (p > worst_p) {
        worst_p = p;
        worst = 0;
      }
    }
    if (in_q) {
      const double p = partial_f_pvalue(sse_for_terms(terms, Y, in_l, false), sse_full, n, k_full);
      if (p > worst_p) {
        worst_p = p;
        worst = 1;
      }
    }
    if (worst >= 0 && worst_p > p_remove) {
      (worst == 0 ? in_l : in_q) = false;
      changed = true;
    }

    if (!changed) break;
  }

  if (in_l && in_q) return TermSet::L1Q1;
  if (in_l) return TermSet::L1Q0;
  if (in_q) return TermSet::L0Q1;
  return TermSet::L0Q0;
}

std::vector<double> winsorize(std::span<const double> values, double lo_pct, double hi_pct) {
  if (values.empty()) throw std::invalid_argument("winsorize: empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double lo = quantile_sorted(s, lo_pct / 100.0);
  const double hi = quantile_sorted(s, hi_pct / 100.0);
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::clamp(v, lo, hi);
  return out;
}

double pearson_chi2_normality(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 30) throw std::invalid_argument("pearson_chi2_normality: need at least 30 values");

  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var <= 0) return 0.0;  // degenerate: maximally non-normal
  const double sd = std::sqrt(var);

  const int bins = static_cast<int>(std::ceil(2.0 * std::pow(static_cast<double>(n), 0.4)));
  const boost::math::normal norm(mean, sd);
  std::vector<double> edges(bins - 1);
  for (int k = 1; k < bins; ++k)
    edges[k - 1] = boost::math::quantile(norm, static_cast<double>(k) / bins);

  std::vector<double> counts(bins, 0.0);
  for (double v : values) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    counts[static_cast<std::size_t>(it - edges.begin())] += 1.0;
  }

  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;

  const int df = bins - 3;  // two estimated parameters
  if (df < 1) return 0.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

std::vector<TransformedSeries> transform_battery(std::span<const double> values,
                                                 FeatureKind kind) {
  if (values.empty()) throw std::invalid_argument("transform_battery: empty sample");

  std::vector<TransformedSeries> out;
  const auto add_if_applicable = [&](const std::string& name,
                                     const std::function<bool(double)>& in_domain,
                                     const std::function<double(double)>& f) {
    for (double v : values)
      if (!in_domain(v)) return;
    TransformedSeries s;
    s.name = name;
    s.values.reserve(values.size());
    for (double v : values) s.values.push_back(f(v));
    s.apply = f;
    out.push_back(std::move(s));
  };

  add_if_applicable(
      "log", [](double v) { return v > -1.0; }, [](double v) { return std::log1p(v); });
  add_if_applicable(
      "sqrt", [](double v) { return v >= -0.5; }, [](double v) { return std::sqrt(v + 0.5); });
  add_if_applicable(
      "cbrt", [](double) { return true; }, [](double v) { return std::cbrt(v); });
  add_if_applicable(
      "recip", [](double v) { return v != 0.0; }, [](double v) { return 1.0 / v; });

  if (kind == FeatureKind::Proportion01) {
    add_if_applicable(
        "asin", [](double v) { return v >= 0.0 && v <= 1.0; },
        [](double v) { return 2.0 * std::asin(std::sqrt(v)); });
    // adjusted into [0.025, 0.975] to avoid the undefined endpoints
    add_if_applicable(
        "logit", [](double) { return true; },
        [](double v) {
          const double a = std::clamp(v, 0.025, 0.975);
          return std::log(a / (1.0 - a));
        });
  }

  // reflected variants: base = max(X) + 1, reflected values are >= 1 so all
  // four transforms are always in domain
  double mx = values[0];
  for (double v : values) mx = std::max(mx, v);
  const double base = mx + 1.0;
  const auto add_reflected = [&](const std::string& name,
                                 const std::function<double(double)>& g) {
    TransformedSeries s;
    s.name = name;
    s.values.reserve(values.size());
    for (double v : values) s.values.push_back(g(base - v));
    s.apply = [base, g](double v) { return g(base - v); };
    out.push_back(std::move(s));
  };
  add_reflected("log_refl", [](double v) { return std::log1p(v); });
  add_reflected("sqrt_refl", [](double v) { return std::sqrt(v + 0.5); });
  add_reflected("cbrt_refl", [](double v) { return std::cbrt(v); });
  add_reflected("recip_refl", [](double v) { return 1.0 / v; });

  return out;
}

}  // namespace gaze
