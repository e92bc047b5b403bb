// Independent reference implementations the tests check the library
// against. These deliberately avoid the library's code paths: long-double
// two-pass accumulation for moments, explicit normal equations for fits,
// the closed-form ANOVA estimator for the intraclass correlation, and a
// direct rank-based concordance computation.
#ifndef GAZE_TESTS_ORACLES_HPP
#define GAZE_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

struct Moments {
  double mean, median, sd, iqr, skew, kurt;
  bool degenerate;  // sd == 0
};

inline double quantile7(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const long double h = static_cast<long double>(p) * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(static_cast<double>(h)));
  if (lo + 1 >= v.size()) return v.back();
  const long double f = h - lo;
  return static_cast<double>(v[lo] + f * (v[lo + 1] - v[lo]));
}

inline Moments moments(std::span<const double> x) {
  const std::size_t n = x.size();
  long double s = 0;
  for (double v : x) s += v;
  const long double mean = s / n;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const long double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double med = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  Moments out;
  out.mean = static_cast<double>(mean);
  out.median = med;
  out.sd = static_cast<double>(std::sqrt(m2));
  out.iqr = quantile7(sorted, 0.75) - quantile7(sorted, 0.25);
  out.degenerate = m2 <= 0;
  if (!out.degenerate) {
    out.skew = static_cast<double>(m3 / std::pow(m2, 1.5L));
    out.kurt = static_cast<double>(m4 / (m2 * m2));
  } else {
    out.skew = out.kurt = 0;
  }
  return out;
}

// r^2 from explicit normal equations, any polynomial degree
inline double poly_r2(std::span<const double> x, std::span<const double> y, int degree) {
  const int k = degree + 1;
  const std::size_t n = x.size();
  std::vector<long double> xtx(static_cast<std::size_t>(k) * k, 0.0L);
  std::vector<long double> xty(k, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    long double pr = 1;
    std::vector<long double> row(k);
    for (int a = 0; a < k; ++a) {
      row[a] = pr;
      pr *= x[i];
    }
    for (int a = 0; a < k; ++a) {
      xty[a] += row[a] * y[i];
      for (int b = 0; b < k; ++b) xtx[static_cast<std::size_t>(a) * k + b] += row[a] * row[b];
    }
  }
  // gaussian elimination with partial pivoting
  std::vector<long double> aug(xtx);
  std::vector<long double> rhs(xty);
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::fabs(static_cast<double>(aug[static_cast<std::size_t>(r) * k + col])) >
          std::fabs(static_cast<double>(aug[static_cast<std::size_t>(piv) * k + col])))
        piv = r;
    for (int c = 0; c < k; ++c)
      std::swap(aug[static_cast<std::size_t>(col) * k + c], aug[static_cast<std::size_t>(piv) * k + c]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const long double f = aug[static_cast<std::size_t>(r) * k + col] /
                            aug[static_cast<std::size_t>(col) * k + col];
      for (int c = 0; c < k; ++c)
        aug[static_cast<std::size_t>(r) * k + c] -= f * aug[static_cast<std::size_t>(col) * k + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<long double> coef(k);
  for (int a = 0; a < k; ++a) coef[a] = rhs[a] / aug[static_cast<std::size_t>(a) * k + a];

  long double my = 0;
  for (double v : y) my += v;
  my /= n;
  long double sstot = 0, ssres = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double fit = 0, pr = 1;
    for (int a = 0; a < k; ++a) {
      fit += coef[a] * pr;
      pr *= x[i];
    }
    sstot += (y[i] - my) * (y[i] - my);
    ssres += (y[i] - fit) * (y[i] - fit);
  }
  if (sstot <= 0) return 0;
  return std::clamp(static_cast<double>(1.0L - ssres / sstot), 0.0, 1.0);
}

// ICC(2,1) by the classic mean-squares closed form, clamped into [0, 1]
inline double icc_anova(std::span<const std::array<double, 2>> pairs) {
  const std::size_t n = pairs.size();
  const double k = 2.0;
  long double grand = 0;
  std::array<long double, 2> colm{0, 0};
  for (const auto& p : pairs) {
    colm[0] += p[0];
    colm[1] += p[1];
  }
  colm[0] /= n;
  colm[1] /= n;
  grand = (colm[0] + colm[1]) / 2;

  long double ssr = 0, ssc = 0, sse = 0;
  for (const auto& p : pairs) {
    const long double rm = (p[0] + p[1]) / 2;
    ssr += k * (rm - grand) * (rm - grand);
    sse += (p[0] - rm - colm[0] + grand) * (p[0] - rm - colm[0] + grand);
    sse += (p[1] - rm - colm[1] + grand) * (p[1] - rm - colm[1] + grand);
  }
  ssc = n * ((colm[0] - grand) * (colm[0] - grand) + (colm[1] - grand) * (colm[1] - grand));

  const long double msr = ssr / (n - 1);
  const long double msc = ssc / 1;
  const long double mse = sse / (n - 1);
  const long double denom = msr + (k - 1) * mse + k * (msc - mse) / n;
  if (denom <= 0) return 0;
  return std::clamp(static_cast<double>((msr - mse) / denom), 0.0, 1.0);
}

// Kendall's W for two raters with mid-ranks and tie correction
inline double kendalls_w(std::span<const std::array<double, 2>> pairs) {
  const std::size_t n = pairs.size();
  const double m = 2.0;
  std::vector<double> rank_sum(n, 0.0);
  double tie = 0;
  for (int col = 0; col < 2; ++col) {
    std::vector<std::pair<double, std::size_t>> v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(pairs[i][static_cast<std::size_t>(col)], i);
    std::stable_sort(v.begin(), v.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[j + 1].first == v[i].first) ++j;
      const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) rank_sum[v[t].second] += mid;
      const double g = static_cast<double>(j - i + 1);
      tie += g * g * g - g;
      i = j + 1;
    }
  }
  const double dn = static_cast<double>(n);
  const double rbar = m * (dn + 1) / 2;
  double s = 0;
  for (double r : rank_sum) s += (r - rbar) * (r - rbar);
  const double denom = m * m * (dn * dn * dn - dn) - m * tie;
  if (denom <= 0) return std::nan("");
  return std::clamp(12.0 * s / denom, 0.0, 1.0);
}

// central-difference derivative, interior samples only
inline std::vector<double> central_diff(std::span<const double> x, double rate) {
  std::vector<double> d(x.size(), std::nan(""));
  for (std::size_t i = 1; i + 1 < x.size(); ++i) d[i] = (x[i + 1] - x[i - 1]) * rate / 2.0;
  return d;
}

}  // namespace oracle

#endif
