#include "gaze/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "gaze/catalog.hpp"

namespace gaze {

void PopulationTable::insert(const std::string& subject, const std::string& session,
                             std::size_t feature_index, double value) {
  if (feature_index >= feature_count_)
    throw std::invalid_argument("PopulationTable: feature index out of range");

  std::size_t si;
  if (const auto it = subject_index_.find(subject); it != subject_index_.end()) {
    si = it->second;
  } else {
    si = subjects_.size();
    subjects_.push_back(subject);
    subject_index_.emplace(subject, si);
  }
  std::size_t se = sessions_.size();
  for (std::size_t i = 0; i < sessions_.size(); ++i)
    if (sessions_[i] == session) se = i;
  if (se == sessions_.size()) {
    if (sessions_.size() >= 2)
      throw std::invalid_argument("PopulationTable: more than two sessions: " + session);
    sessions_.push_back(session);
  }

  const std::uint64_t key = (static_cast<std::uint64_t>(si) << 1) | se;
  const auto [it, inserted] = row_index_.try_emplace(key, rows_.size());
  if (inserted) rows_.emplace_back(feature_count_, missing());
  rows_[it->second][feature_index] = value;
}

double PopulationTable::value(std::size_t subject, std::size_t session,
                              std::size_t feature) const {
  if (feature >= feature_count_ || session > 1) return missing();
  const std::uint64_t key = (static_cast<std::uint64_t>(subject) << 1) | session;
  const auto it = row_index_.find(key);
  return it == row_index_.end() ? missing() : rows_[it->second][feature];
}

namespace {

struct Strata {
  double ss1, ss2, ss3;   // between-subject, between-session, residual
  double df1, df2, df3;
  std::size_t n;
};

Strata strata_of(std::span<const std::array<double, 2>> pairs) {
  const std::size_t n = pairs.size();
  Strata st{};
  st.n = n;
  st.df1 = static_cast<double>(n - 1);
  st.df2 = 1;
  st.df3 = static_cast<double>(n - 1);

  double grand = 0, c0 = 0, c1 = 0;
  for (const auto& p : pairs) {
    c0 += p[0];
    c1 += p[1];
  }
  const double dn = static_cast<double>(n);
  c0 /= dn;
  c1 /= dn;
  grand = 0.5 * (c0 + c1);

  for (const auto& p : pairs) {
    const double rowm = 0.5 * (p[0] + p[1]);
    st.ss1 += 2.0 * (rowm - grand) * (rowm - grand);
    st.ss3 += (p[0] - rowm - c0 + grand) * (p[0] - rowm - c0 + grand) +
              (p[1] - rowm - c1 + grand) * (p[1] - rowm - c1 + grand);
  }
  st.ss2 = dn * ((c0 - grand) * (c0 - grand) + (c1 - grand) * (c1 - grand));
  return st;
}

// -2 x restricted log-likelihood (up to a constant) in the stratified form
double reml_objective(const Strata& st, double vs, double vr, double ve) {
  const double k = 2, n = static_cast<double>(st.n);
  const double l1 = ve + k * vs;
  const double l2 = ve + n * vr;
  const double l3 = ve;
  if (l1 <= 0 || l2 <= 0 || l3 <= 0) return std::numeric_limits<double>::infinity();
  return st.df1 * std::log(l1) + st.ss1 / l1 + st.df2 * std::log(l2) + st.ss2 / l2 +
         st.df3 * std::log(l3) + st.ss3 / l3;
}

// Constrained REML on the balanced design. The restricted likelihood
// separates over the three strata, so the interior stationary point is the
// ANOVA solution; when a component estimate is negative it is pinned at
// zero and the remaining strata re-profiled (merged). The best feasible
// candidate over the four active sets is the exact REML optimum.
bool reml_fit(const Strata& st, VarianceComponents* out) {
  const double k = 2, n = static_cast<double>(st.n);
  const double msr = st.ss1 / st.df1;
  const double msc = st.ss2 / st.df2;
  const double mse = st.ss3 / st.df3;

  struct Candidate {
    double vs, vr, ve;
  };
  std::vector<Candidate> candidates;

  // interior
  candidates.push_back({(msr - mse) / k, (msc - mse) / n, mse});
  // subject variance pinned: strata 1 and 3 share the error eigenvalue
  {
    const double ve = (st.ss1 + st.ss3) / (st.df1 + st.df3);
    candidates.push_back({0.0, (msc - ve) / n, ve});
  }
  // session variance pinned: strata 2 and 3 merge
  {
    const double ve = (st.ss2 + st.ss3) / (st.df2 + st.df3);
    candidates.push_back({(msr - ve) / k, 0.0, ve});
  }
  // both pinned
  candidates.push_back(
      {0.0, 0.0, (st.ss1 + st.ss2 + st.ss3) / (st.df1 + st.df2 + st.df3)});

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& c : candidates) {
    if (c.vs < 0 || c.vr < 0 || c.ve <= 0) continue;  // infeasible active set
    const double obj = reml_objective(st, c.vs, c.vr, c.ve);
    if (obj < best) {
      best = obj;
      out->subject = c.vs;
      out->session = c.vr;
      out->error = c.ve;
      found = true;
    }
  }
  out->reml_converged = found;
  return found;
}

std::vector<std::array<double, 2>> complete_pairs(std::span<const std::array<double, 2>> pairs) {
  std::vector<std::array<double, 2>> out;
  for (const auto& p : pairs)
    if (!is_missing(p[0]) && !is_missing(p[1])) out.push_back(p);
  return out;
}

}  // namespace

double icc_2_1(std::span<const std::array<double, 2>> raw_pairs, VarianceComponents* components) {
  const auto pairs = complete_pairs(raw_pairs);
  const std::size_t n = pairs.size();
  if (n < 3) throw std::invalid_argument("icc_2_1: need >= 3 complete subjects");

  const Strata st = strata_of(pairs);
  const double total_ss = st.ss1 + st.ss2 + st.ss3;
  double scale = 0;
  for (const auto& p : pairs) scale = std::max({scale, std::fabs(p[0]), std::fabs(p[1])});
  const double eps = 1e-12 * (scale * scale + 1.0);

  VarianceComponents vc;
  if (total_ss <= eps) return missing();  // zero total variance

  const double kf = 2.0, nf = static_cast<double>(n);
  if (st.ss3 <= eps && st.ss2 <= eps) {
    // duplicated sessions: no within-subject variance at all
    vc.subject = st.ss1 / (kf * st.df1);
    vc.session = 0;
    vc.error = 0;
    vc.reml_converged = true;
  } else if (st.ss1 <= eps) {
    // identical subjects: no between-subject variance
    vc.subject = 0;
    vc.session = std::max((st.ss2 / st.df2 - st.ss3 / st.df3) / nf, 0.0);
    vc.error = st.ss3 / st.df3;
    vc.reml_converged = true;
  } else if (!reml_fit(st, &vc)) {
    // ANOVA method-of-moments fallback, components truncated at zero
    const double msr = st.ss1 / st.df1;
    const double msc = st.ss2 / st.df2;
    const double mse = st.ss3 / st.df3;
    vc.subject = std::max((msr - mse) / kf, 0.0);
    vc.session = std::max((msc - mse) / nf, 0.0);
    vc.error = mse;
    vc.reml_converged = false;
  }

  if (components) *components = vc;
  const double total = vc.subject + vc.session + vc.error;
  if (total <= 0) return missing();
  return std::clamp(vc.subject / total, 0.0, 1.0);
}

namespace {

// mid-ranks of one column; returns the tie term sum(t^3 - t)
double column_ranks(std::span<const std::array<double, 2>> pairs, int col,
                    std::vector<double>* ranks) {
  const std::size_t n = pairs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a][static_cast<std::size_t>(col)] < pairs[b][static_cast<std::size_t>(col)];
  });
  ranks->assign(n, 0.0);
  double tie_term = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pairs[order[j + 1]][static_cast<std::size_t>(col)] ==
                            pairs[order[i]][static_cast<std::size_t>(col)])
      ++j;
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) (*ranks)[order[k]] = mid;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  return tie_term;
}

}  // namespace

double kendalls_w(std::span<const std::array<double, 2>> raw_pairs) {
  const auto pairs = complete_pairs(raw_pairs);
  const std::size_t n = pairs.size();
  if (n < 3) throw std::invalid_argument("kendalls_w: need >= 3 complete subjects");

  const double m = 2.0;
  std::vector<double> r0, r1;
  const double t0 = column_ranks(pairs, 0, &r0);
  const double t1 = column_ranks(pairs, 1, &r1);

  const double dn = static_cast<double>(n);
  const double rbar = m * (dn + 1.0) / 2.0;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = r0[i] + r1[i];
    s += (ri - rbar) * (ri - rbar);
  }
  const double denom = m * m * (dn * dn * dn - dn) - m * (t0 + t1);
  if (denom <= 0) return missing();  // both sessions fully tied
  return std::clamp(12.0 * s / denom, 0.0, 1.0);
}

CicchettiBand cicchetti_band(double icc) {
  if (icc >= 0.75) return CicchettiBand::Excellent;
  if (icc >= 0.60) return CicchettiBand::Good;
  if (icc >= 0.40) return CicchettiBand::Fair;
  return CicchettiBand::Poor;
}

std::string_view band_name(CicchettiBand b) {
  switch (b) {
    case CicchettiBand::Excellent: return "excellent";
    case CicchettiBand::Good: return "good";
    case CicchettiBand::Fair: return "fair";
    case CicchettiBand::Poor: return "poor";
  }
  return "";
}

NormalityAssessment assess_normality(std::span<const double> values, FeatureKind kind) {
  NormalityAssessment out;
  out.transform = "raw";
  out.apply = [](double v) { return v; };
  if (values.size() < 30) {
    out.inconclusive = true;
    out.is_normal = false;
    out.max_p = missing();
    return out;
  }

  out.max_p = pearson_chi2_normality(values);

  const auto consider = [&](const std::string& name, double p,
                            const std::function<double(double)>& apply) {
    if (p > out.max_p) {
      out.max_p = p;
      out.transform = name;
      out.apply = apply;
    }
  };

  for (const auto& t : transform_battery(values, kind))
    consider(t.name, pearson_chi2_normality(t.values), t.apply);

  // Winsorize, then retest raw and the whole battery on the clamped values
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = quantile_sorted(sorted, 0.05);
  const double hi = quantile_sorted(sorted, 0.95);
  const auto clampf = [lo, hi](double v) { return std::clamp(v, lo, hi); };
  std::vector<double> wins(values.begin(), values.end());
  for (double& v : wins) v = clampf(v);

  consider("win", pearson_chi2_normality(wins), clampf);
  for (const auto& t : transform_battery(wins, kind)) {
    const auto inner = t.apply;
    consider("win+" + t.name, pearson_chi2_normality(t.values),
             [clampf, inner](double v) { return inner(clampf(v)); });
  }

  out.is_normal = out.max_p >= 0.05;
  return out;
}

std::vector<FeatureReliabilityReport> reliability_report(const PopulationTable& table,
                                                         const ReliabilityConfig& cfg) {
  const auto& catalog = feature_catalog();
  std::vector<FeatureReliabilityReport> reports;
  reports.reserve(catalog.size());

  const std::size_t n_subj = table.subjects().size();
  const std::size_t n_sess = table.sessions().size();

  for (std::size_t f = 0; f < catalog.size(); ++f) {
    FeatureReliabilityReport rep;
    rep.feature_id = catalog[f].id;

    // population summary
    std::vector<double> summary_vals;
    for (std::size_t s = 0; s < n_subj; ++s) {
      const std::size_t last_session =
          cfg.summary_sessions == SummarySessions::First ? 1 : n_sess;
      for (std::size_t j = 0; j < last_session && j < n_sess; ++j) {
        const double v = table.value(s, j, f);
        if (!is_missing(v)) summary_vals.push_back(v);
      }
    }
    if (!summary_vals.empty()) {
      std::sort(summary_vals.begin(), summary_vals.end());
      rep.median = quantile_sorted(summary_vals, 0.5);
      rep.iqr = quantile_sorted(summary_vals, 0.75) - quantile_sorted(summary_vals, 0.25);
    } else {
      rep.note = "no data";
      reports.push_back(std::move(rep));
      continue;
    }

    // pooled values across both sessions drive the normality pipeline
    std::vector<double> pooled;
    std::vector<std::array<double, 2>> pairs;
    if (n_sess >= 2) {
      for (std::size_t s = 0; s < n_subj; ++s) {
        const double a = table.value(s, 0, f);
        const double b = table.value(s, 1, f);
        if (!is_missing(a)) pooled.push_back(a);
        if (!is_missing(b)) pooled.push_back(b);
        pairs.push_back({a, b});
      }
    }

    const FeatureKind kind =
        catalog[f].proportion01 ? FeatureKind::Proportion01 : FeatureKind::General;
    const NormalityAssessment na = assess_normality(pooled, kind);
    rep.max_p = na.max_p;
    rep.transform = na.transform;
    rep.is_normal = na.is_normal;
    if (na.inconclusive) rep.note = "normality inconclusive (<30 values)";

    try {
      if (na.is_normal) {
        // ICC on the transform-space values
        std::vector<std::array<double, 2>> tp;
        for (const auto& p : pairs) {
          if (is_missing(p[0]) || is_missing(p[1])) continue;
          tp.push_back({na.apply(p[0]), na.apply(p[1])});
        }
        rep.kind = ReliabilityKind::ICC;
        rep.value = icc_2_1(tp);
        if (!is_missing(rep.value)) rep.band = cicchetti_band(rep.value);
      } else {
        rep.kind = ReliabilityKind::KendallW;
        rep.value = kendalls_w(pairs);
      }
    } catch (const std::exception& e) {
      rep.value = missing();
      rep.note = e.what();
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace gaze
