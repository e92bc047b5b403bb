#include "gaze/fixation_features.hpp"

#include <cmath>
#include <stdexcept>

namespace gaze {

double fix_rate(std::size_t fixation_count, double recording_duration_s) {
  if (recording_duration_s <= 0) throw std::invalid_argument("fix_rate: zero-length recording");
  return static_cast<double>(fixation_count) / recording_duration_s;
}

void fix_centroid(const FixationView& fix, double* h, double* v) {
  const double n = static_cast<double>(fix.size());
  double sh = 0, sv = 0;
  for (std::size_t j = 0; j < fix.size(); ++j) {
    sh += fix.pos_h[j];
    sv += fix.pos_v[j];
  }
  *h = sh / n;
  *v = sv / n;
}

void drift_features(const FixationView& fix, double disp[3], double dist[3], double speed[3]) {
  const std::size_t n = fix.size();
  if (n < 2) throw std::invalid_argument("drift_features: need >= 2 samples");
  const double dh = fix.pos_h[n - 1] - fix.pos_h[0];
  const double dv = fix.pos_v[n - 1] - fix.pos_v[0];
  disp[0] = std::fabs(dh);
  disp[1] = std::fabs(dv);
  disp[2] = std::hypot(dh, dv);
  double sh = 0, sv = 0, sr = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double eh = fix.pos_h[j] - fix.pos_h[j - 1];
    const double ev = fix.pos_v[j] - fix.pos_v[j - 1];
    sh += std::fabs(eh);
    sv += std::fabs(ev);
    sr += std::hypot(eh, ev);
  }
  dist[0] = sh;
  dist[1] = sv;
  dist[2] = sr;
  const double dur_s = fix.duration_ms() / 1000.0;
  for (int c = 0; c < 3; ++c) speed[c] = dur_s > 0 ? disp[c] / dur_s : missing();
}

void drift_fits(const FixationView& fix, double lin_slope[2], double lin_r2[2],
                double quad_r2[2]) {
  const std::size_t n = fix.size();
  if (n < 4) throw std::invalid_argument("drift_fits: need >= 4 samples");
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j)
    t[j] = static_cast<double>(j) / fix.sample_rate_hz;  // seconds from onset
  const std::span<const double> comps[2] = {fix.pos_h, fix.pos_v};
  for (int c = 0; c < 2; ++c) {
    const LinFit lf = linfit(t, comps[c]);
    lin_slope[c] = lf.slope;
    lin_r2[c] = lf.r2;
    quad_r2[c] = polyfit(t, comps[c], 2).r2;
  }
}

double pooled_vel_p90(std::span<const FixationView> fixations) {
  std::vector<double> pooled;
  for (const auto& f : fixations) pooled.insert(pooled.end(), f.vel_r.begin(), f.vel_r.end());
  if (pooled.empty()) throw std::invalid_argument("pooled_vel_p90: no fixation samples");
  return quantile(pooled, 0.90);
}

void fix_p90_features(std::span<const FixationView> fixations, double threshold,
                      std::vector<double>* pct_above, std::vector<double>* pct_cross) {
  pct_above->clear();
  pct_cross->clear();
  for (const auto& f : fixations) {
    const std::size_t n = f.size();
    std::size_t above = 0, crossings = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (f.vel_r[j] > threshold) ++above;
      if (j > 0 && (f.vel_r[j] - threshold) * (f.vel_r[j - 1] - threshold) < 0) ++crossings;
    }
    pct_above->push_back(100.0 * static_cast<double>(above) / static_cast<double>(n));
    pct_cross->push_back(n > 1 ? 100.0 * static_cast<double>(crossings) /
                                     static_cast<double>(n - 1)
                               : missing());
  }
}

namespace {

// profile statistics of one absolute slice, appended component-wise
void append_profile(const std::span<const double> comp[3], SeriesHVR* mean, SeriesHVR* median,
                    SeriesHVR* sd, SeriesHVR* skew, SeriesHVR* kurt) {
  std::vector<double>* outs[3][5] = {
      {&mean->h, &median->h, &sd->h, &skew->h, &kurt->h},
      {&mean->v, &median->v, &sd->v, &skew->v, &kurt->v},
      {&mean->r, &median->r, &sd->r, &skew->r, &kurt->r},
  };
  for (int c = 0; c < 3; ++c) {
    const ProfileStats p = profile_stats(comp[c]);
    outs[c][0]->push_back(p.mean);
    outs[c][1]->push_back(p.median);
    outs[c][2]->push_back(p.sd);
    outs[c][3]->push_back(p.skew);
    outs[c][4]->push_back(p.kurt);
  }
}

}  // namespace

FixationFeatures compute_fixation_features(std::span<const FixationView> fixations,
                                           double recording_duration_s) {
  FixationFeatures out;
  out.rate = fix_rate(fixations.size(), recording_duration_s);
  if (fixations.empty()) return out;

  std::size_t stepwise_n = 0;
  double counts_h[4] = {0, 0, 0, 0};
  double counts_v[4] = {0, 0, 0, 0};

  for (const auto& f : fixations) {
    out.durations_ms.push_back(f.duration_ms());

    double ch, cv;
    fix_centroid(f, &ch, &cv);
    out.centroid.h.push_back(ch);
    out.centroid.v.push_back(cv);

    double disp[3], dist[3], speed[3];
    drift_features(f, disp, dist, speed);
    out.drift.displacement.h.push_back(disp[0]);
    out.drift.displacement.v.push_back(disp[1]);
    out.drift.displacement.r.push_back(disp[2]);
    out.drift.distance.h.push_back(dist[0]);
    out.drift.distance.v.push_back(dist[1]);
    out.drift.distance.r.push_back(dist[2]);
    out.drift.avg_speed.h.push_back(speed[0]);
    out.drift.avg_speed.v.push_back(speed[1]);
    out.drift.avg_speed.r.push_back(speed[2]);

    if (f.size() >= 4) {
      double slope[2], lr2[2], qr2[2];
      drift_fits(f, slope, lr2, qr2);
      out.fits.lin_slope.h.push_back(slope[0]);
      out.fits.lin_slope.v.push_back(slope[1]);
      out.fits.lin_r2.h.push_back(lr2[0]);
      out.fits.lin_r2.v.push_back(lr2[1]);
      out.fits.quad_r2.h.push_back(qr2[0]);
      out.fits.quad_r2.v.push_back(qr2[1]);

      std::vector<double> t(f.size());
      for (std::size_t j = 0; j < f.size(); ++j)
        t[j] = static_cast<double>(j) / f.sample_rate_hz;
      counts_h[static_cast<int>(stepwise_lq(t, f.pos_h))] += 1;
      counts_v[static_cast<int>(stepwise_lq(t, f.pos_v))] += 1;
      ++stepwise_n;
    } else {
      // too short to fit: keep one entry per fixation, marked missing
      for (auto* s : {&out.fits.lin_slope, &out.fits.lin_r2, &out.fits.quad_r2}) {
        s->h.push_back(missing());
        s->v.push_back(missing());
      }
    }

    const std::span<const double> vel[3] = {f.vel_h, f.vel_v, f.vel_r};
    append_profile(vel, &out.vel_prof_mean, &out.vel_prof_median, &out.vel_prof_sd,
                   &out.vel_prof_skew, &out.vel_prof_kurt);
    const std::span<const double> acc[3] = {f.acc_h, f.acc_v, f.acc_r};
    append_profile(acc, &out.acc_prof_mean, &out.acc_prof_median, &out.acc_prof_sd,
                   &out.acc_prof_skew, &out.acc_prof_kurt);
  }

  if (stepwise_n > 0) {
    out.stepwise_defined = true;
    const double d = static_cast<double>(stepwise_n);
    out.stepwise_h = {100 * counts_h[0] / d, 100 * counts_h[1] / d, 100 * counts_h[2] / d,
                      100 * counts_h[3] / d};
    out.stepwise_v = {100 * counts_v[0] / d, 100 * counts_v[1] / d, 100 * counts_v[2] / d,
                      100 * counts_v[3] / d};
  }

  const double p90 = pooled_vel_p90(fixations);
  fix_p90_features(fixations, p90, &out.pct_above_p90, &out.pct_cross_p90);
  return out;
}

}  // namespace gaze
