#include "gaze/saccade_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaze {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Chord {
  double ux, uy;  // unit vector along start -> end
  double nx, ny;  // unit normal (u rotated +90 deg)
  double len;
};

// chord of the smoothed 2-D trajectory; len == 0 means degenerate
Chord chord_of(std::span<const double> h, std::span<const double> v) {
  const double dx = h.back() - h.front();
  const double dy = v.back() - v.front();
  Chord c;
  c.len = std::hypot(dx, dy);
  if (c.len > 0) {
    c.ux = dx / c.len;
    c.uy = dy / c.len;
    c.nx = -c.uy;
    c.ny = c.ux;
  } else {
    c.ux = c.uy = c.nx = c.ny = 0;
  }
  return c;
}

std::size_t samples_for_ms(double ms, double rate) {
  return static_cast<std::size_t>(std::lround(ms * rate / 1000.0));
}

}  // namespace

NormalizedSaccadeFrame normalize_saccade_frame(const SaccadeView& sac) {
  const Chord c = chord_of(sac.pos_h, sac.pos_v);
  if (c.len <= 0) throw std::invalid_argument("normalize_saccade_frame: zero-length chord");
  NormalizedSaccadeFrame f;
  f.x.reserve(sac.size());
  f.y.reserve(sac.size());
  const double h0 = sac.pos_h[0], v0 = sac.pos_v[0];
  for (std::size_t j = 0; j < sac.size(); ++j) {
    const double dx = sac.pos_h[j] - h0;
    const double dy = sac.pos_v[j] - v0;
    f.x.push_back(2.0 * (dx * c.ux + dy * c.uy) / c.len - 1.0);
    f.y.push_back(dx * c.nx + dy * c.ny);
  }
  return f;
}

AmplitudePath sac_amplitude_path(const SaccadeView& sac) {
  const std::size_t n = sac.size();
  if (n < 2) throw std::invalid_argument("sac_amplitude_path: need >= 2 samples");
  AmplitudePath out;
  const double dh = sac.pos_h[n - 1] - sac.pos_h[0];
  const double dv = sac.pos_v[n - 1] - sac.pos_v[0];
  out.amp_h = std::fabs(dh);
  out.amp_v = std::fabs(dv);
  out.amp_r = std::hypot(dh, dv);

  double dist = 0;
  for (std::size_t j = 1; j < n; ++j)
    dist += std::hypot(sac.pos_h[j] - sac.pos_h[j - 1], sac.pos_v[j] - sac.pos_v[j - 1]);
  out.travelled_r = dist;
  out.efficiency = dist > 0 ? out.amp_r / dist : missing();

  const std::size_t tail_steps = samples_for_ms(7.0, sac.sample_rate_hz);
  if (tail_steps == 0 || tail_steps > n - 1) {
    out.tail_efficiency = missing();
    out.tail_inconsistency_pct = missing();
    return out;
  }
  const std::size_t t0 = n - 1 - tail_steps;
  const double tdh = sac.pos_h[n - 1] - sac.pos_h[t0];
  const double tdv = sac.pos_v[n - 1] - sac.pos_v[t0];
  double tdist = 0;
  for (std::size_t j = t0 + 1; j < n; ++j)
    tdist += std::hypot(sac.pos_h[j] - sac.pos_h[j - 1], sac.pos_v[j] - sac.pos_v[j - 1]);
  out.tail_efficiency = tdist > 0 ? std::hypot(tdh, tdv) / tdist : missing();

  // tail inconsistency is defined on the raw signal
  const double odx = sac.raw_h[n - 1] - sac.raw_h[0];
  const double ody = sac.raw_v[n - 1] - sac.raw_v[0];
  const double odn = std::hypot(odx, ody);
  if (odn <= 0) {
    out.tail_inconsistency_pct = missing();
    return out;
  }
  std::size_t inconsistent = 0;
  for (std::size_t j = t0 + 1; j < n; ++j) {
    const double ldx = sac.raw_h[j] - sac.raw_h[j - 1];
    const double ldy = sac.raw_v[j] - sac.raw_v[j - 1];
    const double ldn = std::hypot(ldx, ldy);
    if (ldn <= 0) continue;  // stationary step, no direction to compare
    const double cosang = std::clamp((ldx * odx + ldy * ody) / (ldn * odn), -1.0, 1.0);
    if (std::acos(cosang) * kRadToDeg >= 60.0) ++inconsistent;
  }
  out.tail_inconsistency_pct =
      100.0 * static_cast<double>(inconsistent) / static_cast<double>(tail_steps);
  return out;
}

InitialDeviation sac_initial_deviation(const SaccadeView& sac) {
  InitialDeviation out{missing(), missing()};
  const std::size_t n = sac.size();
  const Chord c = chord_of(sac.pos_h, sac.pos_v);
  if (c.len <= 0) return out;

  // initial direction: vector from the start to the sample 20 ms in (the
  // last sample substitutes for shorter saccades)
  const std::size_t i20 = std::min(samples_for_ms(20.0, sac.sample_rate_hz), n - 1);
  const double idx = sac.pos_h[i20] - sac.pos_h[0];
  const double idy = sac.pos_v[i20] - sac.pos_v[0];
  if (std::hypot(idx, idy) > 0) {
    const double odx = c.ux, ody = c.uy;
    out.init_dir_deg = std::atan2(odx * idy - ody * idx, odx * idx + ody * idy) * kRadToDeg;
  }

  const std::size_t m = samples_for_ms(10.0, sac.sample_rate_hz);
  if (m >= 1 && m <= n - 1) {
    double s = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double dx = sac.pos_h[j] - sac.pos_h[0];
      const double dy = sac.pos_v[j] - sac.pos_v[0];
      s += dx * c.nx + dy * c.ny;
    }
    out.init_avg_dev = s / static_cast<double>(m);
  }
  return out;
}

RawCurvature sac_raw_curvature(const SaccadeView& sac) {
  const std::size_t n = sac.size();
  if (n < 3) throw std::invalid_argument("sac_raw_curvature: need >= 3 samples");
  const Chord c = chord_of(sac.pos_h, sac.pos_v);
  if (c.len <= 0) return {missing(), missing(), missing()};

  RawCurvature out{0, 0, 0};
  double max_abs = -1;
  std::size_t max_j = 0;
  double prev_along = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = sac.pos_h[j] - sac.pos_h[0];
    const double dy = sac.pos_v[j] - sac.pos_v[0];
    const double perp = dx * c.nx + dy * c.ny;
    const double along = dx * c.ux + dy * c.uy;
    if (std::fabs(perp) > max_abs) {
      max_abs = std::fabs(perp);
      max_j = j;
    }
    if (j > 0) out.area += (along - prev_along) * perp;
    prev_along = along;
  }
  out.max_dev = max_abs;
  out.max_dev_pct = 100.0 * static_cast<double>(max_j) / static_cast<double>(n - 1);
  return out;
}

FitCurvature sac_fit_curvature(const NormalizedSaccadeFrame& frame) {
  if (frame.x.size() < 4) throw std::invalid_argument("sac_fit_curvature: need >= 4 points");
  FitCurvature out;
  out.quad_coeff = polyfit(frame.x, frame.y, 2).coeffs[2];

  const PolyFit cubic = polyfit(frame.x, frame.y, 3);
  const double c1 = cubic.coeffs[1], c2 = cubic.coeffs[2], c3 = cubic.coeffs[3];
  const auto value = [&](double x) {
    return cubic.coeffs[0] + x * (c1 + x * (c2 + x * c3));
  };

  // stationary points of the fitted cubic inside [-1, 1], classified by the
  // second derivative; endpoints stand in when a local max/min is absent
  double local_max_x = missing(), local_min_x = missing();
  if (c3 != 0) {
    const double disc = 4 * c2 * c2 - 12 * c3 * c1;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (double root : {(-2 * c2 - sq) / (6 * c3), (-2 * c2 + sq) / (6 * c3)}) {
        if (root < -1 || root > 1) continue;
        const double dd = 2 * c2 + 6 * c3 * root;
        if (dd < 0)
          local_max_x = root;
        else if (dd > 0)
          local_min_x = root;
      }
    }
  } else if (c2 != 0) {
    const double root = -c1 / (2 * c2);
    if (root >= -1 && root <= 1) {
      if (c2 < 0)
        local_max_x = root;
      else
        local_min_x = root;
    }
  }
  const auto endpoint_extreme = [&](bool want_max) {
    const double a = value(-1), b = value(1);
    if (want_max) return a >= b ? std::pair{a, -1.0} : std::pair{b, 1.0};
    return a <= b ? std::pair{a, -1.0} : std::pair{b, 1.0};
  };
  const auto pct = [](double x) { return (x + 1.0) / 2.0 * 100.0; };

  if (!is_missing(local_max_x)) {
    out.cub_m1 = value(local_max_x);
    out.cub_m1_pct = pct(local_max_x);
  } else {
    const auto [v, x] = endpoint_extreme(true);
    out.cub_m1 = v;
    out.cub_m1_pct = pct(x);
  }
  if (!is_missing(local_min_x)) {
    out.cub_m2 = value(local_min_x);
    out.cub_m2_pct = pct(local_min_x);
  } else {
    const auto [v, x] = endpoint_extreme(false);
    out.cub_m2 = v;
    out.cub_m2_pct = pct(x);
  }
  out.cub_max = std::max(out.cub_m1, out.cub_m2);
  out.cub_max_pct = std::max(out.cub_m1_pct, out.cub_m2_pct);
  return out;
}

SaccadeDynamics sac_dynamics(const SaccadeView& sac) {
  const std::size_t n = sac.size();
  if (n < 3) throw std::invalid_argument("sac_dynamics: need >= 3 samples");
  SaccadeDynamics out;

  // valleys: sign changes from - to + in the first difference of the radial
  // velocity profile
  int last_sign = 0;
  std::size_t valleys = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double d = sac.vel_r[j] - sac.vel_r[j - 1];
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last_sign < 0 && s > 0) ++valleys;
    last_sign = s;
  }
  out.vel_local_minima = static_cast<double>(valleys);

  const std::span<const double> vel[3] = {sac.vel_h, sac.vel_v, sac.vel_r};
  const std::span<const double> acc[3] = {sac.acc_h, sac.acc_v, sac.acc_r};

  std::size_t peak_idx = 0;  // of the radial velocity
  for (std::size_t j = 1; j < n; ++j)
    if (sac.vel_r[j] > sac.vel_r[peak_idx]) peak_idx = j;

  for (int c = 0; c < 3; ++c) {
    double pk = 0;
    for (double v : vel[c]) pk = std::max(pk, std::fabs(v));
    out.pk_vel[c] = pk;

    double pa = missing(), pd = missing();
    if (peak_idx > 0) {
      pa = 0;
      for (std::size_t j = 0; j < peak_idx; ++j) pa = std::max(pa, std::fabs(acc[c][j]));
    }
    if (peak_idx + 1 < n) {
      pd = 0;
      for (std::size_t j = peak_idx + 1; j < n; ++j) pd = std::max(pd, std::fabs(acc[c][j]));
    }
    out.pk_acc[c] = pa;
    out.pk_dec[c] = pd;

    out.vel_prof[c] = profile_stats(vel[c]);
    out.acc_prof[c] = profile_stats(acc[c]);
  }
  return out;
}

double local_noise_before(const SaccadeView& sac, const KinematicTraces& tr,
                          std::size_t prev_event_end_exclusive, double window_ms) {
  if (sac.start_idx == 0) return missing();
  const std::size_t w = samples_for_ms(window_ms, tr.sample_rate_hz);
  std::size_t lo = sac.start_idx > w ? sac.start_idx - w : 0;
  lo = std::max(lo, prev_event_end_exclusive);
  double s = 0;
  std::size_t count = 0;
  for (std::size_t j = lo; j < sac.start_idx; ++j) {
    if (!tr.valid[j] || is_missing(tr.vel_r[j])) continue;
    s += std::fabs(tr.vel_r[j]);
    ++count;
  }
  return count > 0 ? s / static_cast<double>(count) : missing();
}

SaccadeRatios sac_ratios(const SaccadeView& sac, double noise_floor) {
  SaccadeRatios out;
  const std::size_t n = sac.size();
  const double dur_s = sac.duration_ms() / 1000.0;
  const AmplitudePath ap = sac_amplitude_path(sac);
  const SaccadeDynamics dyn = sac_dynamics(sac);
  const double amp[3] = {ap.amp_h, ap.amp_v, ap.amp_r};

  for (int c = 0; c < 3; ++c) {
    out.amp_dur[c] = dur_s > 0 ? amp[c] / dur_s : missing();
    out.pkvel_amp[c] = amp[c] > 0 ? dyn.pk_vel[c] / amp[c] : missing();
    out.pkvel_dur[c] = dur_s > 0 ? dyn.pk_vel[c] / dur_s : missing();
    out.pkvel_mnvel[c] =
        (dur_s > 0 && amp[c] > 0) ? dyn.pk_vel[c] / (amp[c] / dur_s) : missing();
    out.pkacc_pkdec[c] = (!is_missing(dyn.pk_acc[c]) && !is_missing(dyn.pk_dec[c]) &&
                          dyn.pk_dec[c] > 0)
                             ? dyn.pk_acc[c] / dyn.pk_dec[c]
                             : missing();
  }

  out.pkvel_noise =
      (!is_missing(noise_floor) && noise_floor > 0) ? dyn.pk_vel[2] / noise_floor : missing();

  std::size_t peak_idx = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (sac.vel_r[j] > sac.vel_r[peak_idx]) peak_idx = j;
  const std::size_t decel = n - 1 - peak_idx;
  out.acc_dec_dur = decel > 0 ? static_cast<double>(peak_idx) / static_cast<double>(decel)
                              : missing();
  return out;
}

MainSequenceFits main_sequence(std::span<const double> amp_r_deg,
                               std::span<const double> dur_ms,
                               std::span<const double> pkvel_r_deg_s) {
  MainSequenceFits out;
  out.amp_dur = {missing(), missing(), missing()};
  out.log_pkvel_amp = {missing(), missing(), missing()};
  if (amp_r_deg.size() != dur_ms.size() || amp_r_deg.size() != pkvel_r_deg_s.size())
    throw std::invalid_argument("main_sequence: size mismatch");
  if (amp_r_deg.size() < 3) return out;

  try {
    out.amp_dur = linfit(dur_ms, amp_r_deg);
  } catch (const std::invalid_argument&) {
    // constant durations: leave missing
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < amp_r_deg.size(); ++i) {
    if (amp_r_deg[i] > 0 && pkvel_r_deg_s[i] > 0) {
      lx.push_back(std::log(amp_r_deg[i]));
      ly.push_back(std::log(pkvel_r_deg_s[i]));
    }
  }
  if (lx.size() >= 3) {
    try {
      out.log_pkvel_amp = linfit(lx, ly);
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

ReadingBehavior reading_behavior(std::span<const SaccadeView> all_saccades,
                                 double recording_duration_s, double amplitude_bound_deg) {
  if (recording_duration_s <= 0)
    throw std::invalid_argument("reading_behavior: zero-length recording");
  std::size_t sr = 0, sl = 0, lr = 0, ll = 0;
  for (const auto& s : all_saccades) {
    const std::size_t n = s.size();
    const double dh = s.pos_h[n - 1] - s.pos_h[0];
    const double dv = s.pos_v[n - 1] - s.pos_v[0];
    const bool small = std::hypot(dh, dv) <= amplitude_bound_deg;
    const bool right = dh >= 0;  // exact vertical counted as rightward
    (small ? (right ? sr : sl) : (right ? lr : ll)) += 1;
  }
  ReadingBehavior out;
  out.small_right_rate = static_cast<double>(sr) / recording_duration_s;
  out.small_left_rate = static_cast<double>(sl) / recording_duration_s;
  out.large_right_rate = static_cast<double>(lr) / recording_duration_s;
  out.large_left_rate = static_cast<double>(ll) / recording_duration_s;
  out.small_left_right_ratio =
      sr > 0 ? static_cast<double>(sl) / static_cast<double>(sr) : missing();
  out.small_all_large_left_ratio =
      ll > 0 ? static_cast<double>(sl + sr) / static_cast<double>(ll) : missing();
  return out;
}

SaccadeFeatures compute_saccade_features(std::span<const SaccadeView> kept,
                                         std::span<const SaccadeView> large,
                                         const KinematicTraces& tr,
                                         std::span<const EventSegment> all_segments,
                                         double recording_duration_s,
                                         double amplitude_bound_deg) {
  SaccadeFeatures out;
  out.rate = static_cast<double>(kept.size()) / recording_duration_s;

  // end (exclusive) of the latest saccade/oscillation before an index
  const auto prev_boundary = [&](std::size_t start) {
    std::size_t bound = 0;
    for (const auto& seg : all_segments) {
      if (seg.start_idx >= start) break;
      if (seg.kind != EventKind::Fixation && seg.end_idx < start)
        bound = std::max(bound, seg.end_idx + 1);
    }
    return bound;
  };

  std::vector<double> ms_amp, ms_dur, ms_pkvel;

  for (const auto& s : kept) {
    out.durations_ms.push_back(s.duration_ms());

    const AmplitudePath ap = sac_amplitude_path(s);
    out.amplitude.h.push_back(ap.amp_h);
    out.amplitude.v.push_back(ap.amp_v);
    out.amplitude.r.push_back(ap.amp_r);
    out.travelled.push_back(ap.travelled_r);
    out.efficiency.push_back(ap.efficiency);
    out.tail_efficiency.push_back(ap.tail_efficiency);
    out.tail_inconsistency.push_back(ap.tail_inconsistency_pct);

    const InitialDeviation init = sac_initial_deviation(s);
    out.init_dir.push_back(init.init_dir_deg);
    out.init_avg_dev.push_back(init.init_avg_dev);

    if (s.size() >= 3) {
      const RawCurvature rc = sac_raw_curvature(s);
      out.max_raw_dev.push_back(rc.max_dev);
      out.max_raw_dev_pct.push_back(rc.max_dev_pct);
      out.area_curv.push_back(rc.area);
    } else {
      out.max_raw_dev.push_back(missing());
      out.max_raw_dev_pct.push_back(missing());
      out.area_curv.push_back(missing());
    }

    bool fit_ok = false;
    if (s.size() >= 4 && ap.amp_r > 0) {
      try {
        const FitCurvature fc = sac_fit_curvature(normalize_saccade_frame(s));
        out.quad_curv.push_back(fc.quad_coeff);
        out.cub_m1.push_back(fc.cub_m1);
        out.cub_m1_pct.push_back(fc.cub_m1_pct);
        out.cub_m2.push_back(fc.cub_m2);
        out.cub_m2_pct.push_back(fc.cub_m2_pct);
        out.cub_max.push_back(fc.cub_max);
        out.cub_max_pct.push_back(fc.cub_max_pct);
        fit_ok = true;
      } catch (const std::invalid_argument&) {
      }
    }
    if (!fit_ok) {
      for (auto* vv : {&out.quad_curv, &out.cub_m1, &out.cub_m1_pct, &out.cub_m2,
                       &out.cub_m2_pct, &out.cub_max, &out.cub_max_pct})
        vv->push_back(missing());
    }

    const SaccadeDynamics dyn = sac_dynamics(s);
    out.vel_local_minima.push_back(dyn.vel_local_minima);
    const auto push3 = [](SeriesHVR* dst, const double v[3]) {
      dst->h.push_back(v[0]);
      dst->v.push_back(v[1]);
      dst->r.push_back(v[2]);
    };
    push3(&out.pk_vel, dyn.pk_vel);
    push3(&out.pk_acc, dyn.pk_acc);
    push3(&out.pk_dec, dyn.pk_dec);
    const auto push_prof = [](SeriesHVR* mean, SeriesHVR* median, SeriesHVR* sd,
                              SeriesHVR* skew, SeriesHVR* kurt, const ProfileStats p[3]) {
      std::vector<double>* cols[3][5] = {
          {&mean->h, &median->h, &sd->h, &skew->h, &kurt->h},
          {&mean->v, &median->v, &sd->v, &skew->v, &kurt->v},
          {&mean->r, &median->r, &sd->r, &skew->r, &kurt->r},
      };
      for (int c = 0; c < 3; ++c) {
        cols[c][0]->push_back(p[c].mean);
        cols[c][1]->push_back(p[c].median);
        cols[c][2]->push_back(p[c].sd);
        cols[c][3]->push_back(p[c].skew);
        cols[c][4]->push_back(p[c].kurt);
      }
    };
    push_prof(&out.vel_prof_mean, &out.vel_prof_median, &out.vel_prof_sd, &out.vel_prof_skew,
              &out.vel_prof_kurt, dyn.vel_prof);
    push_prof(&out.acc_prof_mean, &out.acc_prof_median, &out.acc_prof_sd, &out.acc_prof_skew,
              &out.acc_prof_kurt, dyn.acc_prof);

    const double noise = local_noise_before(s, tr, prev_boundary(s.start_idx));
    const SaccadeRatios ratios = sac_ratios(s, noise);
    push3(&out.amp_dur_ratio, ratios.amp_dur);
    push3(&out.pkvel_amp_ratio, ratios.pkvel_amp);
    push3(&out.pkvel_dur_ratio, ratios.pkvel_dur);
    push3(&out.pkvel_mnvel_ratio, ratios.pkvel_mnvel);
    out.pkvel_noise_ratio.push_back(ratios.pkvel_noise);
    out.acc_dec_dur_ratio.push_back(ratios.acc_dec_dur);
    push3(&out.pkacc_pkdec_ratio, ratios.pkacc_pkdec);

    ms_amp.push_back(ap.amp_r);
    ms_dur.push_back(s.duration_ms());
    ms_pkvel.push_back(dyn.pk_vel[2]);
  }

  out.main_seq = main_sequence(ms_amp, ms_dur, ms_pkvel);

  std::vector<SaccadeView> all(kept.begin(), kept.end());
  all.insert(all.end(), large.begin(), large.end());
  out.reading = reading_behavior(all, recording_duration_s, amplitude_bound_deg);
  return out;
}

}  // namespace gaze
