#include "gaze/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaze {

PsoSpeedCategory categorize_pso(double peak_vel_r_deg_s, const ClassifierConfig& cfg) {
  if (peak_vel_r_deg_s < 0) throw std::invalid_argument("categorize_pso: negative peak velocity");
  if (peak_vel_r_deg_s < cfg.pso_slow_lo_deg_s) return PsoSpeedCategory::SubThreshold;
  if (peak_vel_r_deg_s < cfg.pso_slow_hi_deg_s) return PsoSpeedCategory::Slow;
  if (peak_vel_r_deg_s < cfg.pso_mod_hi_deg_s) return PsoSpeedCategory::Moderate;
  return PsoSpeedCategory::Fast;
}

namespace {

struct MeanSd {
  double mean = 0, sd = 0;
  std::size_t n = 0;
};

MeanSd mean_sd_below(const std::vector<double>& v, const std::vector<std::uint8_t>& valid,
                     double bound) {
  MeanSd out;
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!valid[i] || is_missing(v[i]) || v[i] >= bound) continue;
    s += v[i];
    ++out.n;
  }
  if (out.n == 0) return out;
  out.mean = s / static_cast<double>(out.n);
  double ss = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!valid[i] || is_missing(v[i]) || v[i] >= bound) continue;
    ss += (v[i] - out.mean) * (v[i] - out.mean);
  }
  out.sd = std::sqrt(ss / static_cast<double>(out.n));
  return out;
}

bool usable(const KinematicTraces& tr, std::size_t i) {
  return tr.valid[i] && !is_missing(tr.vel_r[i]);
}

}  // namespace

std::vector<EventSegment> classify(const KinematicTraces& tr, const ClassifierConfig& cfg) {
  if (cfg.pso_slow_lo_deg_s >= cfg.pso_slow_hi_deg_s ||
      cfg.pso_slow_hi_deg_s >= cfg.pso_mod_hi_deg_s)
    throw std::invalid_argument("classify: PSO category bounds out of order");
  const std::size_t n = tr.size();
  const double rate = tr.sample_rate_hz;
  const auto samples = [&](double ms) {
    return static_cast<std::size_t>(std::lround(ms * rate / 1000.0));
  };

  std::vector<EventSegment> events;
  if (n == 0 ||
      static_cast<double>(n) * 1000.0 / rate < std::min(cfg.min_fixation_ms, cfg.min_saccade_ms))
    return events;  // too short for any event

  // adapt the peak threshold on the radial velocity
  MeanSd below = mean_sd_below(tr.vel_r, tr.valid, cfg.peak_threshold_init_deg_s);
  if (below.n == 0)
    throw std::runtime_error("classify: no samples below the initial peak threshold");
  double pt = cfg.peak_threshold_init_deg_s;
  for (int it = 0; it < 100; ++it) {
    below = mean_sd_below(tr.vel_r, tr.valid, pt);
    if (below.n == 0) break;
    const double next = std::max(below.mean + 6.0 * below.sd, cfg.peak_threshold_floor_deg_s);
    const double delta = std::fabs(next - pt);
    pt = next;
    if (delta < 1.0) break;
  }

  // onset/offset threshold from the fixation noise level: samples near an
  // above-PT run (saccade bodies and trailing oscillations) are excluded
  const std::size_t guard = samples(50.0);
  std::vector<std::uint8_t> near_peak(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!usable(tr, j) || tr.vel_r[j] <= pt) continue;
    const std::size_t lo = j > guard ? j - guard : 0;
    const std::size_t hi = std::min(j + guard, n - 1);
    for (std::size_t k = lo; k <= hi; ++k) near_peak[k] = 1;
  }
  double noise_mean = 0, noise_sd = 0;
  {
    double s = 0, ss = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!usable(tr, j) || near_peak[j] || tr.vel_r[j] >= pt) continue;
      s += tr.vel_r[j];
      ++count;
    }
    if (count == 0) {
      const MeanSd all = mean_sd_below(tr.vel_r, tr.valid, pt);
      noise_mean = all.mean;
      noise_sd = all.sd;
    } else {
      noise_mean = s / static_cast<double>(count);
      for (std::size_t j = 0; j < n; ++j) {
        if (!usable(tr, j) || near_peak[j] || tr.vel_r[j] >= pt) continue;
        ss += (tr.vel_r[j] - noise_mean) * (tr.vel_r[j] - noise_mean);
      }
      noise_sd = std::sqrt(ss / static_cast<double>(count));
    }
  }
  const double thr = std::min(
      std::max(noise_mean + cfg.saccade_onset_offset_factor * noise_sd,
               cfg.onset_offset_floor_deg_s),
      pt);

  // candidate saccades: runs above the peak threshold, grown outwards to
  // where the velocity drops below the onset/offset threshold. The walk also
  // stops at a velocity trough below the peak threshold: at a saccade-to-
  // oscillation junction the smoothed velocity can stay above the offset
  // threshold even though the movement has reversed.
  const auto trough = [&](std::size_t j, double run_peak) {
    if (j == 0 || j + 1 >= n || !usable(tr, j - 1) || !usable(tr, j + 1)) return false;
    return tr.vel_r[j] < 0.25 * run_peak && tr.vel_r[j] <= tr.vel_r[j - 1] &&
           tr.vel_r[j] <= tr.vel_r[j + 1];
  };
  std::vector<EventSegment> saccades;
  std::size_t i = 0;
  while (i < n) {
    if (!usable(tr, i) || tr.vel_r[i] <= pt) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    double run_peak = tr.vel_r[i];
    while (run_end + 1 < n && usable(tr, run_end + 1) && tr.vel_r[run_end + 1] > pt) {
      ++run_end;
      run_peak = std::max(run_peak, tr.vel_r[run_end]);
    }

    std::size_t s = i;
    while (s > 0 && usable(tr, s - 1) && tr.vel_r[s - 1] > thr && !trough(s - 1, run_peak)) --s;
    std::size_t e = run_end;
    while (e + 1 < n && usable(tr, e + 1) && tr.vel_r[e + 1] > thr && !trough(e + 1, run_peak))
      ++e;
    // the deceleration tail decays slowly; descend a short way below the
    // threshold so the offset reaches the velocity floor (2 ms cap keeps
    // smoothing pre-response from dragging the boundary out)
    for (std::size_t budget = std::max<std::size_t>(samples(2.0), 1); budget > 0; --budget) {
      if (e + 1 >= n || !usable(tr, e + 1) || tr.vel_r[e + 1] >= tr.vel_r[e] ||
          tr.vel_r[e + 1] <= 0.7 * thr)
        break;
      ++e;
    }

    if (!saccades.empty() && s <= saccades.back().end_idx + 1) {
      saccades.back().end_idx = e;  // merge with the previous saccade
    } else {
      saccades.push_back({EventKind::Saccade, s, e, std::nullopt});
    }
    i = e + 1;
  }

  const std::size_t min_sac = samples(cfg.min_saccade_ms);
  std::erase_if(saccades,
                [&](const EventSegment& s) { return s.end_idx - s.start_idx < min_sac; });

  // post-saccadic oscillations: velocity re-exceeds the offset threshold
  // after the saccade but stays below the peak threshold, within max_pso_ms
  std::vector<EventSegment> psos;
  const std::size_t max_pso = samples(cfg.max_pso_ms);
  for (std::size_t k = 0; k < saccades.size(); ++k) {
    const std::size_t e = saccades[k].end_idx;
    std::size_t window_end = std::min(e + max_pso, n - 1);
    if (k + 1 < saccades.size())
      window_end = std::min(window_end, saccades[k + 1].start_idx - 1);
    std::size_t last_above = e;
    for (std::size_t j = e + 1; j <= window_end && usable(tr, j); ++j) {
      if (tr.vel_r[j] > thr) last_above = j;
    }
    if (last_above >= e + 2) {  // a one-sample blip is noise, not an oscillation
      double peak = 0;
      for (std::size_t j = e + 1; j <= last_above; ++j) peak = std::max(peak, tr.vel_r[j]);
      if (cfg.drop_subthreshold_psos && peak < cfg.pso_slow_lo_deg_s) continue;
      psos.push_back({EventKind::Pso, e + 1, last_above, saccades[k].start_idx});
    }
  }

  // fixations fill what is left of each valid run
  events.reserve(saccades.size() * 2 + 8);
  for (const auto& s : saccades) events.push_back(s);
  for (const auto& p : psos) events.push_back(p);
  std::sort(events.begin(), events.end(),
            [](const EventSegment& a, const EventSegment& b) { return a.start_idx < b.start_idx; });

  std::vector<EventSegment> result;
  const std::size_t min_fix = samples(cfg.min_fixation_ms);
  std::size_t cursor = 0;
  auto flush_gap = [&](std::size_t lo, std::size_t hi) {
    // emit fixations for the valid stretches of [lo, hi)
    std::size_t a = lo;
    while (a < hi) {
      if (!usable(tr, a)) {
        ++a;
        continue;
      }
      std::size_t b = a;
      while (b + 1 < hi && usable(tr, b + 1)) ++b;
      if (b - a >= min_fix)
        result.push_back({EventKind::Fixation, a, b, std::nullopt});
      a = b + 1;
    }
  };
  for (const auto& ev : events) {
    flush_gap(cursor, ev.start_idx);
    result.push_back(ev);
    cursor = ev.end_idx + 1;
  }
  flush_gap(cursor, n);

  std::sort(result.begin(), result.end(),
            [](const EventSegment& a, const EventSegment& b) { return a.start_idx < b.start_idx; });
  return result;
}

double radial_amplitude(const EventSegment& seg, const KinematicTraces& tr) {
  const double dh = tr.pos_h[seg.end_idx] - tr.pos_h[seg.start_idx];
  const double dv = tr.pos_v[seg.end_idx] - tr.pos_v[seg.start_idx];
  return std::hypot(dh, dv);
}

PostFilterResult post_filter(const std::vector<EventSegment>& segments,
                             const KinematicTraces& traces, double max_duration_ms,
                             double max_amplitude_deg) {
  PostFilterResult out;
  // start indices of saccades moved out, so their oscillations follow them
  std::vector<std::size_t> large_starts;
  for (const auto& seg : segments) {
    if (seg.kind == EventKind::Saccade) {
      const double dur = segment_duration_ms(seg, traces.sample_rate_hz);
      if (dur > max_duration_ms || radial_amplitude(seg, traces) > max_amplitude_deg) {
        out.large.push_back(seg);
        large_starts.push_back(seg.start_idx);
        continue;
      }
    }
    if (seg.kind == EventKind::Pso && seg.parent_start &&
        std::find(large_starts.begin(), large_starts.end(), *seg.parent_start) !=
            large_starts.end()) {
      out.large.push_back(seg);
      continue;
    }
    out.kept.push_back(seg);
  }
  return out;
}

}  // namespace gaze
