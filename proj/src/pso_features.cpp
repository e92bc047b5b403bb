#include "gaze/pso_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaze/stats.hpp"

namespace gaze {

namespace {

// reversal counts of the |position| first difference, per the sign-change rule
void count_reversals(std::span<const double> pos, double* valleys, double* peaks) {
  int last_sign = 0;
  std::size_t v = 0, p = 0;
  for (std::size_t j = 1; j < pos.size(); ++j) {
    const double d = std::fabs(pos[j]) - std::fabs(pos[j - 1]);
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last_sign < 0 && s > 0) ++v;
    if (last_sign > 0 && s < 0) ++p;
    last_sign = s;
  }
  *valleys = static_cast<double>(v);
  *peaks = static_cast<double>(p);
}

double peak_abs(std::span<const double> v) {
  double pk = 0;
  for (double x : v) pk = std::max(pk, std::fabs(x));
  return pk;
}

}  // namespace

PsoShape pso_shape(const PsoView& pso) {
  if (pso.size() < 3) throw std::invalid_argument("pso_shape: need >= 3 samples");
  PsoShape out;
  const std::span<const double> pos[3] = {pso.pos_h, pso.pos_v, pso.pos_r};
  for (int c = 0; c < 3; ++c) {
    const auto [mn, mx] = std::minmax_element(pos[c].begin(), pos[c].end());
    out.max_abs_dev[c] = *mx - *mn;
    count_reversals(pos[c], &out.valleys[c], &out.peaks[c]);
  }
  return out;
}

PsoParentRatios pso_parent_ratios(const PsoView& pso) {
  PsoParentRatios out;
  const double pdur_ms = pso.duration_ms();
  const double pdur_s = pdur_ms / 1000.0;
  const double sdur_ms = pso.parent.duration_ms();
  out.sdur_pdur = pdur_ms > 0 ? sdur_ms / pdur_ms : missing();

  const std::size_t pn = pso.parent.size();
  const double dh = pso.parent.pos_h[pn - 1] - pso.parent.pos_h[0];
  const double dv = pso.parent.pos_v[pn - 1] - pso.parent.pos_v[0];
  const double samp[3] = {std::fabs(dh), std::fabs(dv), std::hypot(dh, dv)};
  const double spk[3] = {peak_abs(pso.parent.vel_h), peak_abs(pso.parent.vel_v),
                         peak_abs(pso.parent.vel_r)};
  const double ppk[3] = {peak_abs(pso.vel_h), peak_abs(pso.vel_v), peak_abs(pso.vel_r)};

  PsoShape shape{};
  bool have_shape = pso.size() >= 3;
  if (have_shape) shape = pso_shape(pso);

  for (int c = 0; c < 3; ++c) {
    out.samp_pdur[c] = pdur_s > 0 ? samp[c] / pdur_s : missing();
    out.samp_pdev[c] =
        (have_shape && shape.max_abs_dev[c] > 0) ? samp[c] / shape.max_abs_dev[c] : missing();
    out.spkvel_ppkvel[c] = ppk[c] > 0 ? spk[c] / ppk[c] : missing();
  }
  return out;
}

PsoFeatures compute_pso_features(std::span<const PsoView> psos, std::size_t saccade_count,
                                 const ClassifierConfig& cfg) {
  PsoFeatures out;
  out.pct_with_pso = saccade_count > 0 ? 100.0 * static_cast<double>(psos.size()) /
                                             static_cast<double>(saccade_count)
                                       : missing();
  if (psos.empty()) {
    out.pct_slow = out.pct_moderate = out.pct_fast = missing();
    return out;
  }

  std::size_t slow = 0, moderate = 0, fast = 0;
  for (std::size_t i = 0; i < psos.size(); ++i) {
    const PsoView& p = psos[i];
    out.durations_ms.push_back(p.duration_ms());
    if (i > 0)
      out.intervals_ms.push_back(p.start_time_ms() - psos[i - 1].end_time_ms());

    switch (categorize_pso(peak_abs(p.vel_r), cfg)) {
      case PsoSpeedCategory::Slow: ++slow; break;
      case PsoSpeedCategory::Moderate: ++moderate; break;
      case PsoSpeedCategory::Fast: ++fast; break;
      case PsoSpeedCategory::SubThreshold: break;
    }

    if (p.size() >= 3) {
      const PsoShape shape = pso_shape(p);
      out.max_abs_dev.h.push_back(shape.max_abs_dev[0]);
      out.max_abs_dev.v.push_back(shape.max_abs_dev[1]);
      out.max_abs_dev.r.push_back(shape.max_abs_dev[2]);
      out.valleys.h.push_back(shape.valleys[0]);
      out.valleys.v.push_back(shape.valleys[1]);
      out.valleys.r.push_back(shape.valleys[2]);
      out.peaks.h.push_back(shape.peaks[0]);
      out.peaks.v.push_back(shape.peaks[1]);
      out.peaks.r.push_back(shape.peaks[2]);
    } else {
      for (auto* s : {&out.max_abs_dev, &out.valleys, &out.peaks}) {
        s->h.push_back(missing());
        s->v.push_back(missing());
        s->r.push_back(missing());
      }
    }

    out.pk_vel.h.push_back(peak_abs(p.vel_h));
    out.pk_vel.v.push_back(peak_abs(p.vel_v));
    out.pk_vel.r.push_back(peak_abs(p.vel_r));

    const std::span<const double> vel[3] = {p.vel_h, p.vel_v, p.vel_r};
    const std::span<const double> acc[3] = {p.acc_h, p.acc_v, p.acc_r};
    std::vector<double>* vcols[3][5] = {
        {&out.vel_prof_mean.h, &out.vel_prof_median.h, &out.vel_prof_sd.h,
         &out.vel_prof_skew.h, &out.vel_prof_kurt.h},
        {&out.vel_prof_mean.v, &out.vel_prof_median.v, &out.vel_prof_sd.v,
         &out.vel_prof_skew.v, &out.vel_prof_kurt.v},
        {&out.vel_prof_mean.r, &out.vel_prof_median.r, &out.vel_prof_sd.r,
         &out.vel_prof_skew.r, &out.vel_prof_kurt.r},
    };
    std::vector<double>* acols[3][5] = {
        {&out.acc_prof_mean.h, &out.acc_prof_median.h, &out.acc_prof_sd.h,
         &out.acc_prof_skew.h, &out.acc_prof_kurt.h},
        {&out.acc_prof_mean.v, &out.acc_prof_median.v, &out.acc_prof_sd.v,
         &out.acc_prof_skew.v, &out.acc_prof_kurt.v},
        {&out.acc_prof_mean.r, &out.acc_prof_median.r, &out.acc_prof_sd.r,
         &out.acc_prof_skew.r, &out.acc_prof_kurt.r},
    };
    for (int c = 0; c < 3; ++c) {
      const ProfileStats pv = profile_stats(vel[c]);
      vcols[c][0]->push_back(pv.mean);
      vcols[c][1]->push_back(pv.median);
      vcols[c][2]->push_back(pv.sd);
      vcols[c][3]->push_back(pv.skew);
      vcols[c][4]->push_back(pv.kurt);
      const ProfileStats pa = profile_stats(acc[c]);
      acols[c][0]->push_back(pa.mean);
      acols[c][1]->push_back(pa.median);
      acols[c][2]->push_back(pa.sd);
      acols[c][3]->push_back(pa.skew);
      acols[c][4]->push_back(pa.kurt);
    }

    const PsoParentRatios ratios = pso_parent_ratios(p);
    out.sdur_pdur.push_back(ratios.sdur_pdur);
    out.samp_pdur.h.push_back(ratios.samp_pdur[0]);
    out.samp_pdur.v.push_back(ratios.samp_pdur[1]);
    out.samp_pdur.r.push_back(ratios.samp_pdur[2]);
    out.samp_pdev.h.push_back(ratios.samp_pdev[0]);
    out.samp_pdev.v.push_back(ratios.samp_pdev[1]);
    out.samp_pdev.r.push_back(ratios.samp_pdev[2]);
    out.spkvel_ppkvel.h.push_back(ratios.spkvel_ppkvel[0]);
    out.spkvel_ppkvel.v.push_back(ratios.spkvel_ppkvel[1]);
    out.spkvel_ppkvel.r.push_back(ratios.spkvel_ppkvel[2]);
  }

  const double total = static_cast<double>(psos.size());
  out.pct_slow = 100.0 * static_cast<double>(slow) / total;
  out.pct_moderate = 100.0 * static_cast<double>(moderate) / total;
  out.pct_fast = 100.0 * static_cast<double>(fast) / total;
  return out;
}

}  // namespace gaze
