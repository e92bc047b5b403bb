#include "gaze/extract.hpp"

#include <stdexcept>

#include "gaze/events.hpp"
#include "gaze/fixation_features.hpp"
#include "gaze/pso_features.hpp"
#include "gaze/saccade_features.hpp"
#include "gaze/stats.hpp"

namespace gaze {

double FeatureVector::at(std::string_view id) const {
  const int i = catalog_index(id);
  if (i < 0) throw std::invalid_argument("unknown feature id: " + std::string(id));
  return values[static_cast<std::size_t>(i)];
}

void FeatureVector::set(std::string_view id, double v) {
  const int i = catalog_index(id);
  if (i < 0) throw std::invalid_argument("unknown feature id: " + std::string(id));
  values[static_cast<std::size_t>(i)] = v;
}

namespace {

// drop missing entries, then expand into the six subtypes (all six missing
// when nothing remains)
void expand_distr(FeatureVector* fv, const std::string& base, Component comp,
                  const std::vector<double>& series) {
  std::vector<double> clean;
  clean.reserve(series.size());
  for (double v : series)
    if (!is_missing(v)) clean.push_back(v);

  DistrStats st;
  const bool have = !clean.empty();
  if (have) st = distr_stat(clean);

  const std::string suffix =
      comp == Component::None ? "" : "." + std::string(component_name(comp));
  const auto put = [&](Subtype s, double v) {
    fv->set(base + "." + std::string(subtype_name(s)) + suffix, have ? v : missing());
  };
  put(Subtype::MN, st.mn);
  put(Subtype::MD, st.md);
  put(Subtype::SD, st.sd);
  put(Subtype::IQ, st.iq);
  put(Subtype::SK, st.sk);
  put(Subtype::KU, st.ku);
}

void expand_hvr(FeatureVector* fv, const std::string& base, const SeriesHVR& s) {
  expand_distr(fv, base, Component::H, s.h);
  expand_distr(fv, base, Component::V, s.v);
  expand_distr(fv, base, Component::R, s.r);
}

void expand_hv(FeatureVector* fv, const std::string& base, const SeriesHV& s) {
  expand_distr(fv, base, Component::H, s.h);
  expand_distr(fv, base, Component::V, s.v);
}

void fill_fixations(FeatureVector* fv, const FixationFeatures& f) {
  fv->set("F01", f.rate);
  expand_distr(fv, "F02", Component::None, f.durations_ms);
  expand_hv(fv, "F03", f.centroid);
  expand_hvr(fv, "F04", f.drift.displacement);
  expand_hvr(fv, "F05", f.drift.distance);
  expand_hvr(fv, "F06", f.drift.avg_speed);
  expand_hv(fv, "F07", f.fits.lin_slope);
  expand_hv(fv, "F08", f.fits.lin_r2);
  expand_hv(fv, "F09", f.fits.quad_r2);
  if (f.stepwise_defined) {
    fv->set("F10.H", f.stepwise_h.l0q0);
    fv->set("F11.H", f.stepwise_h.l0q1);
    fv->set("F12.H", f.stepwise_h.l1q0);
    fv->set("F13.H", f.stepwise_h.l1q1);
    fv->set("F10.V", f.stepwise_v.l0q0);
    fv->set("F11.V", f.stepwise_v.l0q1);
    fv->set("F12.V", f.stepwise_v.l1q0);
    fv->set("F13.V", f.stepwise_v.l1q1);
  }
  expand_hvr(fv, "F14", f.vel_prof_mean);
  expand_hvr(fv, "F15", f.vel_prof_median);
  expand_hvr(fv, "F16", f.vel_prof_sd);
  expand_hvr(fv, "F17", f.vel_prof_skew);
  expand_hvr(fv, "F18", f.vel_prof_kurt);
  expand_distr(fv, "F19", Component::R, f.pct_above_p90);
  expand_distr(fv, "F20", Component::R, f.pct_cross_p90);
  expand_hvr(fv, "F21", f.acc_prof_mean);
  expand_hvr(fv, "F22", f.acc_prof_median);
  expand_hvr(fv, "F23", f.acc_prof_sd);
  expand_hvr(fv, "F24", f.acc_prof_skew);
  expand_hvr(fv, "F25", f.acc_prof_kurt);
}

void fill_saccades(FeatureVector* fv, const SaccadeFeatures& s) {
  fv->set("S01", s.rate);
  expand_distr(fv, "S02", Component::None, s.durations_ms);
  expand_hvr(fv, "S03", s.amplitude);
  expand_distr(fv, "S04", Component::R, s.travelled);
  expand_distr(fv, "S05", Component::R, s.efficiency);
  expand_distr(fv, "S06", Component::R, s.tail_efficiency);
  expand_distr(fv, "S07", Component::D2, s.tail_inconsistency);
  expand_distr(fv, "S08", Component::D2, s.init_dir);
  expand_distr(fv, "S09", Component::D2, s.init_avg_dev);
  expand_distr(fv, "S10", Component::D2, s.max_raw_dev);
  expand_distr(fv, "S11", Component::D2, s.max_raw_dev_pct);
  expand_distr(fv, "S12", Component::D2, s.area_curv);
  expand_distr(fv, "S13", Component::D2, s.quad_curv);
  expand_distr(fv, "S14", Component::D2, s.cub_m1);
  expand_distr(fv, "S15", Component::D2, s.cub_m1_pct);
  expand_distr(fv, "S16", Component::D2, s.cub_m2);
  expand_distr(fv, "S17", Component::D2, s.cub_m2_pct);
  expand_distr(fv, "S18", Component::D2, s.cub_max);
  expand_distr(fv, "S19", Component::D2, s.cub_max_pct);
  expand_distr(fv, "S20", Component::R, s.vel_local_minima);
  expand_hvr(fv, "S21", s.pk_vel);
  expand_hvr(fv, "S22", s.vel_prof_mean);
  expand_hvr(fv, "S23", s.vel_prof_median);
  expand_hvr(fv, "S24", s.vel_prof_sd);
  expand_hvr(fv, "S25", s.vel_prof_skew);
  expand_hvr(fv, "S26", s.vel_prof_kurt);
  expand_hvr(fv, "S27", s.pk_acc);
  expand_hvr(fv, "S28", s.pk_dec);
  expand_hvr(fv, "S29", s.acc_prof_mean);
  expand_hvr(fv, "S30", s.acc_prof_median);
  expand_hvr(fv, "S31", s.acc_prof_sd);
  expand_hvr(fv, "S32", s.acc_prof_skew);
  expand_hvr(fv, "S33", s.acc_prof_kurt);
  expand_hvr(fv, "S34", s.amp_dur_ratio);
  expand_hvr(fv, "S35", s.pkvel_amp_ratio);
  expand_hvr(fv, "S36", s.pkvel_dur_ratio);
  expand_hvr(fv, "S37", s.pkvel_mnvel_ratio);
  expand_distr(fv, "S38", Component::R, s.pkvel_noise_ratio);
  expand_distr(fv, "S39", Component::None, s.acc_dec_dur_ratio);
  expand_hvr(fv, "S40", s.pkacc_pkdec_ratio);
  fv->set("S41.R", s.main_seq.amp_dur.intercept);
  fv->set("S42.R", s.main_seq.amp_dur.slope);
  fv->set("S43.R", s.main_seq.amp_dur.r2);
  fv->set("S44.R", s.main_seq.log_pkvel_amp.intercept);
  fv->set("S45.R", s.main_seq.log_pkvel_amp.slope);
  fv->set("S46.R", s.main_seq.log_pkvel_amp.r2);
  fv->set("S47", s.reading.small_right_rate);
  fv->set("S48", s.reading.small_left_rate);
  fv->set("S49", s.reading.large_right_rate);
  fv->set("S50", s.reading.large_left_rate);
  fv->set("S51", s.reading.small_left_right_ratio);
  fv->set("S52", s.reading.small_all_large_left_ratio);
}

void fill_psos(FeatureVector* fv, const PsoFeatures& p, bool any) {
  if (!any) return;  // zero oscillations: the whole family stays missing
  expand_distr(fv, "P01", Component::None, p.durations_ms);
  expand_distr(fv, "P02", Component::None, p.intervals_ms);
  fv->set("P03", p.pct_with_pso);
  fv->set("P04", p.pct_slow);
  fv->set("P05", p.pct_moderate);
  fv->set("P06", p.pct_fast);
  expand_hvr(fv, "P07", p.max_abs_dev);
  expand_hvr(fv, "P08", p.valleys);
  expand_hvr(fv, "P09", p.peaks);
  expand_hvr(fv, "P10", p.pk_vel);
  expand_hvr(fv, "P11", p.vel_prof_mean);
  expand_hvr(fv, "P12", p.vel_prof_median);
  expand_hvr(fv, "P13", p.vel_prof_sd);
  expand_hvr(fv, "P14", p.vel_prof_skew);
  expand_hvr(fv, "P15", p.vel_prof_kurt);
  expand_hvr(fv, "P16", p.acc_prof_mean);
  expand_hvr(fv, "P17", p.acc_prof_median);
  expand_hvr(fv, "P18", p.acc_prof_sd);
  expand_hvr(fv, "P19", p.acc_prof_skew);
  expand_hvr(fv, "P20", p.acc_prof_kurt);
  expand_distr(fv, "P21", Component::None, p.sdur_pdur);
  expand_hvr(fv, "P22", p.samp_pdur);
  expand_hvr(fv, "P23", p.samp_pdev);
  expand_hvr(fv, "P24", p.spkvel_ppkvel);
}

FeatureVector blank_vector(const GazeRecording& rec) {
  FeatureVector fv;
  fv.subject_id = rec.subject_id;
  fv.session_id = rec.session_id;
  fv.values.assign(feature_catalog().size(), missing());
  return fv;
}

}  // namespace

FeatureVector extract_with_segments(const GazeRecording& rec,
                                    const std::vector<EventSegment>& segments,
                                    const ExtractConfig& cfg) {
  FeatureVector fv = blank_vector(rec);
  const GazeRecording filled = interpolate_gaps(rec, cfg.max_gap_ms);
  const KinematicTraces traces = compute_kinematics(filled, cfg.smoothing);
  const double rec_dur_s = rec.duration_s();

  const PostFilterResult pf =
      post_filter(segments, traces, cfg.saccade_max_duration_ms, cfg.saccade_max_amplitude_deg);

  const auto fixations = build_fixation_views(traces, pf.kept);
  const auto saccades = build_saccade_views(traces, pf.kept);
  const auto large_saccades = build_saccade_views(traces, pf.large);
  const auto psos = build_pso_views(traces, pf.kept);

  if (!fixations.empty())
    fill_fixations(&fv, compute_fixation_features(fixations, rec_dur_s));
  else
    fv.set("F01", fix_rate(0, rec_dur_s));

  fill_saccades(&fv, compute_saccade_features(saccades, large_saccades, traces, segments,
                                              rec_dur_s, cfg.saccade_max_amplitude_deg));

  fill_psos(&fv, compute_pso_features(psos, saccades.size(), cfg.classifier), !psos.empty());
  return fv;
}

FeatureVector extract(const GazeRecording& rec, const ExtractConfig& cfg) {
  try {
    const GazeRecording filled = interpolate_gaps(rec, cfg.max_gap_ms);
    const KinematicTraces traces = compute_kinematics(filled, cfg.smoothing);
    const std::vector<EventSegment> segments = classify(traces, cfg.classifier);
    return extract_with_segments(rec, segments, cfg);
  } catch (const std::exception& e) {
    FeatureVector fv = blank_vector(rec);
    fv.diagnostic = e.what();
    return fv;
  }
}

}  // namespace gaze
