#include "gaze/events.hpp"

#include <algorithm>

namespace gaze {

namespace {

std::span<const double> slice(const std::vector<double>& v, const EventSegment& seg) {
  return std::span<const double>(v.data() + seg.start_idx, seg.length());
}

bool clean(const KinematicTraces& tr, const EventSegment& seg) {
  for (std::size_t i = seg.start_idx; i <= seg.end_idx; ++i)
    if (!tr.valid[i] || is_missing(tr.vel_r[i]) || is_missing(tr.acc_r[i])) return false;
  return true;
}

template <typename View>
View make_view(const KinematicTraces& tr, const EventSegment& seg) {
  View v;
  v.start_idx = seg.start_idx;
  v.end_idx = seg.end_idx;
  v.sample_rate_hz = tr.sample_rate_hz;
  v.pos_h = slice(tr.pos_h, seg);
  v.pos_v = slice(tr.pos_v, seg);
  v.pos_r = slice(tr.pos_r, seg);
  v.vel_h = slice(tr.vel_h, seg);
  v.vel_v = slice(tr.vel_v, seg);
  v.vel_r = slice(tr.vel_r, seg);
  v.acc_h = slice(tr.acc_h, seg);
  v.acc_v = slice(tr.acc_v, seg);
  v.acc_r = slice(tr.acc_r, seg);
  return v;
}

}  // namespace

std::vector<FixationView> build_fixation_views(const KinematicTraces& tr,
                                               const std::vector<EventSegment>& segments) {
  std::vector<FixationView> out;
  for (const auto& seg : segments) {
    if (seg.kind != EventKind::Fixation || !clean(tr, seg)) continue;
    out.push_back(make_view<FixationView>(tr, seg));
  }
  return out;
}

std::vector<SaccadeView> build_saccade_views(const KinematicTraces& tr,
                                             const std::vector<EventSegment>& segments) {
  std::vector<SaccadeView> out;
  for (const auto& seg : segments) {
    if (seg.kind != EventKind::Saccade || !clean(tr, seg)) continue;
    auto v = make_view<SaccadeView>(tr, seg);
    v.raw_h = slice(tr.raw_h, seg);
    v.raw_v = slice(tr.raw_v, seg);
    out.push_back(v);
  }
  return out;
}

std::vector<PsoView> build_pso_views(const KinematicTraces& tr,
                                     const std::vector<EventSegment>& segments) {
  std::vector<PsoView> out;
  for (const auto& seg : segments) {
    if (seg.kind != EventKind::Pso || !seg.parent_start || !clean(tr, seg)) continue;
    const auto parent =
        std::find_if(segments.begin(), segments.end(), [&](const EventSegment& s) {
          return s.kind == EventKind::Saccade && s.start_idx == *seg.parent_start;
        });
    if (parent == segments.end() || !clean(tr, *parent)) continue;
    auto v = make_view<PsoView>(tr, seg);
    v.parent = make_view<SaccadeView>(tr, *parent);
    v.parent.raw_h = slice(tr.raw_h, *parent);
    v.parent.raw_v = slice(tr.raw_v, *parent);
    out.push_back(v);
  }
  return out;
}

}  // namespace gaze
