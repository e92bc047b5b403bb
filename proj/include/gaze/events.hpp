#ifndef GAZE_EVENTS_HPP
#define GAZE_EVENTS_HPP

#include <span>
#include <vector>

#include "gaze/classify.hpp"
#include "gaze/signal.hpp"

namespace gaze {

// Per-event slices of the kinematic traces. Views refer into the traces
// they were built from and must not outlive them.
struct EventView {
  std::size_t start_idx = 0, end_idx = 0;
  double sample_rate_hz = 0;
  std::span<const double> pos_h, pos_v, pos_r;
  std::span<const double> vel_h, vel_v, vel_r;
  std::span<const double> acc_h, acc_v, acc_r;

  std::size_t size() const { return pos_h.size(); }
  double duration_ms() const {
    return static_cast<double>(end_idx - start_idx) * 1000.0 / sample_rate_hz;
  }
  double start_time_ms() const {
    return static_cast<double>(start_idx) * 1000.0 / sample_rate_hz;
  }
  double end_time_ms() const {
    return static_cast<double>(end_idx) * 1000.0 / sample_rate_hz;
  }
};

struct FixationView : EventView {};

struct SaccadeView : EventView {
  // unsmoothed positions; the tail-inconsistency feature is defined on the
  // raw signal
  std::span<const double> raw_h, raw_v;
};

struct PsoView : EventView {
  SaccadeView parent;
};

// Build views for the segments of one kind. Events touching a missing
// sample are skipped. build_pso_views pairs each oscillation with its
// parent saccade and drops orphans whose parent is absent from `segments`.
std::vector<FixationView> build_fixation_views(const KinematicTraces& traces,
                                               const std::vector<EventSegment>& segments);
std::vector<SaccadeView> build_saccade_views(const KinematicTraces& traces,
                                             const std::vector<EventSegment>& segments);
std::vector<PsoView> build_pso_views(const KinematicTraces& traces,
                                     const std::vector<EventSegment>& segments);

}  // namespace gaze

#endif
