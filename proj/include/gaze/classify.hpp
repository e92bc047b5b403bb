#ifndef GAZE_CLASSIFY_HPP
#define GAZE_CLASSIFY_HPP

#include <optional>
#include <vector>

#include "gaze/signal.hpp"

namespace gaze {

enum class EventKind { Fixation, Saccade, Pso };

// One classified event; indices are inclusive. A post-saccadic oscillation
// always starts at its parent saccade's end_idx + 1; parent_start identifies
// the parent by its start index.
struct EventSegment {
  EventKind kind;
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  std::optional<std::size_t> parent_start;

  std::size_t length() const { return end_idx - start_idx + 1; }
};

struct ClassifierConfig {
  // Adaptive peak threshold: iterated as mean + 6*sd of the radial velocity
  // below the current threshold until it moves by less than 1 deg/s. The
  // floor keeps oscillation peaks (< ~55 deg/s) below the saccade threshold
  // on very clean signals. Defaults are tuned for reading-like signals at
  // 1000 Hz, not taken from any reference dataset.
  double peak_threshold_init_deg_s = 100.0;
  double peak_threshold_floor_deg_s = 70.0;
  // onset/offset threshold = mean + factor*sd of the local noise velocity,
  // floored: below ~5 deg/s the smoothing spread dominates the boundary
  double saccade_onset_offset_factor = 3.0;
  double onset_offset_floor_deg_s = 5.0;
  double min_fixation_ms = 40.0;
  double min_saccade_ms = 10.0;
  double max_pso_ms = 40.0;
  // speed-category bounds: slow [slow_lo, slow_hi), moderate [slow_hi,
  // mod_hi), fast >= mod_hi; below slow_lo counts in no category
  double pso_slow_lo_deg_s = 20.0;
  double pso_slow_hi_deg_s = 45.0;
  double pso_mod_hi_deg_s = 55.0;
  // keep oscillations whose peak velocity is below slow_lo as events
  bool drop_subthreshold_psos = false;
};

enum class PsoSpeedCategory { SubThreshold, Slow, Moderate, Fast };

// Speed category of an oscillation from its peak radial velocity.
// Throws on negative input.
PsoSpeedCategory categorize_pso(double peak_vel_r_deg_s, const ClassifierConfig& cfg);

// Velocity-threshold segmentation into fixations, saccades and
// post-saccadic oscillations. Deterministic; saccade/PSO segments never
// overlap a missing-data span. Returns events in time order. Throws when
// no sample lies below the initial peak threshold (the threshold cannot
// adapt); returns an empty segmentation when the traces are shorter than
// the minimum event durations.
std::vector<EventSegment> classify(const KinematicTraces& traces,
                                   const ClassifierConfig& cfg = {});

// Saccades with duration > max_duration_ms or radial amplitude >
// max_amplitude_deg move (with their oscillations) to `large`; only the
// reading-behavior rates look at that set.
struct PostFilterResult {
  std::vector<EventSegment> kept;
  std::vector<EventSegment> large;
};

PostFilterResult post_filter(const std::vector<EventSegment>& segments,
                             const KinematicTraces& traces,
                             double max_duration_ms = 70.0,
                             double max_amplitude_deg = 8.0);

// Radial amplitude of a segment: Euclidean norm of the start-to-end
// displacement of the smoothed position trace.
double radial_amplitude(const EventSegment& seg, const KinematicTraces& traces);

// Duration convention shared by every event family: (end - start) / rate.
inline double segment_duration_ms(const EventSegment& seg, double rate_hz) {
  return static_cast<double>(seg.end_idx - seg.start_idx) * 1000.0 / rate_hz;
}

}  // namespace gaze

#endif
