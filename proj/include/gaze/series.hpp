#ifndef GAZE_SERIES_HPP
#define GAZE_SERIES_HPP

#include <vector>

namespace gaze {

// Per-event value series, one entry per classified event (missing entries
// are NaN). These are the inputs the distributional subtype expansion runs
// over.
struct SeriesHV {
  std::vector<double> h, v;
};

struct SeriesHVR {
  std::vector<double> h, v, r;
};

}  // namespace gaze

#endif
