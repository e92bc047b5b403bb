#ifndef GAZE_MISSING_HPP
#define GAZE_MISSING_HPP

#include <cmath>
#include <limits>

namespace gaze {

// Missing values travel through the pipeline as quiet NaN and are written
// out as the literal "NA".
inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }

inline bool is_missing(double v) { return std::isnan(v); }

}  // namespace gaze

#endif
