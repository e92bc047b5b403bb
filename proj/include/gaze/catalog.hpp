#ifndef GAZE_CATALOG_HPP
#define GAZE_CATALOG_HPP

#include <string>
#include <string_view>
#include <vector>

namespace gaze {

enum class Family { F, S, P };
enum class Subtype { None, MN, MD, SD, IQ, SK, KU };
enum class Component { None, H, V, R, D2 };

// One scalar slot of the feature vector, e.g. "F05.SD.H" or "S41.R".
// Distributional categories expand into the six subtypes; components appear
// only where the category is defined per component (H/V, H/V/R, R, or the
// 2-D trajectory).
struct FeatureDescriptor {
  std::string id;
  Family family;
  std::string base_id;     // e.g. "F05"
  Subtype subtype;
  Component component;
  std::string units;
  bool proportion01;       // values lie in [0,1] by construction
};

// Stable catalog order: base categories F01..F25, S01..S52, P01..P24, each
// expanded subtype-major then component.
const std::vector<FeatureDescriptor>& feature_catalog();

// Index of an id in the catalog, or -1.
int catalog_index(std::string_view id);

// Number of distinct base categories of one family (25 / 52 / 24).
std::size_t base_category_count(Family family);

std::string_view subtype_name(Subtype s);
std::string_view component_name(Component c);

}  // namespace gaze

#endif
