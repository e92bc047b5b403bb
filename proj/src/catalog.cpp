#include "gaze/catalog.hpp"

#include <set>
#include <unordered_map>

namespace gaze {

std::string_view subtype_name(Subtype s) {
  switch (s) {
    case Subtype::MN: return "MN";
    case Subtype::MD: return "MD";
    case Subtype::SD: return "SD";
    case Subtype::IQ: return "IQ";
    case Subtype::SK: return "SK";
    case Subtype::KU: return "KU";
    default: return "";
  }
}

std::string_view component_name(Component c) {
  switch (c) {
    case Component::H: return "H";
    case Component::V: return "V";
    case Component::R: return "R";
    case Component::D2: return "2D";
    default: return "";
  }
}

namespace {

constexpr Subtype kSubtypes[6] = {Subtype::MN, Subtype::MD, Subtype::SD,
                                  Subtype::IQ, Subtype::SK, Subtype::KU};

struct Builder {
  std::vector<FeatureDescriptor> out;

  void add(Family fam, const std::string& base, const std::string& units, bool distributional,
           std::vector<Component> comps, bool proportion01 = false) {
    if (comps.empty()) comps.push_back(Component::None);
    if (!distributional) {
      for (Component c : comps) emit(fam, base, Subtype::None, c, units, proportion01);
      return;
    }
    for (Subtype s : kSubtypes) {
      // SK/KU of a proportion-valued series are not themselves proportions
      const bool prop = proportion01 && s != Subtype::SK && s != Subtype::KU;
      for (Component c : comps) emit(fam, base, s, c, units, prop);
    }
  }

  void emit(Family fam, const std::string& base, Subtype s, Component c,
            const std::string& units, bool prop) {
    FeatureDescriptor d;
    d.family = fam;
    d.base_id = base;
    d.subtype = s;
    d.component = c;
    d.units = units;
    d.proportion01 = prop;
    d.id = base;
    if (s != Subtype::None) d.id += "." + std::string(subtype_name(s));
    if (c != Component::None) d.id += "." + std::string(component_name(c));
    out.push_back(std::move(d));
  }
};

std::vector<FeatureDescriptor> build_catalog() {
  Builder b;
  const std::vector<Component> HV = {Component::H, Component::V};
  const std::vector<Component> HVR = {Component::H, Component::V, Component::R};
  const std::vector<Component> R = {Component::R};
  const std::vector<Component> D2 = {Component::D2};
  const std::vector<Component> NONE = {};

  // fixations
  b.add(Family::F, "F01", "1/s", false, NONE);
  b.add(Family::F, "F02", "ms", true, NONE);
  b.add(Family::F, "F03", "deg", true, HV);
  b.add(Family::F, "F04", "deg", true, HVR);
  b.add(Family::F, "F05", "deg", true, HVR);
  b.add(Family::F, "F06", "deg/s", true, HVR);
  b.add(Family::F, "F07", "deg/s", true, HV);
  b.add(Family::F, "F08", "", true, HV, true);
  b.add(Family::F, "F09", "", true, HV, true);
  b.add(Family::F, "F10", "%", false, HV);
  b.add(Family::F, "F11", "%", false, HV);
  b.add(Family::F, "F12", "%", false, HV);
  b.add(Family::F, "F13", "%", false, HV);
  b.add(Family::F, "F14", "deg/s", true, HVR);
  b.add(Family::F, "F15", "deg/s", true, HVR);
  b.add(Family::F, "F16", "deg/s", true, HVR);
  b.add(Family::F, "F17", "", true, HVR);
  b.add(Family::F, "F18", "", true, HVR);
  b.add(Family::F, "F19", "%", true, R);
  b.add(Family::F, "F20", "%", true, R);
  b.add(Family::F, "F21", "deg/s^2", true, HVR);
  b.add(Family::F, "F22", "deg/s^2", true, HVR);
  b.add(Family::F, "F23", "deg/s^2", true, HVR);
  b.add(Family::F, "F24", "", true, HVR);
  b.add(Family::F, "F25", "", true, HVR);

  // saccades
  b.add(Family::S, "S01", "1/s", false, NONE);
  b.add(Family::S, "S02", "ms", true, NONE);
  b.add(Family::S, "S03", "deg", true, HVR);
  b.add(Family::S, "S04", "deg", true, R);
  b.add(Family::S, "S05", "", true, R, true);
  b.add(Family::S, "S06", "", true, R, true);
  b.add(Family::S, "S07", "%", true, D2);
  b.add(Family::S, "S08", "deg", true, D2);
  b.add(Family::S, "S09", "deg", true, D2);
  b.add(Family::S, "S10", "deg", true, D2);
  b.add(Family::S, "S11", "%", true, D2);
  b.add(Family::S, "S12", "deg^2", true, D2);
  b.add(Family::S, "S13", "deg", true, D2);
  b.add(Family::S, "S14", "deg", true, D2);
  b.add(Family::S, "S15", "%", true, D2);
  b.add(Family::S, "S16", "deg", true, D2);
  b.add(Family::S, "S17", "%", true, D2);
  b.add(Family::S, "S18", "deg", true, D2);
  b.add(Family::S, "S19", "%", true, D2);
  b.add(Family::S, "S20", "", true, R);
  b.add(Family::S, "S21", "deg/s", true, HVR);
  b.add(Family::S, "S22", "deg/s", true, HVR);
  b.add(Family::S, "S23", "deg/s", true, HVR);
  b.add(Family::S, "S24", "deg/s", true, HVR);
  b.add(Family::S, "S25", "", true, HVR);
  b.add(Family::S, "S26", "", true, HVR);
  b.add(Family::S, "S27", "deg/s^2", true, HVR);
  b.add(Family::S, "S28", "deg/s^2", true, HVR);
  b.add(Family::S, "S29", "deg/s^2", true, HVR);
  b.add(Family::S, "S30", "deg/s^2", true, HVR);
  b.add(Family::S, "S31", "deg/s^2", true, HVR);
  b.add(Family::S, "S32", "", true, HVR);
  b.add(Family::S, "S33", "", true, HVR);
  b.add(Family::S, "S34", "deg/s", true, HVR);
  b.add(Family::S, "S35", "1/s", true, HVR);
  b.add(Family::S, "S36", "deg/s^2", true, HVR);
  b.add(Family::S, "S37", "", true, HVR);
  b.add(Family::S, "S38", "", true, R);
  b.add(Family::S, "S39", "", true, NONE);
  b.add(Family::S, "S40", "", true, HVR);
  b.add(Family::S, "S41", "deg", false, R);
  b.add(Family::S, "S42", "deg/ms", false, R);
  b.add(Family::S, "S43", "", false, R, true);
  b.add(Family::S, "S44", "", false, R);
  b.add(Family::S, "S45", "", false, R);
  b.add(Family::S, "S46", "", false, R, true);
  b.add(Family::S, "S47", "1/s", false, NONE);
  b.add(Family::S, "S48", "1/s", false, NONE);
  b.add(Family::S, "S49", "1/s", false, NONE);
  b.add(Family::S, "S50", "1/s", false, NONE);
  b.add(Family::S, "S51", "", false, NONE);
  b.add(Family::S, "S52", "", false, NONE);

  // post-saccadic oscillations
  b.add(Family::P, "P01", "ms", true, NONE);
  b.add(Family::P, "P02", "ms", true, NONE);
  b.add(Family::P, "P03", "%", false, NONE);
  b.add(Family::P, "P04", "%", false, NONE);
  b.add(Family::P, "P05", "%", false, NONE);
  b.add(Family::P, "P06", "%", false, NONE);
  b.add(Family::P, "P07", "deg", true, HVR);
  b.add(Family::P, "P08", "", true, HVR);
  b.add(Family::P, "P09", "", true, HVR);
  b.add(Family::P, "P10", "deg/s", true, HVR);
  b.add(Family::P, "P11", "deg/s", true, HVR);
  b.add(Family::P, "P12", "deg/s", true, HVR);
  b.add(Family::P, "P13", "deg/s", true, HVR);
  b.add(Family::P, "P14", "", true, HVR);
  b.add(Family::P, "P15", "", true, HVR);
  b.add(Family::P, "P16", "deg/s^2", true, HVR);
  b.add(Family::P, "P17", "deg/s^2", true, HVR);
  b.add(Family::P, "P18", "deg/s^2", true, HVR);
  b.add(Family::P, "P19", "", true, HVR);
  b.add(Family::P, "P20", "", true, HVR);
  b.add(Family::P, "P21", "", true, NONE);
  b.add(Family::P, "P22", "deg/s", true, HVR);
  b.add(Family::P, "P23", "", true, HVR);
  b.add(Family::P, "P24", "", true, HVR);

  return std::move(b.out);
}

}  // namespace

const std::vector<FeatureDescriptor>& feature_catalog() {
  static const std::vector<FeatureDescriptor> catalog = build_catalog();
  return catalog;
}

int catalog_index(std::string_view id) {
  static const std::unordered_map<std::string_view, int> index = [] {
    std::unordered_map<std::string_view, int> m;
    const auto& cat = feature_catalog();
    for (int i = 0; i < static_cast<int>(cat.size()); ++i) m.emplace(cat[i].id, i);
    return m;
  }();
  const auto it = index.find(id);
  return it == index.end() ? -1 : it->second;
}

std::size_t base_category_count(Family family) {
  std::set<std::string> bases;
  for (const auto& d : feature_catalog())
    if (d.family == family) bases.insert(d.base_id);
  return bases.size();
}

}  // namespace gaze
