#pragma once

#include <string>
#include <vector>

#include "phosphene/data.hpp"

namespace phosphene {

struct NamedCurve {
  std::string name;
  TimeCourse curve;
};

// `time_s,brightness` rows.
std::string curve_csv(const TimeCourse& curve);

// The trial in the dataset CSV layout, so load_dataset reads it back.
std::string observed_csv(const Trial& trial);

// Minimal overlay: axes, the observed trace, one polyline per model curve and
// a gray bar over the stimulus window.
std::string overlay_svg(const Trial& trial, const std::vector<NamedCurve>& models);

}  // namespace phosphene
