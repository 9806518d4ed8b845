#pragma once

#include <map>
#include <string>

#include "gaborface/nmds.hpp"

namespace gaborface {

struct ScatterStyle {
  int canvas = 480;
  int margin = 40;
  std::string title;
};

/// SVG scatter of a two-dimensional configuration: one labelled marker per
/// item, equal scale on both axes. Items missing from `labels` are labelled
/// by their id. Throws ValidationError unless d == 2.
std::string render_scatter(const Configuration& config, const std::map<std::string, std::string>& labels,
                           const ScatterStyle& style = {});

}  // namespace gaborface
