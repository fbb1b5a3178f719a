#pragma once

#include <string>
#include <vector>

#include "bem_annulus/field.hpp"

namespace bem::svg {

// Cell-per-node heatmap of a field grid; nodes without a value are drawn
// as light grey so the hole and the exterior stay visibly masked.
std::string heatmap(const FieldGrid& grid, const std::string& title);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Log-log line plot; non-positive values are skipped.
std::string loglog_plot(const std::vector<Series>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

}  // namespace bem::svg
