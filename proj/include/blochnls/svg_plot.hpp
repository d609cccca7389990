// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blochnls/band_checks.hpp"
#include "blochnls/convergence.hpp"
#include "blochnls/townes.hpp"

namespace blochnls
{

struct PlotSeries
{
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  std::string color = "#1f77b4";
  bool markers = false;
  bool dashed = false;
};

struct PlotOptions
{
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
  // Replaces the automatic x ticks when non-empty (band diagram corners).
  std::vector<std::pair<double, std::string>> x_ticks;
  std::vector<std::string> notes;  // printed top-left inside the frame
};

// Static, self-contained SVG document.
std::string render_svg(const PlotOptions &options, const std::vector<PlotSeries> &series);

std::string slope_annotation(const SlopeFit &fit);

std::string convergence_svg(const ConvergenceReport &report);
std::string band_svg(const BandTable &table);
std::string profile_svg(const RadialProfile &profile, double r_show);

/// |u| along one coordinate line at several times.
struct SliceSet
{
  std::string axis_label;
  std::vector<double> times;
  std::vector<std::vector<double>> coordinates;
  std::vector<std::vector<double>> values;
};

std::string slices_svg(const SliceSet &slices, const std::string &title);

}  // namespace blochnls
