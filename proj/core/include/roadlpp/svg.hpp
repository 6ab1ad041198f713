#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadlpp/lpp.hpp"

namespace roadlpp::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band_low;   // optional, same length as x when present
  std::vector<double> band_high;
};

struct PlotStyle {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

struct PlotResult {
  std::string svg;
  std::int64_t dropped_points = 0;  // nonpositive values dropped under log axes
};

/// Standalone SVG line plot with axes, optional log scales and CI band
/// shading. Throws DomainError when no drawable data remains.
PlotResult plot_svg(std::span<const Series> series, const PlotStyle& style);

struct GeodesicFigureStyle {
  int width = 900;
  int height = 640;
  double stroke_scale = 1.0;  // stroke width is stroke_scale * log(1 + usage)
};

/// Geodesic bundle drawn in rotated coordinates (psi horizontal, phi
/// vertical), edges weighted by how many of the paths share them.
std::string geodesic_figure(std::span<const lpp::GeodesicPath> paths,
                            const GeodesicFigureStyle& style = {});

}  // namespace roadlpp::svg
