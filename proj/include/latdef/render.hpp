#pragma once

// SVG picture of a configuration on its principal sheet: level curves of
// Re w and Im w, the holes, the cut rays and any degenerate points.

#include <optional>
#include <string>
#include <vector>

#include "latdef/defect_field.hpp"

namespace latdef {

struct RenderOptions {
  int resolution = 240;                       // cells along the longer box side, >= 8
  std::optional<std::vector<double>> levels;  // default: every integer in range
  double stroke_width = 1.0;
  double cut_stroke_width = 1.5;
  bool show_cut = true;
  std::optional<Rect> window;  // defaults to the outer box
  std::string out;             // output path, used by the CLI only
};

// Throws InputError for a bad resolution, window or level set.
void validate_render_options(const RenderOptions& options);

struct RenderResult {
  std::string svg;
  std::size_t curves = 0;      // polylines over both families
  std::size_t endpoints = 0;   // open polyline ends strictly inside the window
  std::size_t degenerate = 0;  // nodes failing the immersion check
};

RenderResult render_svg(const FieldSpec& spec, const RenderOptions& options);

}  // namespace latdef
