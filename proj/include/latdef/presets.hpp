#pragma once

// Built-in demo configurations on the box [-3,3]^2 with one hole of radius
// 0.5 at the origin and background w2 = z.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latdef/defect_field.hpp"

namespace latdef {

// "edge" (a=1, c=1), "quarter-turn" (a=i), "hyperbolic" (a=1+i, b=1) and
// "identity" (no charge, w = z).
std::optional<FieldSpec> preset(std::string_view name);
const std::vector<std::string>& preset_names();

// Patch of the preset box clear of the hole and of the cut ray.
Rect preset_patch();

}  // namespace latdef
