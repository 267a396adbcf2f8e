#include "latdef/presets.hpp"

namespace latdef {

namespace {

FieldSpec base() {
  FieldSpec spec;
  spec.region.outer = {{-3.0, -3.0}, {3.0, 3.0}};
  spec.region.punctures.push_back({{0.0, 0.0}, 0.5});
  spec.w2.push_back(MeromorphicTerm::identity());
  return spec;
}

FieldSpec with_charge(GaussianInt a, GaussianInt b, Complex c) {
  FieldSpec spec = base();
  DefectCharge q;
  q.a = a;
  q.b = b;
  q.c = c;
  spec.charges.push_back(q);
  return spec;
}

}  // namespace

std::optional<FieldSpec> preset(std::string_view name) {
  if (name == "edge") return with_charge({1, 0}, {0, 0}, {1.0, 0.0});
  if (name == "quarter-turn") return with_charge({0, 1}, {0, 0}, {});
  if (name == "hyperbolic") return with_charge({1, 1}, {1, 0}, {});
  if (name == "identity") {
    FieldSpec spec = base();
    spec.region.punctures.clear();
    return spec;
  }
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"edge", "quarter-turn", "hyperbolic", "identity"};
  return names;
}

Rect preset_patch() { return {{1.0, -0.5}, {2.0, 0.5}}; }

}  // namespace latdef
