#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "latdef/coframe.hpp"
#include "latdef/defect_field.hpp"
#include "latdef/geometry.hpp"
#include "latdef/holonomy.hpp"
#include "latdef/io.hpp"
#include "latdef/lattice_space.hpp"
#include "latdef/presets.hpp"
#include "latdef/region.hpp"
#include "latdef/render.hpp"

namespace latdef::cli {

namespace {

using io::Json;

struct Options {
  std::string spec_file;
  std::string preset_name;
  std::string coframe_file;
  std::string loop_file;
  std::string circle;
  std::string window;
  std::string out_file;
  std::string frame;
  std::string frame2;
  std::string gamma;
  std::string levels;
  std::string lattice_op;
  double h = 0.0;
  int grid = 0;
  int samples = 256;
  int refine = 0;
  int resolution = 240;
  double stroke = 1.0;
  bool no_cut = false;
  bool list = false;
  std::optional<double> tol;
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const double x = std::stod(cell, &used);
      if (used != cell.size() || !std::isfinite(x)) throw std::invalid_argument(cell);
      v.push_back(x);
    } catch (const std::exception&) {
      throw InputError(what + ": bad number \"" + cell + "\"");
    }
  }
  if (expected != 0 && v.size() != expected)
    throw InputError(what + ": expected " + std::to_string(expected) + " comma-separated numbers");
  return v;
}

Rect parse_window(const std::string& text) {
  const auto v = parse_numbers(text, 4, "--window");
  if (!(v[2] > v[0]) || !(v[3] > v[1])) throw InputError("--window: need xmin < xmax and ymin < ymax");
  return {{v[0], v[1]}, {v[2], v[3]}};
}

// Raw spec, before validation.
FieldSpec load_spec_unchecked(const Options& o) {
  if (!o.preset_name.empty() && !o.spec_file.empty()) throw InputError("give either --spec or --preset");
  if (!o.preset_name.empty()) {
    auto spec = preset(o.preset_name);
    if (!spec) throw InputError("unknown preset \"" + o.preset_name + "\"");
    return *spec;
  }
  if (o.spec_file.empty()) throw InputError("--spec FILE or --preset NAME is required");
  return io::spec_from_json(io::read_json_file(o.spec_file));
}

FieldSpec load_spec(const Options& o) {
  FieldSpec spec = load_spec_unchecked(o);
  const auto issues = validate_spec(spec);
  if (!issues.empty()) throw InputError("invalid spec: " + issues.front().message);
  return spec;
}

double grid_spacing(const Options& o, const Region& region, double fallback) {
  if (o.h > 0.0 && o.grid > 0) throw InputError("give either --h or --grid");
  if (o.grid > 0) return region.scale() / o.grid;
  if (o.h < 0.0 || (o.h == 0.0 && fallback <= 0.0)) throw InputError("--h must be positive");
  return o.h > 0.0 ? o.h : fallback;
}

// Writes to --out when given, else to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_file, std::ios::binary);
  if (!f) throw InputError("cannot write " + o.out_file);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json grid_json(const GridGeometry& g) {
  return Json{{"origin", Json::array({g.origin.x, g.origin.y})}, {"h", g.h}, {"nx", g.nx}, {"ny", g.ny}};
}

// Same field with every node outside `window` marked invalid.
CoframeField restrict_to(const CoframeField& field, const Rect& window) {
  const GridGeometry& g = field.grid();
  std::vector<std::uint8_t> valid = field.valid_mask();
  const double slack = 1e-9 * g.h;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Vec2 p = g.point(idx);
    if (p.x < window.min.x - slack || p.x > window.max.x + slack || p.y < window.min.y - slack ||
        p.y > window.max.y + slack)
      valid[idx] = 0;
  }
  return CoframeField(g, field.thetas(), std::move(valid), field.cut_mask());
}

// ---- commands -------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const FieldSpec spec = load_spec_unchecked(o);
  Json checks = Json::array();
  bool all = true;
  const auto region_issues = validate_region(spec.region);
  const auto spec_issues = validate_spec(spec);
  auto add = [&](const std::string& name, const std::vector<Issue>& issues) {
    Json messages = Json::array();
    for (const auto& i : issues) messages.push_back(i.message);
    checks.push_back(Json{{"check", name}, {"passed", issues.empty()}, {"messages", messages}});
    all = all && issues.empty();
  };
  add("region", region_issues);
  for (std::size_t i = 0; i < spec.charges.size(); ++i)
    add("charge[" + std::to_string(i) + "]", validate_charge(spec.charges[i]));
  std::vector<Issue> placement;
  for (const auto& issue : spec_issues)
    if (issue.kind == IssueKind::charge_placement || issue.kind == IssueKind::pole_placement)
      placement.push_back(issue);
  add("placement", placement);
  all = all && spec_issues.empty();
  emit(o, out, dump(Json{{"valid", all}, {"checks", checks}}));
  return all ? kOk : kFalse;
}

int cmd_field(const Options& o, std::ostream& out) {
  const FieldSpec spec = load_spec(o);
  const double h = grid_spacing(o, spec.region, spec.region.scale() / 60.0);
  const SampledGrid grid = sample_grid(spec.region, h);
  std::ostringstream csv;
  io::write_field_csv(csv, spec, grid);
  emit(o, out, csv.str());
  return kOk;
}

int cmd_holonomy(const Options& o, std::ostream& out) {
  const FieldSpec spec = load_spec(o);
  Json description;
  Loop loop;
  if (!o.loop_file.empty() && !o.circle.empty()) throw InputError("give either --loop or --circle");
  if (!o.loop_file.empty()) {
    description = io::read_json_file(o.loop_file);
    loop = io::loop_from_json(description);
  } else if (!o.circle.empty()) {
    const auto v = parse_numbers(o.circle, 4, "--circle");
    if (v[3] != std::round(v[3]) || v[3] == 0.0 || std::abs(v[3]) > 1000)
      throw InputError("--circle: turns must be a non-zero integer");
    if (!(v[2] > 0.0)) throw InputError("--circle: radius must be positive");
    if (o.samples < 3) throw InputError("--samples must be at least 3");
    const int turns = static_cast<int>(v[3]);
    loop = make_circle_loop({v[0], v[1]}, v[2], turns, o.samples);
    description = Json{{"circle", Json{{"center", Json::array({v[0], v[1]})},
                                       {"radius", v[2]},
                                       {"turns", turns},
                                       {"samples", o.samples}}}};
  } else {
    throw InputError("--loop FILE or --circle cx,cy,r,turns is required");
  }
  if (o.refine < 0 || o.refine > 12) throw InputError("--refine must be in 0..12");
  for (int k = 0; k < o.refine; ++k) loop = refined(loop);
  if (o.refine > 0) description["refine"] = o.refine;

  const HolonomyVerification v = verify_g_equals_h(spec, loop, o.tol.value_or(1e-8));
  emit(o, out, dump(io::holonomy_report(description, v)));
  return v.verified ? kOk : kFalse;
}

Json check_field(const CoframeField& field, const Options& o) {
  const TorsionField t = torsion(field);
  const CompatibilityReport compat = is_compatible(field, o.tol);
  const Connection tele = teleparallel_connection(field);
  const Connection lc = riemann_cartan_connection(field);
  const ConnectionComparison gap = connections_coincide(tele, lc, o.tol);
  return Json{{"grid", grid_json(field.grid())},
              {"torsion", io::to_json(t)},
              {"compatibility", io::to_json(compat)},
              {"connections", io::to_json(gap)},
              {"curvature_residual", Json{{"teleparallel", curvature_residual(tele)},
                                          {"levi_civita", curvature_residual(lc)}}},
              {"verdict", Json{{"compatible", compat.compatible}, {"connections_coincide", gap.coincide}}}};
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::optional<Rect> window = o.window.empty() ? std::nullopt : std::optional<Rect>(parse_window(o.window));
  if (o.refine < 0 || o.refine > 6) throw InputError("--refine must be in 0..6");
  Json report;
  if (!o.coframe_file.empty()) {
    if (!o.spec_file.empty() || !o.preset_name.empty()) throw InputError("give either --coframe or a spec");
    if (o.refine > 0) throw InputError("--refine needs a spec; a coframe file has a fixed grid");
    CoframeField field = io::read_coframe_csv_file(o.coframe_file);
    if (window) field = restrict_to(field, *window);
    report = check_field(field, o);
    report["input"] = Json{{"coframe", o.coframe_file}};
  } else {
    const FieldSpec spec = load_spec(o);
    const double h = grid_spacing(o, spec.region, spec.region.scale() / 120.0);
    auto make = [&](double spacing) {
      CoframeField field = coframe_from_spec(spec, sample_grid(spec.region, spacing));
      return window ? restrict_to(field, *window) : field;
    };
    report = check_field(make(h), o);
    report["input"] = o.preset_name.empty() ? Json{{"spec", o.spec_file}} : Json{{"preset", o.preset_name}};
    if (o.refine > 0) report["convergence"] = io::to_json(convergence_study(make, h, o.refine + 1, window));
  }
  if (window)
    report["window"] = Json::array({window->min.x, window->min.y, window->max.x, window->max.y});
  const bool ok = report["verdict"]["compatible"].get<bool>() &&
                  report["verdict"]["connections_coincide"].get<bool>();
  emit(o, out, dump(report));
  return ok ? kOk : kFalse;
}

Json parse_inline_or_file(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') return io::parse_json(text);
  return io::read_json_file(text);
}

int cmd_lattice(const Options& o, std::ostream& out) {
  if (o.frame.empty()) throw InputError("--frame JSON|FILE is required");
  const AffineFrame r = io::frame_from_json(parse_inline_or_file(o.frame));
  const double tol = o.tol.value_or(kDefaultIntegerTol);
  if (o.lattice_op == "reduce") {
    const ReducedBasis rb = reduce_basis(r, tol);
    Json j = io::to_json(rb);
    j["class"] = std::string(to_string(classify(r, tol).lattice_class));
    emit(o, out, dump(j));
    return kOk;
  }
  if (o.lattice_op == "classify") {
    const Classification c = classify(r, tol);
    emit(o, out, dump(Json{{"class", std::string(to_string(c.lattice_class))},
                           {"centered_rectangular", c.centered_rectangular},
                           {"condition_number", r.condition_number()}}));
    return kOk;
  }
  if (o.lattice_op == "equiv") {
    if (o.frame2.empty() == o.gamma.empty()) throw InputError("equiv needs exactly one of --frame2 or --gamma");
    const AffineFrame r2 = o.frame2.empty() ? gamma_apply(io::gamma_from_json(parse_inline_or_file(o.gamma)), r)
                                            : io::frame_from_json(parse_inline_or_file(o.frame2));
    const auto witness = frames_equivalent(r, r2, tol);
    Json j{{"equivalent", witness.has_value()}, {"witness", witness ? io::to_json(*witness) : Json(nullptr)}};
    if (!o.gamma.empty()) j["frame2"] = io::to_json(r2);
    emit(o, out, dump(j));
    return witness ? kOk : kFalse;
  }
  throw InputError("lattice operation must be reduce, classify or equiv");
}

int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  const FieldSpec spec = load_spec(o);
  RenderOptions ro;
  ro.resolution = o.grid > 0 ? o.grid : o.resolution;
  ro.stroke_width = o.stroke;
  ro.show_cut = !o.no_cut;
  ro.out = o.out_file;
  if (!o.levels.empty()) ro.levels = parse_numbers(o.levels, 0, "--levels");
  if (!o.window.empty()) ro.window = parse_window(o.window);
  const RenderResult r = render_svg(spec, ro);
  if (r.degenerate > 0)
    err << "warning: " << r.degenerate << " render nodes fail the immersion check; see the warning layer\n";
  emit(o, out, r.svg);
  return kOk;
}

int cmd_preset(const Options& o, std::ostream& out) {
  if (o.list || o.preset_name.empty()) {
    for (const auto& n : preset_names()) out << n << '\n';
    return kOk;
  }
  const auto spec = preset(o.preset_name);
  if (!spec) throw InputError("unknown preset \"" + o.preset_name + "\"");
  emit(o, out, dump(io::to_json(*spec)));
  return kOk;
}

void add_spec_flags(CLI::App* c, Options& o) {
  c->add_option("--spec", o.spec_file, "Field spec JSON file");
  c->add_option("--preset", o.preset_name, "Built-in configuration");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice defects: multivalued configurations, holonomy and compatibility checks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto* validate = app.add_subcommand("validate", "Check a spec and list each check");
  add_spec_flags(validate, o);
  validate->add_option("--out", o.out_file);
  validate->callback([&] { action = [&] { return cmd_validate(o, out); }; });

  auto* field = app.add_subcommand("field", "Sample w and its Jacobian on the principal sheet (CSV)");
  add_spec_flags(field, o);
  field->add_option("--h", o.h, "Grid spacing");
  field->add_option("--grid", o.grid, "Cells along the longer box side");
  field->add_option("--out", o.out_file);
  field->callback([&] { action = [&] { return cmd_field(o, out); }; });

  auto* holonomy = app.add_subcommand("holonomy", "Continue along a loop and compare with the closed form");
  add_spec_flags(holonomy, o);
  holonomy->add_option("--loop", o.loop_file, "Loop JSON file");
  holonomy->add_option("--circle", o.circle, "cx,cy,r,turns");
  holonomy->add_option("--samples", o.samples, "Vertices per turn for --circle");
  holonomy->add_option("--refine", o.refine, "Midpoint refinements of the loop");
  holonomy->add_option("--tol", o.tol, "Residual tolerance");
  holonomy->add_option("--out", o.out_file);
  holonomy->callback([&] { action = [&] { return cmd_holonomy(o, out); }; });

  auto* check = app.add_subcommand("check", "Torsion and connection comparison of a coframe field");
  add_spec_flags(check, o);
  check->add_option("--coframe", o.coframe_file, "Coframe CSV file");
  check->add_option("--h", o.h, "Grid spacing");
  check->add_option("--grid", o.grid, "Cells along the longer box side");
  check->add_option("--window", o.window, "xmin,ymin,xmax,ymax");
  check->add_option("--tol", o.tol, "Relative tolerance (default 10 h^2)");
  check->add_option("--refine", o.refine, "Extra halvings of h for a convergence table");
  check->add_option("--out", o.out_file);
  check->callback([&] { action = [&] { return cmd_check(o, out); }; });

  auto* lattice = app.add_subcommand("lattice", "Frame reduction, classification and equivalence");
  lattice->add_option("op", o.lattice_op, "reduce | classify | equiv")->required();
  lattice->add_option("--frame", o.frame, "Frame JSON or file");
  lattice->add_option("--frame2", o.frame2, "Second frame JSON or file");
  lattice->add_option("--gamma", o.gamma, "Gamma element JSON or file applied to --frame");
  lattice->add_option("--tol", o.tol);
  lattice->add_option("--out", o.out_file);
  lattice->callback([&] { action = [&] { return cmd_lattice(o, out); }; });

  auto* render = app.add_subcommand("render", "SVG of the level curves of Re w and Im w");
  add_spec_flags(render, o);
  render->add_option("--grid,--resolution", o.resolution, "Cells along the longer side");
  render->add_option("--levels", o.levels, "Comma-separated contour levels");
  render->add_option("--stroke", o.stroke, "Stroke width");
  render->add_option("--window", o.window, "xmin,ymin,xmax,ymax");
  render->add_flag("--no-cut", o.no_cut, "Hide the cut rays");
  render->add_option("--out", o.out_file);
  render->callback([&] { action = [&] { return cmd_render(o, out, err); }; });

  auto* presets = app.add_subcommand("preset", "Print a built-in spec, or list them");
  presets->add_option("name", o.preset_name);
  presets->add_flag("--list", o.list);
  presets->add_option("--out", o.out_file);
  presets->callback([&] { action = [&] { return cmd_preset(o, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return action();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace latdef::cli
