#include "latdef/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace latdef::io {

namespace {

Json vec(const Vec2& v) { return Json::array({v.x, v.y}); }
Json vec(const IVec2& v) { return Json::array({v.x, v.y}); }
Json cplx(const Complex& z) { return Json::array({z.real(), z.imag()}); }
Json cplx(const GaussianInt& z) { return Json::array({z.re, z.im}); }

Json mat(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}
Json mat(const IMat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double real(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "non-finite number");
  return v;
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::round(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
  }
  fail(where, "expected an integer");
}

const Json& pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a two-element array");
  return j;
}

Vec2 read_vec(const Json& j, const std::string& where) {
  pair(j, where);
  return {real(j[0], where), real(j[1], where)};
}

Complex read_complex(const Json& j, const std::string& where) {
  const Vec2 v = read_vec(j, where);
  return {v.x, v.y};
}

GaussianInt read_gaussian(const Json& j, const std::string& where) {
  pair(j, where);
  return {integer(j[0], where), integer(j[1], where)};
}

Mat2 read_mat(const Json& j, const std::string& where) {
  pair(j, where);
  return Mat2::from_rows(read_vec(j[0], where), read_vec(j[1], where));
}

Rect read_rect(const Json& j, const std::string& where) {
  return {read_vec(field(j, "min", where), where + ".min"), read_vec(field(j, "max", where), where + ".max")};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const AffineFrame& frame) {
  return Json{{"origin", vec(frame.origin())}, {"basis", mat(frame.basis())}};
}

Json to_json(const GammaElement& g) { return Json{{"A", mat(g.A())}, {"b", vec(g.b())}}; }

Json to_json(const Region& region) {
  Json holes = Json::array();
  for (const auto& d : region.punctures) holes.push_back(Json{{"center", vec(d.center)}, {"radius", d.radius}});
  return Json{{"outer", Json{{"min", vec(region.outer.min)}, {"max", vec(region.outer.max)}}},
              {"punctures", holes}};
}

Json to_json(const Loop& loop) {
  Json pts = Json::array();
  for (const auto& p : loop.points) pts.push_back(vec(p));
  return Json{{"points", pts}};
}

Json to_json(const FieldSpec& spec) {
  Json charges = Json::array();
  for (const auto& q : spec.charges)
    charges.push_back(Json{{"center", vec(q.center)}, {"a", cplx(q.a)}, {"b", cplx(q.b)},
                           {"c", cplx(q.c)}, {"d", cplx(q.d)}});
  Json w2 = Json::array();
  for (const auto& t : spec.w2)
    w2.push_back(Json{{"center", vec(t.center)}, {"coeff", cplx(t.coeff)}, {"order", t.order},
                      {"conjugated", t.conjugated}});
  return Json{{"region", to_json(spec.region)}, {"charges", charges}, {"w2", w2}};
}

Json to_json(const CenteredAffine& h) {
  return Json{{"M", mat(h.M)}, {"t", vec(h.t)}, {"center", vec(h.center)}};
}

Json to_json(const ReducedBasis& rb) {
  return Json{{"b1", vec(rb.b1)},       {"b2", vec(rb.b2)},           {"norm1", rb.norm1},
              {"norm2", rb.norm2},      {"inner", rb.inner},          {"transform", mat(rb.transform)},
              {"ambiguous", rb.ambiguous}};
}

Json to_json(const TorsionField& t) {
  return Json{{"max_norm", t.max_norm}, {"evaluated", t.count}};
}

Json to_json(const CompatibilityReport& r) {
  return Json{{"compatible", r.compatible},
              {"max_torsion", r.max_torsion},
              {"derivative_scale", r.derivative_scale},
              {"tol", r.tol},
              {"threshold", r.threshold}};
}

Json to_json(const ConnectionComparison& r) {
  return Json{{"coincide", r.coincide}, {"max_gap", r.max_gap}, {"scale", r.scale},
              {"tol", r.tol},           {"threshold", r.threshold}};
}

Json to_json(const ConvergenceStudy& s) {
  Json levels = Json::array();
  for (const auto& l : s.levels)
    levels.push_back(Json{{"h", l.h}, {"max_torsion", l.max_torsion}, {"max_gap", l.max_gap},
                          {"evaluated", l.evaluated}});
  return Json{{"levels", levels}, {"torsion_ratios", s.torsion_ratios}, {"gap_ratios", s.gap_ratios}};
}

AffineFrame frame_from_json(const Json& j) {
  const Vec2 origin = read_vec(field(j, "origin", "frame"), "frame.origin");
  const Mat2 basis = read_mat(field(j, "basis", "frame"), "frame.basis");
  return AffineFrame(origin, basis);
}

GammaElement gamma_from_json(const Json& j) {
  const Json& a = pair(field(j, "A", "gamma"), "gamma.A");
  IMat2 A;
  for (int r = 0; r < 2; ++r) {
    pair(a[static_cast<std::size_t>(r)], "gamma.A");
    for (int c = 0; c < 2; ++c)
      A.m[r][c] = integer(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], "gamma.A");
  }
  IVec2 b{};
  if (j.contains("b")) {
    const Json& bj = pair(j["b"], "gamma.b");
    b = {integer(bj[0], "gamma.b"), integer(bj[1], "gamma.b")};
  }
  return GammaElement(A, b);
}

Region region_from_json(const Json& j) {
  Region r;
  r.outer = read_rect(field(j, "outer", "region"), "region.outer");
  if (j.contains("punctures")) {
    const Json& holes = j["punctures"];
    if (!holes.is_array()) fail("region.punctures", "expected an array");
    for (std::size_t i = 0; i < holes.size(); ++i) {
      const std::string where = "region.punctures[" + std::to_string(i) + "]";
      r.punctures.push_back({read_vec(field(holes[i], "center", where), where + ".center"),
                             real(field(holes[i], "radius", where), where + ".radius")});
    }
  }
  return r;
}

Loop loop_from_json(const Json& j) {
  if (j.is_object() && j.contains("circle")) {
    const Json& c = j["circle"];
    const Vec2 center = read_vec(field(c, "center", "loop.circle"), "loop.circle.center");
    const double radius = real(field(c, "radius", "loop.circle"), "loop.circle.radius");
    const auto turns = c.contains("turns") ? integer(c["turns"], "loop.circle.turns") : 1;
    const auto samples = c.contains("samples") ? integer(c["samples"], "loop.circle.samples") : 64;
    if (!(radius > 0.0)) fail("loop.circle.radius", "must be positive");
    if (turns == 0 || std::abs(turns) > 1000) fail("loop.circle.turns", "must be a non-zero integer");
    if (samples < 3 || samples > 1000000) fail("loop.circle.samples", "must be at least 3");
    return make_circle_loop(center, radius, static_cast<int>(turns), static_cast<int>(samples));
  }
  const Json& pts = field(j, "points", "loop");
  if (!pts.is_array() || pts.size() < 3) fail("loop.points", "need at least three points");
  Loop loop;
  for (const auto& p : pts) loop.points.push_back(read_vec(p, "loop.points"));
  return loop;
}

FieldSpec spec_from_json(const Json& j) {
  FieldSpec spec;
  spec.region = region_from_json(field(j, "region", "spec"));
  if (j.contains("charges")) {
    const Json& cs = j["charges"];
    if (!cs.is_array()) fail("spec.charges", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string where = "spec.charges[" + std::to_string(i) + "]";
      const Json& c = cs[i];
      DefectCharge q;
      q.center = read_vec(field(c, "center", where), where + ".center");
      q.a = read_gaussian(field(c, "a", where), where + ".a");
      if (c.contains("b")) q.b = read_gaussian(c["b"], where + ".b");
      if (c.contains("c")) q.c = read_complex(c["c"], where + ".c");
      if (c.contains("d")) q.d = read_complex(c["d"], where + ".d");
      spec.charges.push_back(q);
    }
  }
  if (!j.contains("w2")) {
    spec.w2.push_back(MeromorphicTerm::identity());
    return spec;
  }
  const Json& ts = j["w2"];
  if (!ts.is_array()) fail("spec.w2", "expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "spec.w2[" + std::to_string(i) + "]";
    const Json& t = ts[i];
    MeromorphicTerm term;
    if (t.contains("center")) term.center = read_vec(t["center"], where + ".center");
    if (t.contains("coeff")) term.coeff = read_complex(t["coeff"], where + ".coeff");
    if (t.contains("order")) {
      const auto order = integer(t["order"], where + ".order");
      if (std::abs(order) > 64) fail(where + ".order", "out of range");
      term.order = static_cast<int>(order);
    }
    if (t.contains("conjugated")) {
      if (!t["conjugated"].is_boolean()) fail(where + ".conjugated", "expected a boolean");
      term.conjugated = t["conjugated"].get<bool>();
    }
    spec.w2.push_back(term);
  }
  return spec;
}

Json holonomy_report(const Json& loop_description, const HolonomyVerification& v) {
  Json elements = Json::array();
  for (const auto& term : v.predicted.terms) {
    Json e = to_json(term.element);
    e["charge"] = term.charge;
    e["winding"] = term.winding;
    const GammaConversion conv = to_gamma_element(term.element);
    e["standard"] = conv.element ? to_json(*conv.element) : Json(nullptr);
    e["standard_status"] = conv.status;
    elements.push_back(e);
  }
  return Json{{"loop", loop_description},
              {"windings", v.predicted.windings},
              {"elements", elements},
              {"numeric", Json{{"jump_w", cplx(v.numeric.jump_w)},
                               {"jump_J", mat(v.numeric.jump_J)},
                               {"sheet_increments", v.numeric.k}}},
              {"predicted", Json{{"jump_w", cplx(v.predicted.predicted_jump_w)},
                                 {"jump_J", mat(v.predicted.predicted_jump_J)}}},
              {"residual", v.residual},
              {"verified", v.verified}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_field_csv(std::ostream& out, const FieldSpec& spec, const SampledGrid& grid,
                     const BranchState& branch) {
  out << "x,y,re_w,im_w,J11,J12,J21,J22,detJ\n";
  const auto& g = grid.geometry;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!grid.inside[idx]) continue;
    const Vec2 p = g.point(idx);
    out << format_number(p.x) << ',' << format_number(p.y);
    try {
      const Complex w = eval_w(spec, p, branch);
      const Derivatives d = eval_jacobian(spec, p, branch);
      for (double v : {w.real(), w.imag(), d.J(0, 0), d.J(0, 1), d.J(1, 0), d.J(1, 1), d.det()})
        out << ',' << format_number(v);
    } catch (const DomainError&) {
      out << ",nan,nan,nan,nan,nan,nan,nan";
    }
    out << '\n';
  }
}

void write_coframe_csv(std::ostream& out, const CoframeField& field) {
  out << "x,y,t11,t12,t21,t22,valid,cut_flags\n";
  const auto& g = field.grid();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Vec2 p = g.point(idx);
    const Mat2& t = field.theta(idx);
    out << format_number(p.x) << ',' << format_number(p.y);
    for (double v : {t(0, 0), t(0, 1), t(1, 0), t(1, 1)}) out << ',' << format_number(v);
    out << ',' << (field.valid(idx) ? 1 : 0) << ',' << static_cast<int>(field.cut_flags(idx)) << '\n';
  }
}

namespace {

struct CsvRow {
  Vec2 p;
  Mat2 theta;
  bool valid = true;
  std::uint8_t flags = 0;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError("coframe CSV line " + std::to_string(line) + ": bad number \"" + s + "\"");
  return v;
}

// Smallest gap between distinct sorted coordinates, with the coordinate set.
double min_spacing(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double best = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    if (d > 1e-12 * (1.0 + std::abs(v[i])) && (best == 0.0 || d < best)) best = d;
  }
  return best;
}

}  // namespace

CoframeField read_coframe_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("coframe CSV: empty input");
  const std::vector<std::string> header = split(line);
  const std::vector<std::string> expected{"x", "y", "t11", "t12", "t21", "t22", "valid", "cut_flags"};
  if (header.size() < 6 || !std::equal(header.begin(), header.begin() + 6, expected.begin()))
    throw InputError("coframe CSV: header must start with x,y,t11,t12,t21,t22");
  for (std::size_t c = 6; c < header.size(); ++c)
    if (c >= expected.size() || header[c] != expected[c])
      throw InputError("coframe CSV: unexpected column \"" + header[c] + "\"");

  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw InputError("coframe CSV line " + std::to_string(lineno) + ": wrong column count");
    CsvRow row;
    row.p = {parse_double(cells[0], lineno), parse_double(cells[1], lineno)};
    row.theta = Mat2::from_rows({parse_double(cells[2], lineno), parse_double(cells[3], lineno)},
                                {parse_double(cells[4], lineno), parse_double(cells[5], lineno)});
    if (cells.size() > 6) row.valid = parse_double(cells[6], lineno) != 0.0;
    if (cells.size() > 7) {
      const double f = parse_double(cells[7], lineno);
      if (f < 0 || f > 15 || f != std::round(f))
        throw InputError("coframe CSV line " + std::to_string(lineno) + ": cut_flags must be 0..15");
      row.flags = static_cast<std::uint8_t>(f);
    }
    rows.push_back(row);
  }
  if (rows.size() < 2) throw InputError("coframe CSV: need at least two rows");

  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r.p.x);
    ys.push_back(r.p.y);
  }
  const double hx = min_spacing(xs), hy = min_spacing(ys);
  double h = 0.0;
  if (hx > 0.0 && hy > 0.0) {
    if (std::abs(hx - hy) > 1e-6 * std::max(hx, hy))
      throw InputError("coframe CSV: x and y spacings differ");
    h = hx;
  } else {
    h = std::max(hx, hy);
  }
  if (!(h > 0.0)) throw InputError("coframe CSV: cannot infer grid spacing");

  GridGeometry g;
  g.origin = {*std::min_element(xs.begin(), xs.end()), *std::min_element(ys.begin(), ys.end())};
  g.h = h;
  const double xmax = *std::max_element(xs.begin(), xs.end());
  const double ymax = *std::max_element(ys.begin(), ys.end());
  g.nx = static_cast<std::size_t>(std::llround((xmax - g.origin.x) / h)) + 1;
  g.ny = static_cast<std::size_t>(std::llround((ymax - g.origin.y) / h)) + 1;
  if (g.size() > 50'000'000) throw InputError("coframe CSV: grid too large");

  std::vector<Mat2> theta(g.size(), Mat2::identity());
  std::vector<std::uint8_t> valid(g.size(), 0), flags(g.size(), 0), seen(g.size(), 0);
  for (const auto& r : rows) {
    const double fi = (r.p.x - g.origin.x) / h, fj = (r.p.y - g.origin.y) / h;
    const double ri = std::round(fi), rj = std::round(fj);
    if (std::abs(fi - ri) > 1e-6 || std::abs(fj - rj) > 1e-6)
      throw InputError("coframe CSV: point off the inferred grid");
    const std::size_t idx = g.index(static_cast<std::size_t>(ri), static_cast<std::size_t>(rj));
    if (seen[idx]) throw InputError("coframe CSV: duplicate grid point");
    seen[idx] = 1;
    theta[idx] = r.theta;
    valid[idx] = r.valid ? 1 : 0;
    flags[idx] = r.flags;
  }
  return CoframeField(g, std::move(theta), std::move(valid), std::move(flags));
}

CoframeField read_coframe_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return read_coframe_csv(in);
}

}  // namespace latdef::io
