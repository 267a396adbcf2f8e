#include "latdef/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace latdef {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 10.0;
constexpr std::size_t kMaxLevels = 4000;

struct Sheet {
  Rect window;
  std::size_t nx = 0, ny = 0;  // nodes
  double hx = 0.0, hy = 0.0;
  std::vector<std::uint8_t> ok;
  std::vector<double> re, im;

  Vec2 node(std::size_t i, std::size_t j) const {
    return {window.min.x + static_cast<double>(i) * hx, window.min.y + static_cast<double>(j) * hy};
  }
};

// Cell (i, j) straddles the cut ray of some charge.
bool crosses_cut(const FieldSpec& spec, const Sheet& s, std::size_t i, std::size_t j) {
  const Vec2 lo = s.node(i, j), hi = s.node(i + 1, j + 1);
  for (const auto& q : spec.charges)
    if (lo.y < q.center.y && q.center.y <= hi.y && lo.x < q.center.x) return true;
  return false;
}

struct Segment {
  std::size_t e0, e1;
};

class Tracer {
 public:
  Tracer(const Sheet& s, const std::vector<double>& f, const std::vector<std::uint8_t>& cell_ok)
      : s_(s), f_(f), cell_ok_(cell_ok) {}

  // Polylines of the level set f = level, in deterministic order.
  std::vector<std::vector<Vec2>> trace(double level, std::size_t& open_ends_inside) {
    level_ = level;
    std::vector<Segment> segs;
    for (std::size_t j = 0; j + 1 < s_.ny; ++j)
      for (std::size_t i = 0; i + 1 < s_.nx; ++i)
        if (cell_ok_[j * (s_.nx - 1) + i]) cell(i, j, segs);

    std::unordered_map<std::size_t, std::vector<std::size_t>> at;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      at[segs[k].e0].push_back(k);
      at[segs[k].e1].push_back(k);
    }
    std::vector<std::uint8_t> used(segs.size(), 0);
    std::vector<std::vector<Vec2>> lines;

    auto walk = [&](std::size_t start_seg, std::size_t start_edge) {
      std::vector<Vec2> line{point(start_edge)};
      std::size_t seg = start_seg, edge = start_edge;
      while (true) {
        used[seg] = 1;
        edge = segs[seg].e0 == edge ? segs[seg].e1 : segs[seg].e0;
        line.push_back(point(edge));
        std::size_t next = segs.size();
        for (std::size_t cand : at[edge])
          if (!used[cand]) {
            next = cand;
            break;
          }
        if (next == segs.size()) break;
        seg = next;
      }
      return std::make_pair(line, edge);
    };

    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (used[k]) continue;
      for (std::size_t e : {segs[k].e0, segs[k].e1}) {
        if (at[e].size() != 1) continue;
        auto [line, last] = walk(k, e);
        if (interior_end(e)) ++open_ends_inside;
        if (interior_end(last)) ++open_ends_inside;
        lines.push_back(std::move(line));
        break;
      }
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (used[k]) continue;
      auto [line, last] = walk(k, segs[k].e0);
      (void)last;
      lines.push_back(std::move(line));
    }
    return lines;
  }

 private:
  // Edge ids: 2 * node + 0 for the edge to the right, + 1 for the edge up.
  std::size_t horiz(std::size_t i, std::size_t j) const { return 2 * (j * s_.nx + i); }
  std::size_t vert(std::size_t i, std::size_t j) const { return 2 * (j * s_.nx + i) + 1; }
  double value(std::size_t i, std::size_t j) const { return f_[j * s_.nx + i]; }

  Vec2 point(std::size_t edge) const {
    const std::size_t node = edge / 2;
    const std::size_t i = node % s_.nx, j = node / s_.nx;
    const std::size_t i1 = (edge % 2 == 0) ? i + 1 : i;
    const std::size_t j1 = (edge % 2 == 0) ? j : j + 1;
    const double v0 = value(i, j), v1 = value(i1, j1);
    const double t = (level_ - v0) / (v1 - v0);
    const Vec2 a = s_.node(i, j), b = s_.node(i1, j1);
    return a + t * (b - a);
  }

  // An open end counts when neither adjacent cell touches the window border
  // or a missing node.
  bool interior_end(std::size_t edge) const {
    const std::size_t node = edge / 2;
    const std::size_t i = node % s_.nx, j = node / s_.nx;
    const std::size_t cx = s_.nx - 1, cy = s_.ny - 1;
    auto cell_clear = [&](long ci, long cj) {
      if (ci <= 0 || cj <= 0 || ci >= static_cast<long>(cx) - 1 || cj >= static_cast<long>(cy) - 1)
        return false;
      for (long dj = 0; dj <= 1; ++dj)
        for (long di = 0; di <= 1; ++di)
          if (!s_.ok[static_cast<std::size_t>(cj + dj) * s_.nx + static_cast<std::size_t>(ci + di)]) return false;
      return true;
    };
    const long li = static_cast<long>(i), lj = static_cast<long>(j);
    if (edge % 2 == 0) return cell_clear(li, lj - 1) && cell_clear(li, lj);
    return cell_clear(li - 1, lj) && cell_clear(li, lj);
  }

  void cell(std::size_t i, std::size_t j, std::vector<Segment>& out) const {
    const double v[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
    int mask = 0;
    for (int c = 0; c < 4; ++c)
      if (v[c] >= level_) mask |= 1 << c;
    if (mask == 0 || mask == 15) return;
    const std::size_t bottom = horiz(i, j), right = vert(i + 1, j), top = horiz(i, j + 1), left = vert(i, j);
    switch (mask) {
      case 1: case 14: out.push_back({left, bottom}); break;
      case 2: case 13: out.push_back({bottom, right}); break;
      case 3: case 12: out.push_back({left, right}); break;
      case 4: case 11: out.push_back({right, top}); break;
      case 6: case 9: out.push_back({bottom, top}); break;
      case 7: case 8: out.push_back({left, top}); break;
      case 5: case 10: {
        const bool center_up = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level_;
        const bool c0_up = (mask & 1) != 0;
        if (center_up == c0_up) {
          out.push_back({bottom, right});
          out.push_back({top, left});
        } else {
          out.push_back({left, bottom});
          out.push_back({right, top});
        }
        break;
      }
      default: break;
    }
  }

  const Sheet& s_;
  const std::vector<double>& f_;
  const std::vector<std::uint8_t>& cell_ok_;
  double level_ = 0.0;
};

std::vector<double> integer_levels(const Sheet& s, const std::vector<double>& f) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (s.ok[k]) {
      lo = std::min(lo, f[k]);
      hi = std::max(hi, f[k]);
    }
  std::vector<double> out;
  if (!(lo <= hi)) return out;
  const double first = std::ceil(lo), last = std::floor(hi);
  if (last - first + 1 > static_cast<double>(kMaxLevels))
    throw InputError("field range needs too many integer levels; pass explicit levels");
  for (double l = first; l <= last; l += 1.0) out.push_back(l);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace

void validate_render_options(const RenderOptions& options) {
  if (options.resolution < 8) throw InputError("render resolution must be at least 8");
  if (options.resolution > 4000) throw InputError("render resolution must be at most 4000");
  if (!(options.stroke_width > 0.0) || !(options.cut_stroke_width > 0.0) ||
      !std::isfinite(options.stroke_width) || !std::isfinite(options.cut_stroke_width))
    throw InputError("stroke widths must be positive");
  if (options.levels) {
    if (options.levels->size() > kMaxLevels) throw InputError("too many contour levels");
    for (double l : *options.levels)
      if (!std::isfinite(l)) throw InputError("contour levels must be finite");
  }
  if (options.window) {
    const Rect& w = *options.window;
    if (!std::isfinite(w.min.x) || !std::isfinite(w.min.y) || !std::isfinite(w.max.x) ||
        !std::isfinite(w.max.y) || !(w.width() > 0.0) || !(w.height() > 0.0))
      throw InputError("render window must be a non-empty finite box");
  }
}

RenderResult render_svg(const FieldSpec& spec, const RenderOptions& options) {
  validate_render_options(options);
  Sheet s;
  s.window = options.window.value_or(spec.region.outer);
  const double side = std::max(s.window.width(), s.window.height());
  const auto cells = [&](double extent) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.resolution * extent / side)));
  };
  const std::size_t cx = cells(s.window.width()), cy = cells(s.window.height());
  s.nx = cx + 1;
  s.ny = cy + 1;
  s.hx = s.window.width() / static_cast<double>(cx);
  s.hy = s.window.height() / static_cast<double>(cy);
  s.ok.assign(s.nx * s.ny, 0);
  s.re.assign(s.nx * s.ny, 0.0);
  s.im.assign(s.nx * s.ny, 0.0);

  std::vector<Vec2> kept;
  for (std::size_t j = 0; j < s.ny; ++j)
    for (std::size_t i = 0; i < s.nx; ++i) {
      const Vec2 p = s.node(i, j);
      if (!spec.region.contains(p)) continue;
      try {
        const Complex w = eval_w(spec, p);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
        const std::size_t k = j * s.nx + i;
        s.ok[k] = 1;
        s.re[k] = w.real();
        s.im[k] = w.imag();
        kept.push_back(p);
      } catch (const DomainError&) {
      }
    }

  std::vector<std::uint8_t> cell_ok(cx * cy, 0);
  for (std::size_t j = 0; j < cy; ++j)
    for (std::size_t i = 0; i < cx; ++i) {
      const bool corners = s.ok[j * s.nx + i] && s.ok[j * s.nx + i + 1] && s.ok[(j + 1) * s.nx + i] &&
                           s.ok[(j + 1) * s.nx + i + 1];
      cell_ok[j * cx + i] = corners && !crosses_cut(spec, s, i, j);
    }

  const ImmersionReport immersion = immersion_check(spec, kept);

  RenderResult result;
  result.degenerate = immersion.degenerate.size();

  const double scale = (kCanvas - 2 * kMargin) / side;
  auto px = [&](double x) { return fmt(kMargin + (x - s.window.min.x) * scale); };
  auto py = [&](double y) { return fmt(kMargin + (s.window.max.y - y) * scale); };
  const double width = 2 * kMargin + s.window.width() * scale;
  const double height = 2 * kMargin + s.window.height() * scale;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\"/>\n";

  const std::pair<const char*, const std::vector<double>*> families[] = {{"re-w", &s.re}, {"im-w", &s.im}};
  const char* colors[] = {"#1f4e99", "#b8322a"};
  for (int fam = 0; fam < 2; ++fam) {
    const auto& f = *families[fam].second;
    const std::vector<double> levels = options.levels.value_or(integer_levels(s, f));
    Tracer tracer(s, f, cell_ok);
    svg << "<g id=\"" << families[fam].first << "\" fill=\"none\" stroke=\"" << colors[fam]
        << "\" stroke-width=\"" << fmt(options.stroke_width) << "\" stroke-linejoin=\"round\">\n";
    for (double level : levels) {
      const auto lines = tracer.trace(level, result.endpoints);
      for (const auto& line : lines) {
        if (line.size() < 2) continue;
        ++result.curves;
        svg << "<path data-level=\"" << fmt(level) << "\" d=\"M" << px(line[0].x) << ' ' << py(line[0].y);
        for (std::size_t k = 1; k < line.size(); ++k) svg << " L" << px(line[k].x) << ' ' << py(line[k].y);
        svg << "\"/>\n";
      }
    }
    svg << "</g>\n";
  }

  if (options.show_cut && !spec.charges.empty()) {
    svg << "<g id=\"cuts\" stroke=\"#444444\" stroke-width=\"" << fmt(options.cut_stroke_width)
        << "\" stroke-dasharray=\"6 4\">\n";
    for (const auto& q : spec.charges) {
      if (q.center.y < s.window.min.y || q.center.y > s.window.max.y || q.center.x <= s.window.min.x) continue;
      const double x1 = std::min(q.center.x, s.window.max.x);
      svg << "<line x1=\"" << px(s.window.min.x) << "\" y1=\"" << py(q.center.y) << "\" x2=\"" << px(x1)
          << "\" y2=\"" << py(q.center.y) << "\"/>\n";
    }
    svg << "</g>\n";
  }

  svg << "<g id=\"holes\" fill=\"#d9d9d9\" stroke=\"#000000\" stroke-width=\"1.000\">\n";
  for (const auto& d : spec.region.punctures)
    svg << "<circle cx=\"" << px(d.center.x) << "\" cy=\"" << py(d.center.y) << "\" r=\"" << fmt(d.radius * scale)
        << "\"/>\n";
  svg << "</g>\n";

  if (!immersion.ok) {
    svg << "<g id=\"warning-degenerate\" fill=\"#ff8c00\" stroke=\"none\">\n"
        << "<title>" << immersion.degenerate.size() << " points with det J at or below "
        << fmt(immersion.threshold) << "</title>\n";
    for (const auto& p : immersion.degenerate)
      svg << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"2.000\"/>\n";
    svg << "</g>\n";
  }

  svg << "<rect x=\"" << px(s.window.min.x) << "\" y=\"" << py(s.window.max.y) << "\" width=\""
      << fmt(s.window.width() * scale) << "\" height=\"" << fmt(s.window.height() * scale)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.000\"/>\n"
      << "</svg>\n";
  result.svg = svg.str();
  return result;
}

}  // namespace latdef
