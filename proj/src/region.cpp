#include "latdef/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latdef {

namespace {

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(a + t * ab - p);
}

constexpr double kBoxSlack = 1e-12;

}  // namespace

double Region::scale() const { return std::max(outer.width(), outer.height()); }

bool Region::contains(const Vec2& p) const {
  const double eps = kBoxSlack * (1.0 + scale());
  if (p.x < outer.min.x - eps || p.x > outer.max.x + eps || p.y < outer.min.y - eps ||
      p.y > outer.max.y + eps)
    return false;
  return puncture_at(p) < 0;
}

int Region::puncture_at(const Vec2& p) const {
  for (std::size_t i = 0; i < punctures.size(); ++i)
    if (norm(p - punctures[i].center) <= punctures[i].radius) return static_cast<int>(i);
  return -1;
}

std::vector<Issue> validate_region(const Region& region) {
  std::vector<Issue> issues;
  const Rect& box = region.outer;
  if (!(box.max.x > box.min.x) || !(box.max.y > box.min.y)) {
    issues.push_back({IssueKind::invalid_value, "outer box must have positive extent"});
    return issues;
  }
  for (std::size_t i = 0; i < region.punctures.size(); ++i) {
    const Disk& d = region.punctures[i];
    if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
      issues.push_back({IssueKind::invalid_value,
                        "puncture " + std::to_string(i) + " must have a positive radius"});
      continue;
    }
    const bool inside = d.center.x - d.radius > box.min.x && d.center.x + d.radius < box.max.x &&
                        d.center.y - d.radius > box.min.y && d.center.y + d.radius < box.max.y;
    if (!inside)
      issues.push_back({IssueKind::containment,
                        "puncture " + std::to_string(i) + " is not strictly inside the outer box"});
  }
  for (std::size_t i = 0; i < region.punctures.size(); ++i)
    for (std::size_t j = i + 1; j < region.punctures.size(); ++j) {
      const Disk& a = region.punctures[i];
      const Disk& b = region.punctures[j];
      if (norm(a.center - b.center) <= a.radius + b.radius) {
        std::ostringstream msg;
        msg << "punctures " << i << " and " << j << " overlap";
        issues.push_back({IssueKind::overlap, msg.str()});
      }
    }
  return issues;
}

Loop make_circle_loop(Vec2 center, double radius, int turns, int samples_per_turn) {
  if (turns == 0 || samples_per_turn < 3 || !(radius > 0.0))
    throw InputError("circle loop needs turns != 0, samples >= 3 and radius > 0");
  const int total = std::abs(turns) * samples_per_turn;
  const double sign = turns > 0 ? 1.0 : -1.0;
  Loop loop;
  loop.points.reserve(static_cast<std::size_t>(total));
  for (int s = 0; s < total; ++s) {
    const double phi = sign * kTwoPi * static_cast<double>(s % samples_per_turn) /
                       static_cast<double>(samples_per_turn);
    loop.points.push_back({center.x + radius * std::cos(phi), center.y + radius * std::sin(phi)});
  }
  return loop;
}

Loop reversed(const Loop& loop) {
  Loop out;
  if (loop.points.empty()) return out;
  out.points.push_back(loop.points.front());
  for (auto it = loop.points.rbegin(); it + 1 != loop.points.rend(); ++it) out.points.push_back(*it);
  return out;
}

Loop concatenate(const Loop& first, const Loop& second) {
  if (first.points.empty() || second.points.empty() ||
      !(first.points.front() == second.points.front()))
    throw InputError("loops must share their base point to be concatenated");
  Loop out = first;
  out.points.insert(out.points.end(), second.points.begin(), second.points.end());
  return out;
}

Loop refined(const Loop& loop) {
  Loop out;
  const std::size_t n = loop.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop.points[i];
    const Vec2& b = loop.points[(i + 1) % n];
    out.points.push_back(a);
    out.points.push_back(0.5 * (a + b));
  }
  return out;
}

double default_loop_margin(double spacing, double radius) { return std::max(spacing, radius / 10.0); }

void validate_loop(const Loop& loop, const Region& region, double margin) {
  if (loop.points.size() < 2) throw GeometryError("loop needs at least two points");
  const std::size_t n = loop.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop.points[i];
    const Vec2& b = loop.points[(i + 1) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw GeometryError("loop point is not finite");
    const double eps = kBoxSlack * (1.0 + region.scale());
    if (a.x < region.outer.min.x - eps || a.x > region.outer.max.x + eps ||
        a.y < region.outer.min.y - eps || a.y > region.outer.max.y + eps)
      throw GeometryError("loop point " + std::to_string(i) + " lies outside the outer box");
    for (std::size_t k = 0; k < region.punctures.size(); ++k) {
      const Disk& d = region.punctures[k];
      if (segment_distance(a, b, d.center) <= d.radius + margin)
        throw GeometryError("loop segment " + std::to_string(i) + " meets puncture " +
                            std::to_string(k));
    }
  }
}

double winding_turns(const Loop& loop, const Vec2& center) {
  const std::size_t n = loop.points.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = loop.points[i] - center;
    const Vec2 v = loop.points[(i + 1) % n] - center;
    total += std::atan2(cross(u, v), dot(u, v));
  }
  return total / kTwoPi;
}

std::vector<int> winding_numbers(const Loop& loop, const Region& region) {
  validate_loop(loop, region);
  std::vector<int> out;
  out.reserve(region.punctures.size());
  for (const Disk& d : region.punctures) {
    const double turns = winding_turns(loop, d.center);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 1e-6)
      throw NumericalError("winding number residual exceeds 1e-6 turns");
    out.push_back(static_cast<int>(rounded));
  }
  return out;
}

std::vector<Vec2> SampledGrid::points() const {
  std::vector<Vec2> out;
  out.reserve(count());
  for (std::size_t idx = 0; idx < inside.size(); ++idx)
    if (inside[idx]) out.push_back(geometry.point(idx));
  return out;
}

std::size_t SampledGrid::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

SampledGrid sample_grid(const Region& region, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid spacing must be positive");
  SampledGrid grid;
  grid.geometry.origin = region.outer.min;
  grid.geometry.h = h;
  if (h > std::min(region.outer.width(), region.outer.height())) {
    grid.empty_warning = true;
    return grid;
  }
  auto count = [h](double extent) {
    return static_cast<std::size_t>(std::floor(extent / h + 1e-9)) + 1;
  };
  grid.geometry.nx = count(region.outer.width());
  grid.geometry.ny = count(region.outer.height());
  grid.inside.assign(grid.geometry.size(), 0);
  for (std::size_t j = 0; j < grid.geometry.ny; ++j)
    for (std::size_t i = 0; i < grid.geometry.nx; ++i) {
      const Vec2 p = grid.geometry.point(i, j);
      bool keep = true;
      for (const Disk& d : region.punctures)
        if (norm(p - d.center) - d.radius < 0.5 * h) {
          keep = false;
          break;
        }
      grid.inside[grid.geometry.index(i, j)] = keep ? 1 : 0;
    }
  if (grid.count() == 0) grid.empty_warning = true;
  return grid;
}

}  // namespace latdef
