#pragma once

// The multiply-connected body: an axis-aligned box with disjoint disk
// holes, closed loops inside it and regular sampling grids.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "latdef/types.hpp"

namespace latdef {

struct Rect {
  Vec2 min;
  Vec2 max;
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

struct Disk {
  Vec2 center;
  double radius = 0.0;
};

struct Region {
  Rect outer;
  std::vector<Disk> punctures;

  // Largest extent of the outer box; the length scale of the body.
  double scale() const;
  // True iff p lies in the closed box and strictly outside every hole.
  bool contains(const Vec2& p) const;
  // Index of the hole containing p (closed disk), or -1.
  int puncture_at(const Vec2& p) const;
};

enum class IssueKind { overlap, containment, invalid_value, norm_condition, non_integer,
                       charge_placement, pole_placement };

struct Issue {
  IssueKind kind;
  std::string message;
};

// Empty result means the region is valid.
std::vector<Issue> validate_region(const Region& region);

// Closed polygonal path; the closing segment back to points.front() is implied.
struct Loop {
  std::vector<Vec2> points;
};

// CCW for turns > 0, CW for turns < 0; base point is center + (radius, 0).
Loop make_circle_loop(Vec2 center, double radius, int turns, int samples_per_turn);
Loop reversed(const Loop& loop);
// Both loops must start at the same base point.
Loop concatenate(const Loop& first, const Loop& second);
// Inserts the midpoint of every segment (including the closing one).
Loop refined(const Loop& loop);

// Clearance margin used when constructing loops around a hole.
double default_loop_margin(double spacing, double radius);

// Throws GeometryError if a point leaves the box or a segment comes within
// `margin` of a hole.
void validate_loop(const Loop& loop, const Region& region, double margin = 0.0);

// Signed turns of the loop about `center`, not rounded.
double winding_turns(const Loop& loop, const Vec2& center);

// Integer winding number per hole. Throws GeometryError for invalid loops.
std::vector<int> winding_numbers(const Loop& loop, const Region& region);

// Axis-aligned lattice x = origin.x + i h, y = origin.y + j h; row-major
// index j * nx + i.
struct GridGeometry {
  Vec2 origin;
  double h = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  Vec2 point(std::size_t i, std::size_t j) const {
    return {origin.x + static_cast<double>(i) * h, origin.y + static_cast<double>(j) * h};
  }
  Vec2 point(std::size_t idx) const { return point(idx % nx, idx / nx); }
  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

struct SampledGrid {
  GridGeometry geometry;
  std::vector<std::uint8_t> inside;  // per lattice node
  bool empty_warning = false;

  // Row-major list of the nodes kept in the body.
  std::vector<Vec2> points() const;
  std::size_t count() const;
};

// Lattice of spacing h anchored at the box corner, boundary included, keeping
// nodes with clearance >= h/2 from every hole.
SampledGrid sample_grid(const Region& region, double h);

}  // namespace latdef
