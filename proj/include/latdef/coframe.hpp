#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "latdef/region.hpp"
#include "latdef/types.hpp"

namespace latdef {

// Cut-crossing bits for the four stencil neighbours of a node.
enum CutFlag : std::uint8_t { kCutXPlus = 1, kCutXMinus = 2, kCutYPlus = 4, kCutYMinus = 8 };

// Grid-sampled field of invertible coframes. Row a of theta holds the
// components theta^a_i of the 1-form theta^a = theta^a_x dx + theta^a_y dy.
class CoframeField {
 public:
  // Throws InputError on size mismatch, h <= 0, or a singular coframe at a
  // valid node.
  CoframeField(GridGeometry grid, std::vector<Mat2> theta, std::vector<std::uint8_t> valid,
               std::vector<std::uint8_t> cut_flags);

  // theta(x, y) at every node of `grid` for which `keep` (if given) holds.
  static CoframeField sample(const GridGeometry& grid, const std::function<Mat2(Vec2)>& theta,
                             const std::function<bool(Vec2)>& keep = {});

  const GridGeometry& grid() const { return grid_; }
  const Mat2& theta(std::size_t idx) const { return theta_[idx]; }
  bool valid(std::size_t idx) const { return valid_[idx] != 0; }
  std::uint8_t cut_flags(std::size_t idx) const { return cut_flags_[idx]; }
  const std::vector<Mat2>& thetas() const { return theta_; }
  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }
  const std::vector<std::uint8_t>& cut_mask() const { return cut_flags_; }
  std::size_t valid_count() const;

  // Node has a full central-difference stencil of valid nodes not crossing a cut.
  bool stencil_ok(std::size_t i, std::size_t j) const;
  bool stencil_ok(std::size_t idx) const { return stencil_ok(idx % grid_.nx, idx / grid_.nx); }

 private:
  GridGeometry grid_;
  std::vector<Mat2> theta_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::uint8_t> cut_flags_;
};

}  // namespace latdef
