#include "latdef/coframe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace latdef {

CoframeField::CoframeField(GridGeometry grid, std::vector<Mat2> theta,
                           std::vector<std::uint8_t> valid, std::vector<std::uint8_t> cut_flags)
    : grid_(grid), theta_(std::move(theta)), valid_(std::move(valid)), cut_flags_(std::move(cut_flags)) {
  if (!(grid_.h > 0.0) || !std::isfinite(grid_.h)) throw InputError("coframe grid spacing must be positive");
  const std::size_t n = grid_.size();
  if (theta_.size() != n || valid_.size() != n || cut_flags_.size() != n)
    throw InputError("coframe arrays do not match the grid size");
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (!valid_[idx]) {
      theta_[idx] = Mat2{};
      continue;
    }
    const double det = theta_[idx].det();
    if (!std::isfinite(det) || det == 0.0)
      throw InputError("coframe is singular at node " + std::to_string(idx));
  }
}

CoframeField CoframeField::sample(const GridGeometry& grid, const std::function<Mat2(Vec2)>& theta,
                                  const std::function<bool(Vec2)>& keep) {
  std::vector<Mat2> values(grid.size());
  std::vector<std::uint8_t> valid(grid.size(), 0);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vec2 p = grid.point(idx);
    if (keep && !keep(p)) continue;
    values[idx] = theta(p);
    valid[idx] = 1;
  }
  return {grid, std::move(values), std::move(valid), std::vector<std::uint8_t>(grid.size(), 0)};
}

std::size_t CoframeField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

bool CoframeField::stencil_ok(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0 || i + 1 >= grid_.nx || j + 1 >= grid_.ny) return false;
  const std::size_t idx = grid_.index(i, j);
  if (!valid_[idx] || cut_flags_[idx] != 0) return false;
  return valid_[idx - 1] && valid_[idx + 1] && valid_[idx - grid_.nx] && valid_[idx + grid_.nx];
}

}  // namespace latdef
