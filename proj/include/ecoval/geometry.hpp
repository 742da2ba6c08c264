#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>

namespace ecoval {

inline constexpr int kGridWidth = 250;
inline constexpr int kGridHeight = 120;

struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

constexpr bool in_bounds(Cell c) noexcept {
  return c.x >= 0 && c.x < kGridWidth && c.y >= 0 && c.y < kGridHeight;
}

constexpr Cell clamp_to_grid(Cell c) noexcept {
  return {std::clamp(c.x, 0, kGridWidth - 1), std::clamp(c.y, 0, kGridHeight - 1)};
}

constexpr int chebyshev(Cell a, Cell b) noexcept {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

inline double euclidean(Cell a, Cell b) noexcept {
  return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y));
}

/// Exact squared distance, for comparisons.
constexpr int distance_sq(Cell a, Cell b) noexcept {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

constexpr int cell_index(Cell c) noexcept { return c.y * kGridWidth + c.x; }

}  // namespace ecoval
