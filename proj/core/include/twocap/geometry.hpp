#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace twocap {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Uniform square lattice of n x n nodes with spacing h.
///
/// Node (i, j) sits at anchor + ((i - anchor_i) h, (j - anchor_j) h). Positions
/// are always formed from an integer offset times h, so windows of a grid
/// reproduce the parent's coordinates bit for bit and rescaling (anchor, h) by
/// a power of two rescales every coordinate exactly.
struct Grid {
  int n = 0;
  double h = 0.0;
  Vec2 anchor{};
  int anchor_i = 0;
  int anchor_j = 0;

  /// n = 2 * half + 1 nodes per side, centred on `centre`.
  static Grid centred(int half, double spacing, Vec2 centre = {}) {
    return Grid{2 * half + 1, spacing, centre, half, half};
  }

  std::size_t size() const { return std::size_t(n) * std::size_t(n); }
  std::size_t index(int i, int j) const { return std::size_t(j) * std::size_t(n) + std::size_t(i); }

  double x(int i) const { return anchor.x + double(i - anchor_i) * h; }
  double y(int j) const { return anchor.y + double(j - anchor_j) * h; }
  Vec2 node(int i, int j) const { return {x(i), y(j)}; }

  /// Midpoint of the edge (i, j)-(i+1, j).
  Vec2 mid_x(int i, int j) const { return {anchor.x + (double(i - anchor_i) + 0.5) * h, y(j)}; }
  /// Midpoint of the edge (i, j)-(i, j+1).
  Vec2 mid_y(int i, int j) const { return {x(i), anchor.y + (double(j - anchor_j) + 0.5) * h}; }

  /// Lattice with `count` nodes per side whose node (0, 0) is this grid's
  /// node (i0, j0). The window may extend past this grid.
  Grid window(int i0, int j0, int count) const {
    return Grid{count, h, anchor, anchor_i - i0, anchor_j - j0};
  }

  /// Index of the node nearest to coordinate `v` along x (unclamped).
  int nearest_i(double v) const { return anchor_i + int(std::lround((v - anchor.x) / h)); }
  int nearest_j(double v) const { return anchor_j + int(std::lround((v - anchor.y) / h)); }

  bool same_lattice(const Grid& o) const {
    return n == o.n && h == o.h && x(0) == o.x(0) && y(0) == o.y(0);
  }
};

/// Node values on a grid plus a per-node constraint flag. Fixed nodes keep
/// their value through any solve.
struct GridField {
  Grid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> fixed;

  GridField() = default;
  explicit GridField(const Grid& g) : grid(g), values(g.size(), 0.0), fixed(g.size(), 0) {}

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }

  void fix(int i, int j, double v) {
    auto p = grid.index(i, j);
    values[p] = v;
    fixed[p] = 1;
  }
  void fix_boundary(double v) {
    for (int k = 0; k < grid.n; ++k) {
      fix(k, 0, v);
      fix(k, grid.n - 1, v);
      fix(0, k, v);
      fix(grid.n - 1, k, v);
    }
  }
  std::size_t fixed_count() const {
    std::size_t c = 0;
    for (auto f : fixed) c += f;
    return c;
  }
};

}  // namespace twocap
