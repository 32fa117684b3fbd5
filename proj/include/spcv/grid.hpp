#pragma once

#include <cmath>
#include <vector>

namespace spcv {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Square grid over the unit square; all distances are fractions of the side
// length. Cells are numbered row-major: cell_id = row * side_cells + col.
struct GridSpec {
  int side_cells = 50;

  int n_cells() const { return side_cells * side_cells; }
  int row_of(int cell_id) const { return cell_id / side_cells; }
  int col_of(int cell_id) const { return cell_id % side_cells; }
  Point center(int cell_id) const {
    return {(col_of(cell_id) + 0.5) / side_cells, (row_of(cell_id) + 0.5) / side_cells};
  }
};

std::vector<Point> cell_centers(const GridSpec& grid);

}  // namespace spcv
