#include "spcv/grid.hpp"

namespace spcv {

std::vector<Point> cell_centers(const GridSpec& grid) {
  std::vector<Point> pts;
  pts.reserve(grid.n_cells());
  for (int i = 0; i < grid.n_cells(); ++i) pts.push_back(grid.center(i));
  return pts;
}

}  // namespace spcv
