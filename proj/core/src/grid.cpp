#include "tme/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tme {

UniformGrid::UniformGrid(std::size_t n_points, double half_width)
    : n_points_(n_points), half_width_(half_width), spacing_(0.0) {
  if (n_points < 3 || n_points % 2 == 0) {
    throw std::invalid_argument("grid needs an odd number of points >= 3, got " +
                                std::to_string(n_points));
  }
  if (!std::isfinite(half_width) || half_width <= 0.0) {
    throw std::invalid_argument("grid half width must be finite and positive");
  }
  spacing_ = 2.0 * half_width / static_cast<double>(n_points - 1);
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) out[i] = point(i);
  return out;
}

FrequencyGrid make_grid(std::size_t n_points, double half_width) {
  return FrequencyGrid(n_points, half_width);
}

}  // namespace tme
