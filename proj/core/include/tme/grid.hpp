#pragma once

#include <cstddef>
#include <vector>

namespace tme {

/// Uniform, symmetric grid on [-half_width, +half_width] with an odd number
/// of points, so the origin is always a sample. Frequencies are stored in
/// units of the pump bandwidth; time grids reuse the same type in units of
/// its inverse.
class UniformGrid {
 public:
  /// Throws std::invalid_argument unless n_points >= 3, n_points is odd and
  /// half_width is a finite positive number.
  UniformGrid(std::size_t n_points, double half_width);

  std::size_t n_points() const { return n_points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }

  /// Rectangle-rule quadrature weight (equal to the spacing).
  double weight() const { return spacing_; }

  /// Computed from the center outward so the grid is exactly symmetric and
  /// contains 0.0 bit-exactly.
  double point(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_points_ / 2)) * spacing_;
  }
  std::vector<double> points() const;

  /// Index of the point at the origin.
  std::size_t center_index() const { return n_points_ / 2; }

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

 private:
  std::size_t n_points_;
  double half_width_;
  double spacing_;
};

using FrequencyGrid = UniformGrid;

FrequencyGrid make_grid(std::size_t n_points, double half_width);

inline constexpr std::size_t kDefaultGridPoints = 201;
inline constexpr double kDefaultHalfWidth = 20.0;

}  // namespace tme
