#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <stdexcept>
#include <string>

namespace cfo {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Axis-aligned rectangular domain [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool valid() const { return x1 > x0 && y1 > y0; }
};

// Thrown when a linear solve or a numerical contract fails.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by the transport step when the requested time step exceeds the
// stability limit; carries the largest admissible step.
class CflError : public NumericError {
 public:
  CflError(const std::string& what, double suggested)
      : NumericError(what), suggested_dt(suggested) {}
  double suggested_dt;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cfo
