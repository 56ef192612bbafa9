#pragma once
// Small fixed-size geometric value types used throughout the library.

#include <cmath>

namespace fsihdg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
  /// Clockwise quarter turn: maps a unit tangent to a unit normal.
  Vec2 perp() const { return {y, -x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

  Vec2 apply(const Vec2& v) const {
    return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y};
  }
  double trace() const { return a00 + a11; }
  Mat2 transposed() const { return {a00, a10, a01, a11}; }
  Mat2 operator+(const Mat2& o) const {
    return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
  }
  Mat2 operator*(double s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
  /// Symmetric part (the strain-rate tensor of a gradient).
  Mat2 sym() const {
    const double off = 0.5 * (a01 + a10);
    return {a00, off, off, a11};
  }
};

}  // namespace fsihdg
