#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hotwire {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Rotates by +90 degrees.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, out-of-range arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// An operation was asked to start from a state that violates its contract.
class InvalidState : public Error {
 public:
  using Error::Error;
};

}  // namespace hotwire
