#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace lrp {

/// Largest supported ambient dimension. Points are stored inline.
inline constexpr int kMaxDim = 4;

/// A point of R^d. Lattice points are represented as integer-valued reals
/// when they enter continuous geometry.
struct Point {
  std::array<double, kMaxDim> x{};
  int dim = 0;

  Point() = default;
  explicit Point(int d) : dim(d) {}
  Point(std::initializer_list<double> coords);

  static Point filled(int d, double value);

  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const {
    return {x.data(), static_cast<std::size_t>(dim)};
  }
  bool finite() const;

  friend bool operator==(const Point& a, const Point& b);
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& p);

double euclidean(const Point& a, const Point& b);
double squared_euclidean(const Point& a, const Point& b);
double l1_distance(const Point& a, const Point& b);

/// Strict lexicographic order on coordinates.
bool lex_less(const Point& a, const Point& b);

std::string to_string(const Point& p);

/// Closed axis-aligned box [lo, hi].
struct Window {
  Point lo;
  Point hi;

  Window() = default;
  Window(Point lo_, Point hi_);

  static Window cube(int d, double lo, double hi);

  int dim() const { return lo.dim; }
  double side(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const;
  double diameter() const;
  Point center() const;
  bool contains(const Point& p) const;
  bool contains(const Window& inner, double tol = 0.0) const;
  Window scaled(double r) const;

  friend bool operator==(const Window& a, const Window& b) = default;
};

/// A point of Z^d.
struct Site {
  std::array<std::int64_t, kMaxDim> k{};
  int dim = 0;

  Site() = default;
  explicit Site(int d) : dim(d) {}
  Site(std::initializer_list<std::int64_t> coords);

  static Site filled(int d, std::int64_t value);

  std::int64_t& operator[](int i) { return k[static_cast<std::size_t>(i)]; }
  std::int64_t operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

  Point to_point() const;
  std::int64_t l1_norm() const;
  std::int64_t linf_norm() const;

  friend bool operator==(const Site& a, const Site& b);
};

Site operator+(const Site& a, const Site& b);
Site operator-(const Site& a, const Site& b);
std::string to_string(const Site& s);

/// Inclusive integer box [lo, hi] of Z^d with row-major linear indexing
/// (last axis fastest), so index order coincides with lexicographic order.
struct IntBox {
  Site lo;
  Site hi;

  IntBox() = default;
  IntBox(Site lo_, Site hi_);

  static IntBox cube(int d, std::int64_t lo, std::int64_t hi);

  int dim() const { return lo.dim; }
  std::int64_t extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  std::int64_t count() const;
  bool contains(const Site& s) const;
  bool contains(const IntBox& inner) const;
  std::int64_t index(const Site& s) const;
  Site site(std::int64_t index) const;

  friend bool operator==(const IntBox& a, const IntBox& b);
};

/// An unordered long edge stored with a lexicographically preceding a.
struct LongEdge {
  Point a;
  Point b;

  double scope() const { return euclidean(a, b); }
  friend bool operator==(const LongEdge& x, const LongEdge& y) = default;
};

LongEdge canonicalize_edge(const Point& a, const Point& b);
bool edge_less(const LongEdge& x, const LongEdge& y);

/// Surface measure of the unit sphere in R^d (2 for d = 1).
double unit_sphere_measure(int d);

}  // namespace lrp
