#include "lrp/geometry.hpp"

#include <numbers>
#include <sstream>

#include "lrp/errors.hpp"

namespace lrp {

Point::Point(std::initializer_list<double> coords) {
  require(coords.size() >= 1 && coords.size() <= kMaxDim,
          "point dimension out of range");
  dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), x.begin());
}

Point Point::filled(int d, double value) {
  Point p(d);
  for (int i = 0; i < d; ++i) p[i] = value;
  return p;
}

bool Point::finite() const {
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

Point operator+(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
  return r;
}

Point operator-(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
  return r;
}

Point operator*(double s, const Point& p) {
  Point r(p.dim);
  for (int i = 0; i < p.dim; ++i) r[i] = s * p[i];
  return r;
}

double squared_euclidean(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

double euclidean(const Point& a, const Point& b) {
  if (a.dim == 1) return std::abs(a[0] - b[0]);
  return std::sqrt(squared_euclidean(a, b));
}

double l1_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += std::abs(a[i] - b[i]);
  return s;
}

bool lex_less(const Point& a, const Point& b) {
  for (int i = 0; i < a.dim; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < p.dim; ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

Window::Window(Point lo_, Point hi_) : lo(lo_), hi(hi_) {
  require(lo.dim == hi.dim && lo.dim >= 1, "window corners must share a dimension");
  for (int i = 0; i < lo.dim; ++i)
    require(lo[i] < hi[i], "window must satisfy lo < hi on every axis");
}

Window Window::cube(int d, double lo, double hi) {
  return Window(Point::filled(d, lo), Point::filled(d, hi));
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

double Window::diameter() const { return euclidean(lo, hi); }

Point Window::center() const { return 0.5 * (lo + hi); }

bool Window::contains(const Point& p) const {
  if (p.dim != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

bool Window::contains(const Window& inner, double tol) const {
  if (inner.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (inner.lo[i] < lo[i] - tol || inner.hi[i] > hi[i] + tol) return false;
  return true;
}

Window Window::scaled(double r) const { return Window(r * lo, r * hi); }

Site::Site(std::initializer_list<std::int64_t> coords) {
  require(coords.size() >= 1 && coords.size() <= kMaxDim,
          "site dimension out of range");
  dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), k.begin());
}

Site Site::filled(int d, std::int64_t value) {
  Site s(d);
  for (int i = 0; i < d; ++i) s[i] = value;
  return s;
}

Point Site::to_point() const {
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = static_cast<double>(k[i]);
  return p;
}

std::int64_t Site::l1_norm() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) s += k[i] < 0 ? -k[i] : k[i];
  return s;
}

std::int64_t Site::linf_norm() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) s = std::max(s, k[i] < 0 ? -k[i] : k[i]);
  return s;
}

bool operator==(const Site& a, const Site& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

Site operator+(const Site& a, const Site& b) {
  Site r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
  return r;
}

Site operator-(const Site& a, const Site& b) {
  Site r(a.dim);
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
  return r;
}

std::string to_string(const Site& s) {
  std::string out = "(";
  for (int i = 0; i < s.dim; ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + ')';
}

IntBox::IntBox(Site lo_, Site hi_) : lo(lo_), hi(hi_) {
  require(lo.dim == hi.dim && lo.dim >= 1 && lo.dim <= kMaxDim,
          "box corners must share a dimension");
  for (int i = 0; i < lo.dim; ++i)
    require(lo[i] <= hi[i], "box must satisfy lo <= hi on every axis");
}

IntBox IntBox::cube(int d, std::int64_t lo, std::int64_t hi) {
  return IntBox(Site::filled(d, lo), Site::filled(d, hi));
}

std::int64_t IntBox::count() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= extent(i);
  return n;
}

bool IntBox::contains(const Site& s) const {
  if (s.dim != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (s[i] < lo[i] || s[i] > hi[i]) return false;
  return true;
}

bool IntBox::contains(const IntBox& inner) const {
  return contains(inner.lo) && contains(inner.hi);
}

std::int64_t IntBox::index(const Site& s) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * extent(i) + (s[i] - lo[i]);
  return idx;
}

Site IntBox::site(std::int64_t index) const {
  Site s(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const std::int64_t e = extent(i);
    s[i] = lo[i] + index % e;
    index /= e;
  }
  return s;
}

bool operator==(const IntBox& a, const IntBox& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

LongEdge canonicalize_edge(const Point& a, const Point& b) {
  require(a.dim == b.dim, "edge endpoints must share a dimension");
  require(!(a == b), "degenerate edge: endpoints coincide");
  return lex_less(a, b) ? LongEdge{a, b} : LongEdge{b, a};
}

bool edge_less(const LongEdge& x, const LongEdge& y) {
  if (lex_less(x.a, y.a)) return true;
  if (lex_less(y.a, x.a)) return false;
  return lex_less(x.b, y.b);
}

double unit_sphere_measure(int d) {
  if (d == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace lrp
