#include <cmath>

#include "doctest.h"
#include "lrp/errors.hpp"
#include "lrp/metric.hpp"
#include "lrp/sampler.hpp"

using namespace lrp;

namespace {

EdgeConfiguration config_1d(double lo, double hi, std::vector<std::pair<double, double>> edges) {
  EdgeConfiguration c;
  c.params = ModelParams{1, 1.0, 1e-9, kInfinity, 0};
  c.window = Window::cube(1, lo, hi);
  for (auto [a, b] : edges) c.edges.push_back(canonicalize_edge(Point{a}, Point{b}));
  return c;
}

Point rand_point(const Window& w, Stream& s) {
  Point p(w.dim());
  for (int m = 0; m < w.dim(); ++m) p[m] = s.uniform(w.lo[m], w.hi[m]);
  return p;
}

}  // namespace

TEST_CASE("no edges gives the Euclidean distance") {
  const EdgeConfiguration c = config_1d(0, 10, {});
  const ContinuousMetric m(c, c.window);
  CHECK(m.distance(Point{1.5}, Point{7.25}) == doctest::Approx(5.75).epsilon(1e-15));
  CHECK(m.distance(Point{3.0}, Point{3.0}) == 0.0);
}

TEST_CASE("single edge formula") {
  const EdgeConfiguration c = config_1d(0, 10, {{2, 7}});
  const ContinuousMetric m(c, c.window);
  Stream s(4);
  for (int i = 0; i < 200; ++i) {
    const double x = s.uniform(0, 10), y = s.uniform(0, 10);
    const double want = std::min({std::abs(x - y), std::abs(x - 2) + std::abs(7 - y),
                                  std::abs(x - 7) + std::abs(2 - y)});
    CHECK(m.distance(Point{x}, Point{y}) == doctest::Approx(want).epsilon(1e-12));
  }
  const DistanceResult g = m.geodesic(Point{0.0}, Point{10.0});
  CHECK(g.value == doctest::Approx(5.0));
  CHECK(g.trace.hop_count == 1);
  CHECK(g.trace.nodes.size() == 4);
}

TEST_CASE("edges outside the domain are ignored") {
  const EdgeConfiguration c = config_1d(0, 10, {{1, 9}});
  const ContinuousMetric full(c, c.window);
  const ContinuousMetric sub(c, Window::cube(1, 0.0, 5.0));
  CHECK(full.distance(Point{1.0}, Point{4.0}) == doctest::Approx(3.0));
  CHECK(sub.distance(Point{0.0}, Point{5.0}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(sub.distance(Point{0.0}, Point{6.0}), InvalidArgument);
}

TEST_CASE("engines agree with Floyd-Warshall") {
  for (int i = 0; i < 60; ++i) {
    Stream s = derive_stream(21, std::to_string(i));
    const int d = 1 + i % 2;
    const Window w = Window::cube(d, 0.0, 6.0);
    EdgeConfiguration c;
    c.params = ModelParams{d, 1.0, 1e-9, kInfinity, 0};
    c.window = w;
    const int m = static_cast<int>(s.below(20));
    for (int e = 0; e < m; ++e) c.edges.push_back(canonicalize_edge(rand_point(w, s), rand_point(w, s)));
    const ContinuousMetric bucket(c, w);
    const ContinuousMetric dense(c, w, MetricOptions{0.0, kInfinity, Relaxation::kDense});
    for (int q = 0; q < 5; ++q) {
      const Point x = rand_point(w, s), y = rand_point(w, s);
      const double ref = brute_force_distance(c, x, y);
      CHECK(bucket.distance(x, y) == doctest::Approx(ref).epsilon(1e-12));
      CHECK(dense.distance(x, y) == doctest::Approx(ref).epsilon(1e-12));
      const DistanceResult g = bucket.geodesic(x, y);
      const PathStats st = path_stats(g.trace);
      CHECK(st.length_l1 == doctest::Approx(g.value).epsilon(1e-12));
    }
    std::vector<Point> targets;
    for (int q = 0; q < 10; ++q) targets.push_back(rand_point(w, s));
    const Point src = rand_point(w, s);
    const std::vector<double> all = bucket.distances_from(src, targets);
    for (int q = 0; q < 10; ++q)
      CHECK(all[q] == doctest::Approx(brute_force_distance(c, src, targets[q])).epsilon(1e-12));
  }
}

TEST_CASE("scope restriction only removes edges") {
  const EdgeConfiguration c = config_1d(0, 20, {{1, 3}, {4, 15}});
  const ContinuousMetric all(c, c.window);
  const ContinuousMetric longer(c, c.window, MetricOptions{5.0, kInfinity, Relaxation::kBucketed});
  CHECK(all.distance(Point{0.0}, Point{16.0}) == doctest::Approx(3.0));
  CHECK(longer.distance(Point{0.0}, Point{16.0}) == doctest::Approx(5.0));
}

TEST_CASE("ball field reads zero at the source cell") {
  const EdgeConfiguration c = config_1d(0, 10, {{2, 7}});
  const DistanceField f = continuous_ball_field(c, Point{2.5}, c.window, 1.0);
  CHECK(f.cell_count() == 10);
  CHECK(f.values[2] == 0.0);
  CHECK(f.values[7] == doctest::Approx(0.5 + 0.5));
}

TEST_CASE("lattice breadth-first search example") {
  LatticeGraph g;
  g.params = ModelParams{};
  g.box = IntBox::cube(1, 0, 9);
  g.long_edges.push_back({0, 9});
  const LatticeMetric m(g);
  CHECK(m.distance(Site{0}, Site{8}) == 2);
  const DistanceResult r = m.geodesic(Site{0}, Site{8});
  REQUIRE(r.trace.nodes.size() == 3);
  CHECK(r.trace.nodes[1] == Point{9.0});
  CHECK(r.trace.hop_count == 1);
  CHECK(r.value == 2.0);
}

TEST_CASE("lattice distances without long edges are taxicab") {
  LatticeGraph g;
  g.params = ModelParams{2, 1.0, 1.0, kInfinity, 0};
  g.box = IntBox::cube(2, -5, 5);
  g.touching_implicit = false;
  const LatticeMetric m(g);
  CHECK(m.distance(Site{0, 0}, Site{3, -4}) == 7);
  g.touching_implicit = true;
  CHECK(LatticeMetric(g).distance(Site{0, 0}, Site{3, -4}) == 4);
  const DistanceField f = bfs_distance(g, Site{0, 0});
  CHECK(f.values[static_cast<std::size_t>(g.box.index(Site{5, 5}))] == 5.0);
}
