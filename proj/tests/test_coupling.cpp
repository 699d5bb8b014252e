#include "doctest.h"
#include "lrp/coupling.hpp"
#include "lrp/sampler.hpp"

using namespace lrp;

TEST_CASE("loop erasure") {
  const Site k1{0, 0}, k2{1, 0}, k3{0, 1};
  CHECK(loop_erase({k1, k2, k1, k3}) == std::vector<Site>{k1, k3});
  CHECK(loop_erase({k1}) == std::vector<Site>{k1});
  CHECK(loop_erase({k1, k2, k3, k2, k1}) == std::vector<Site>{k1});
}

TEST_CASE("cells are half open except at the upper face") {
  const Window w = Window::cube(1, 0.0, 4.0);
  CHECK(cell_of(Point{1.0}, 1.0, w) == Site{1});
  CHECK(cell_of(Point{0.999}, 1.0, w) == Site{0});
  CHECK(cell_of(Point{4.0}, 1.0, w) == Site{3});
  CHECK(cell_center(Site{2}, 1.0) == Point{2.5});
}

TEST_CASE("coarse graining joins the cubes of each edge") {
  EdgeConfiguration c;
  c.params = ModelParams{1, 1.0, 1.0, kInfinity, 0};
  c.window = Window::cube(1, 0.0, 8.0);
  c.edges = {canonicalize_edge(Point{0.5}, Point{6.2}), canonicalize_edge(Point{0.7}, Point{6.9}),
             canonicalize_edge(Point{2.1}, Point{3.9})};
  const CoarseGrained cg = coarse_grain_with_witnesses(c, 1.0);
  // Cubes 2 and 3 are nearest neighbors already; two edges share cubes 0, 6.
  REQUIRE(cg.graph.long_edges.size() == 1);
  CHECK(cg.graph.has_long_edge(Site{0}, Site{6}));
  CHECK(cg.graph.has_long_edge(Site{2}, Site{3}) == false);
  CHECK(cg.witness[0] == 0);
  Point from, to;
  CHECK(cg.witness_for(c, Site{6}, Site{0}, from, to));
  CHECK(from == Point{6.2});
  CHECK(to == Point{0.5});
}

TEST_CASE("coupling inequalities without edges") {
  EdgeConfiguration c;
  c.params = ModelParams{1, 1.0, 1.0, kInfinity, 0};
  c.window = Window::cube(1, 0.0, 16.0);
  const CouplingReport r = coupling_check(c, 1.0, {{Point{4.2}, Point{11.7}}, {Point{5.0}, Point{9.5}}});
  CHECK(r.pairs_tested == 2);
  CHECK(r.clean());
  CHECK(r.max_hops == 0);
}

TEST_CASE("coupling inequalities on samples") {
  for (int d = 1; d <= 2; ++d) {
    const Window w = Window::cube(d, 0.0, d == 1 ? 64.0 : 16.0);
    const EdgeConfiguration c =
        sample_continuous(ModelParams{d, 1.0, 1.0, kInfinity, 2}, w, Stream(17 + d));
    Stream s(3);
    const Window core = window_core(w);
    std::vector<CouplingPair> pairs;
    while (pairs.size() < 40) {
      Point x(d), y(d);
      for (int m = 0; m < d; ++m) {
        x[m] = s.uniform(core.lo[m], core.hi[m]);
        y[m] = s.uniform(core.lo[m], core.hi[m]);
      }
      if (!(cell_of(x, 1.0, w) == cell_of(y, 1.0, w))) pairs.push_back({x, y});
    }
    CHECK(coupling_check(c, 1.0, pairs).clean());
  }
}

TEST_CASE("realized paths use genuine edges") {
  const Window w = Window::cube(1, 0.0, 32.0);
  const EdgeConfiguration c = sample_continuous(ModelParams{1, 2.0, 1.0, kInfinity, 0}, w, Stream(8));
  const CoarseGrained cg = coarse_grain_with_witnesses(c, 1.0);
  const DistanceResult g = bfs_geodesic(cg.graph, Site{8}, Site{24});
  std::vector<Site> cells;
  for (const Point& p : g.trace.nodes) cells.push_back(Site{static_cast<std::int64_t>(p[0])});
  const PathTrace t = realize_discrete_path(cg, cells, c);
  CHECK(t.front() == Point{8.5});
  CHECK(t.back() == Point{24.5});
  for (std::size_t i = 0; i < t.segments(); ++i)
    if (t.hop_flags[i])
      CHECK(std::find(c.edges.begin(), c.edges.end(), canonicalize_edge(t.nodes[i], t.nodes[i + 1])) !=
            c.edges.end());
}
