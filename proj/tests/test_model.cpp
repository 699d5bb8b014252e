#include "doctest.h"
#include "lrp/errors.hpp"
#include "lrp/model.hpp"

using namespace lrp;

namespace {

PathTrace make_trace(std::vector<Point> nodes, std::vector<bool> hops,
                     PathTrace::Kind kind = PathTrace::Kind::kProper) {
  PathTrace t;
  t.kind = kind;
  t.nodes = std::move(nodes);
  t.hop_flags = std::move(hops);
  t.recompute();
  return t;
}

}  // namespace

TEST_CASE("path statistics") {
  const PathTrace t = make_trace({Point{0.0}, Point{1.0}, Point{5.0}, Point{5.5}}, {false, true, false});
  const PathStats s = path_stats(t);
  CHECK(s.length_l1 == doctest::Approx(1.5));
  CHECK(s.hop_count == 1);
  const PathTrace single = make_trace({Point{2.0}}, {});
  CHECK(path_stats(single).length_l1 == 0.0);
  CHECK(path_stats(single).hop_count == 0);
  const PathTrace two_d = make_trace({Point{0.0, 0.0}, Point{3.0, 4.0}}, {false});
  CHECK(path_stats(two_d).length_l1 == doctest::Approx(5.0));
}

TEST_CASE("malformed traces are rejected") {
  PathTrace t;
  t.nodes = {Point{0.0}, Point{1.0}};
  t.hop_flags = {};
  CHECK_THROWS_AS(path_stats(t), InvalidArgument);
  PathTrace gaps;
  gaps.nodes = {Point{0.0}, Point{1.0}, Point{2.0}};
  gaps.hop_flags = {false, false};
  CHECK_THROWS_AS(path_stats(gaps), InvalidArgument);
  const PathTrace walk =
      make_trace({Point{0.0}, Point{1.0}, Point{2.0}}, {false, false}, PathTrace::Kind::kWalk);
  CHECK(path_stats(walk).length_l1 == doctest::Approx(2.0));
}

TEST_CASE("configuration validation") {
  EdgeConfiguration c;
  c.params = ModelParams{};
  c.window = Window::cube(1, 0.0, 10.0);
  c.edges.push_back(canonicalize_edge(Point{8.0}, Point{1.0}));
  CHECK_NOTHROW(c.validate());
  CHECK(c.edges[0].a == Point{1.0});
  c.edges.push_back({Point{5.0}, Point{5.5}});
  CHECK_THROWS_AS(c.validate(), InvariantViolation);
  c.edges.back() = {Point{5.0}, Point{12.0}};
  CHECK_THROWS_AS(c.validate(), InvariantViolation);
  c.edges.back() = {Point{1.0}, Point{4.0}};
  CHECK_THROWS_AS(c.validate(), InvariantViolation);
}

TEST_CASE("box indexing follows lexicographic order") {
  const IntBox b(Site{-1, 2}, Site{1, 4});
  CHECK(b.count() == 9);
  std::int64_t prev = -1;
  for (std::int64_t x = -1; x <= 1; ++x)
    for (std::int64_t y = 2; y <= 4; ++y) {
      const std::int64_t i = b.index(Site{x, y});
      CHECK(i == prev + 1);
      CHECK(b.site(i) == Site{x, y});
      prev = i;
    }
}
