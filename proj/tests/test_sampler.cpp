#include <cmath>
#include <set>

#include "doctest.h"
#include "lrp/errors.hpp"
#include "lrp/sampler.hpp"
#include "lrp/stats.hpp"

using namespace lrp;

TEST_CASE("cube pair mass in one dimension") {
  CHECK(cube_pair_mass(1, Site{2}).mass == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(cube_pair_mass(1, Site{1}).touching());
  for (std::int64_t k = 2; k <= 12; ++k) {
    const double closed = std::log(double(k * k) / double(k * k - 1));
    CHECK(cube_pair_mass_quadrature(1, Site{k}) == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("cube pair mass in higher dimensions") {
  CHECK(cube_pair_mass(2, Site{1, 1}).touching());
  CHECK(cube_pair_mass(3, Site{1, 0, 1}).touching());
  // Invariant under coordinate permutations and sign flips.
  const double a = cube_pair_mass(2, Site{2, 3}).mass;
  CHECK(cube_pair_mass(2, Site{-3, 2}).mass == doctest::Approx(a).epsilon(1e-12));
  CHECK(cube_pair_mass(2, Site{3, -2}).mass == doctest::Approx(a).epsilon(1e-12));
  // Far away the cubes look like points.
  for (int d = 2; d <= 4; ++d) {
    Site k(d);
    k[0] = 40;
    const double m = cube_pair_mass(d, k).mass;
    CHECK(std::isfinite(m));
    CHECK(m == doctest::Approx(std::pow(40.0, -2.0 * d)).epsilon(1e-2));
  }
  Site k4{2, 0, 0, 0};
  const double q = cube_pair_mass_quadrature(4, k4);
  CHECK(q > 0.0);
  CHECK(q == doctest::Approx(cube_pair_mass(4, k4).mass).epsilon(1e-8));
}

TEST_CASE("edge probabilities") {
  ModelParams p;
  CHECK(discrete_edge_prob(p, Site{2}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(discrete_edge_prob(p, Site{1}) == 1.0);
  CHECK(discrete_edge_prob(ModelParams{2, 1.0, 1.0, kInfinity, 0}, Site{1, 1}) == 1.0);
  const double p3 = discrete_edge_prob(p, Site{3});
  CHECK(p3 == doctest::Approx(1.0 - 8.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("fast and naive discrete samplers agree in law") {
  const ModelParams p{2, 1.0, 1.0, kInfinity, 3};
  const IntBox box = IntBox::cube(2, 0, 5);
  std::vector<double> a, b;
  for (int i = 0; i < 400; ++i) {
    const Stream s = derive_stream(3, "law/" + std::to_string(i));
    a.push_back(double(sample_discrete(p, box, s.child("fast")).long_edges.size()));
    b.push_back(double(sample_discrete_naive(p, box, s.child("naive")).long_edges.size()));
  }
  CHECK(ks_two_sample(a, b).p_value > 0.001);
  CHECK(mean(a) == doctest::Approx(mean(b)).epsilon(0.1));
}

TEST_CASE("continuous samples satisfy their invariants") {
  const ModelParams p{2, 2.0, 0.5, 6.0, 9};
  const Window w = Window::cube(2, 0.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const EdgeConfiguration c = sample_continuous(p, w, derive_stream(9, std::to_string(i)));
    CHECK_NOTHROW(c.validate());
    for (const LongEdge& e : c.edges) {
      CHECK(e.scope() >= 0.5);
      CHECK(e.scope() < 6.0);
      CHECK(lex_less(e.a, e.b));
    }
  }
}

TEST_CASE("empty scope range gives no edges") {
  const ModelParams p{1, 5.0, 3.0, kInfinity, 1};
  const EdgeConfiguration c = sample_continuous(p, Window::cube(1, 0.0, 2.0), Stream(1));
  CHECK(c.edges.empty());
}

TEST_CASE("superposition keeps the base edges") {
  const ModelParams p{1, 0.5, 1.0, kInfinity, 4};
  const Window w = Window::cube(1, 0.0, 50.0);
  const EdgeConfiguration base = sample_continuous(p, w, Stream(10));
  const EdgeConfiguration sum = superpose(base, 1.5, Stream(11));
  CHECK(sum.params.beta == doctest::Approx(2.0));
  for (const LongEdge& e : base.edges)
    CHECK(std::find(sum.edges.begin(), sum.edges.end(), e) != sum.edges.end());
  CHECK(std::is_sorted(sum.edges.begin(), sum.edges.end(), edge_less));
}

TEST_CASE("sampling is a function of the seed") {
  const ModelParams p{2, 1.0, 1.0, kInfinity, 5};
  CHECK(sample_discrete(p, IntBox::cube(2, -8, 8), derive_stream(5, "x")) ==
        sample_discrete(p, IntBox::cube(2, -8, 8), derive_stream(5, "x")));
  CHECK(sample_continuous(p, Window::cube(2, 0, 8), derive_stream(5, "y")) ==
        sample_continuous(p, Window::cube(2, 0, 8), derive_stream(5, "y")));
  CHECK_FALSE(sample_continuous(p, Window::cube(2, 0, 8), derive_stream(5, "y")) ==
              sample_continuous(p, Window::cube(2, 0, 8), derive_stream(6, "y")));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(ModelParams({1, 1.0, 0.0, kInfinity, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(ModelParams({1, -1.0, 1.0, kInfinity, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(ModelParams({1, 1.0, 2.0, 2.0, 0}).validate(), InvalidArgument);
}
