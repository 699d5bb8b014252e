#include <cmath>
#include <functional>

#include "doctest.h"
#include "lrp/errors.hpp"
#include "lrp/estimators.hpp"
#include "lrp/metric.hpp"
#include "lrp/sampler.hpp"
#include "lrp/stats.hpp"

using namespace lrp;

namespace {

MedianTable synthetic(double scale, double theta) {
  MedianTable t;
  t.params = ModelParams{};
  for (std::int64_t n = 8; n <= 1024; n *= 2) {
    t.n_values.push_back(n);
    t.medians.push_back(scale * std::pow(double(n), theta));
  }
  return t;
}

// Every self-avoiding walk, found by brute force over neighbor lists.
std::vector<std::int64_t> naive_paths(const LatticeGraph& g, const Site& origin, int m) {
  const LatticeMetric metric(g);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::int64_t> path = {g.box.index(origin)};
  std::function<void()> go = [&] {
    ++counts[path.size() - 1];
    if (static_cast<int>(path.size()) > m) return;
    metric.for_each_neighbor(path.back(), [&](std::int64_t w) {
      if (std::find(path.begin(), path.end(), w) != path.end()) return;
      path.push_back(w);
      go();
      path.pop_back();
    });
  };
  go();
  return counts;
}

// Every ordered sequence of distinct oriented edges with total gap <= t.
std::vector<std::int64_t> naive_hops(const EdgeConfiguration& c, const Point& origin, double t) {
  std::vector<std::int64_t> counts(1, 0);
  std::vector<char> used(c.edges.size(), 0);
  std::function<void(const Point&, double, std::size_t)> go = [&](const Point& p, double left,
                                                                  std::size_t hops) {
    if (counts.size() <= hops) counts.resize(hops + 1, 0);
    ++counts[hops];
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
      if (used[e] || c.edges[e].scope() < 1.0) continue;
      for (int side = 0; side < 2; ++side) {
        const Point& in = side ? c.edges[e].b : c.edges[e].a;
        const Point& out = side ? c.edges[e].a : c.edges[e].b;
        const double gap = euclidean(p, in);
        if (gap > left) continue;
        used[e] = 1;
        go(out, left - gap, hops + 1);
        used[e] = 0;
      }
    }
  };
  go(origin, t, 0);
  return counts;
}

}  // namespace

TEST_CASE("theta fit recovers an exact power law") {
  CHECK(fit_theta(synthetic(1.0, 0.7)).theta_hat == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit_theta(synthetic(3.5, 0.7)).theta_hat == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(fit_theta(synthetic(2.0, 0.0)), FitFailure);
}

TEST_CASE("stripped medians are taxicab") {
  MedianOptions opt;
  opt.strip_long_edges = true;
  const MedianTable t =
      estimate_medians(ModelParams{2, 1.0, 1.0, kInfinity, 0}, {2, 4, 8}, 3, ModelKind::kDiscrete, opt);
  CHECK(t.medians == std::vector<double>{4.0, 8.0, 16.0});
}

TEST_CASE("statistics helpers") {
  CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
  CHECK(variance(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0));
  CHECK(chi_square_sf(3.84145882069412, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.3580986393225505) == doctest::Approx(0.05).epsilon(1e-6));
  const std::vector<double> a = {1, 2, 3, 4, 5};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == doctest::Approx(1.0));
  const LinearFit f = least_squares(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}

TEST_CASE("self-avoiding path counts") {
  LatticeGraph empty;
  empty.params = ModelParams{2, 1.0, 1.0, kInfinity, 0};
  empty.box = IntBox::cube(2, -4, 4);
  empty.touching_implicit = false;
  const auto c = count_self_avoiding_paths(empty, Site{0, 0}, 3);
  CHECK(c[0] == 1);
  CHECK(c[1] == 4);
  CHECK(c[2] == 12);
  CHECK(c[3] == 36);
  for (int i = 0; i < 10; ++i) {
    const LatticeGraph g = sample_discrete(ModelParams{1, 1.0, 1.0, kInfinity, 0},
                                           IntBox::cube(1, -12, 12), Stream(100 + i));
    CHECK(count_self_avoiding_paths(g, Site{0}, 5) == naive_paths(g, Site{0}, 5));
  }
}

TEST_CASE("branching constant") {
  const BranchingConstant b = discrete_branching_constant(ModelParams{}, 1 << 16);
  // 2 + 2 * sum_{k >= 2} (1 - (k^2 - 1) / k^2) = 2 + 2 * (pi^2 / 6 - 1).
  const double exact = 2.0 + 2.0 * (M_PI * M_PI / 6.0 - 1.0);
  CHECK(b.value >= exact);
  CHECK(b.partial <= exact);
  CHECK(b.value == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("hop classes match brute force") {
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    const EdgeConfiguration c = sample_continuous(ModelParams{d, 0.7, 1.0, kInfinity, 0},
                                                  Window::cube(d, -4.0, 4.0), Stream(300 + i));
    if (c.edges.size() > 9) continue;
    CHECK(count_hop_classes(c, Point(d), 3.0) == naive_hops(c, Point(d), 3.0));
  }
}

TEST_CASE("hop constant") {
  // d = 1: sigma_0 = 2, c_1 = 4, so c_hat = 4 beta.
  CHECK(hop_constant(ModelParams{1, 0.5, 1.0, kInfinity, 0}) == doctest::Approx(2.0));
  // d = 2: c_2 = (2 pi)^2 / 2, c_hat = sqrt(beta * 2 pi^2).
  CHECK(hop_constant(ModelParams{2, 1.0, 1.0, kInfinity, 0}) ==
        doctest::Approx(std::sqrt(2.0 * M_PI * M_PI)));
}

TEST_CASE("coupled lattice samples only gain edges") {
  const auto gs = coupled_lattice_samples(1, {0.1, 1.0, 5.0}, IntBox::cube(1, -64, 64), Stream(2));
  REQUIRE(gs.size() == 3);
  for (std::size_t b = 1; b < gs.size(); ++b) {
    CHECK(std::includes(gs[b].long_edges.begin(), gs[b].long_edges.end(),
                        gs[b - 1].long_edges.begin(), gs[b - 1].long_edges.end()));
    CHECK(gs[b].long_edges.size() >= gs[b - 1].long_edges.size());
  }
}

TEST_CASE("diameter of nested boxes") {
  const LatticeGraph g = sample_discrete(ModelParams{}, IntBox::cube(1, 0, 40), Stream(5));
  const std::int64_t whole = lattice_diameter(g);
  const LatticeGraph sub = restrict_graph(g, IntBox::cube(1, 0, 20));
  CHECK(lattice_diameter(sub) <= 20);
  CHECK(whole <= 40);
  CHECK(whole >= LatticeMetric(g).distance(Site{0}, Site{40}));
}

TEST_CASE("estimates are reproducible") {
  const ModelParams p{1, 1.0, 1.0, kInfinity, 77};
  const MedianTable a = estimate_medians(p, {4, 8, 16, 32}, 20, ModelKind::kDiscrete);
  const MedianTable b = estimate_medians(p, {4, 8, 16, 32}, 20, ModelKind::kDiscrete);
  CHECK(a.samples == b.samples);
  const MedianTable c = estimate_medians(p, {4, 8, 16, 32}, 20, ModelKind::kContinuous);
  const MedianTable e = estimate_medians(p, {4, 8, 16, 32}, 20, ModelKind::kContinuous);
  CHECK(c.samples == e.samples);
}
