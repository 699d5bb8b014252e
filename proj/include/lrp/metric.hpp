#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

/// Raster of distances from `source`, evaluated at cell centers.
struct DistanceField {
  Window window;
  double resolution = 1.0;
  std::array<std::int64_t, kMaxDim> shape{};
  Point source;
  /// Row-major, last axis fastest.
  std::vector<double> values;

  int dim() const { return window.dim(); }
  std::int64_t cell_count() const;
  Point cell_center(std::int64_t index) const;
  std::int64_t cell_of(const Point& p) const;
};

struct DistanceResult {
  double value = 0.0;
  PathTrace trace;
};

enum class Relaxation {
  /// Lazy relaxation over a uniform bucket grid, visited in shells of
  /// increasing Chebyshev radius around each settled endpoint.
  kBucketed,
  /// Relax every unsettled edge on each settle; O(M^2).
  kDense,
};

struct MetricOptions {
  /// Only edges with scope in [scope_min, scope_max) are usable, on top of
  /// the configuration's own scope window.
  double scope_min = 0.0;
  double scope_max = kInfinity;
  Relaxation relaxation = Relaxation::kBucketed;
};

/// Shortest-path engine for d_{(delta, delta')} on a configuration: gaps cost
/// their Euclidean length, hops along a long edge cost nothing. Only edges with
/// both endpoints in `domain` are used and paths stay in the (convex) domain.
///
/// The two endpoints of an edge are contracted into one node, so the search
/// has no zero-weight arcs. No Euclidean A* heuristic is used: hops undercut
/// the straight-line distance, so it would not be admissible.
///
/// Immutable after construction; queries are safe to run concurrently.
class ContinuousMetric {
 public:
  ContinuousMetric(const EdgeConfiguration& config, const Window& domain,
                   MetricOptions options = {});
  ~ContinuousMetric();
  ContinuousMetric(ContinuousMetric&&) noexcept;
  ContinuousMetric& operator=(ContinuousMetric&&) noexcept;

  const Window& domain() const;
  std::size_t edge_count() const;

  double distance(const Point& x, const Point& y) const;
  DistanceResult geodesic(const Point& x, const Point& y) const;
  /// Exact distances from `source` to each target, from one full search.
  std::vector<double> distances_from(const Point& source,
                                     std::span<const Point> targets) const;
  DistanceField ball_field(const Point& source, double resolution) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DistanceResult continuous_distance(const EdgeConfiguration& config, const Point& x,
                                   const Point& y, const Window& domain,
                                   MetricOptions options = {});

DistanceField continuous_ball_field(const EdgeConfiguration& config, const Point& source,
                                    const Window& domain, double resolution);

/// Distance inside `sub` using only edges with both endpoints in `sub`.
DistanceResult internal_distance(const EdgeConfiguration& config, const Point& x,
                                 const Point& y, const Window& sub);

/// Reference value by Floyd-Warshall over {x, y} and all edge endpoints.
/// Limited to 64 endpoints.
double brute_force_distance(const EdgeConfiguration& config, const Point& x, const Point& y);

/// Breadth-first chemical distance on a lattice sample; every edge costs 1.
/// Paths are confined to the sample's box.
class LatticeMetric {
 public:
  explicit LatticeMetric(const LatticeGraph& graph);

  const IntBox& box() const { return box_; }
  /// Distances from `source` to every site, indexed by box.index(); -1 marks
  /// unreachable sites.
  std::vector<std::int32_t> distances_from(const Site& source) const;
  void distances_from(std::int64_t source, std::vector<std::int32_t>& dist,
                      std::vector<std::int64_t>& queue) const;
  std::int64_t distance(const Site& u, const Site& v) const;
  /// Shortest path from u to v. Each site steps back to its lexicographically
  /// smallest predecessor, so the result is deterministic.
  DistanceResult geodesic(const Site& u, const Site& v) const;

  template <class F>
  void for_each_neighbor(std::int64_t v, F&& f) const;

 private:
  IntBox box_;
  int d_;
  std::vector<Site> local_offsets_;
  std::vector<std::int64_t> adj_start_;
  std::vector<std::int64_t> adj_;
};

DistanceField bfs_distance(const LatticeGraph& graph, const Site& source);
DistanceResult bfs_geodesic(const LatticeGraph& graph, const Site& u, const Site& v);

template <class F>
void LatticeMetric::for_each_neighbor(std::int64_t v, F&& f) const {
  const Site s = box_.site(v);
  for (const Site& off : local_offsets_) {
    bool inside = true;
    std::int64_t delta = 0;
    for (int m = 0; m < d_; ++m) {
      const std::int64_t c = s[m] + off[m];
      if (c < box_.lo[m] || c > box_.hi[m]) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    for (int m = 0; m < d_; ++m) delta = delta * box_.extent(m) + off[m];
    f(v + delta);
  }
  for (std::int64_t i = adj_start_[static_cast<std::size_t>(v)];
       i < adj_start_[static_cast<std::size_t>(v) + 1]; ++i)
    f(adj_[static_cast<std::size_t>(i)]);
}

}  // namespace lrp
