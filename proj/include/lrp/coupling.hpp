#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "lrp/metric.hpp"
#include "lrp/model.hpp"

namespace lrp {

/// A lattice sample obtained by identifying side-`cell` cubes of a
/// continuous configuration with lattice sites, together with one config
/// edge witnessing each non-nearest-neighbor lattice adjacency.
struct CoarseGrained {
  LatticeGraph graph;
  double cell = 1.0;
  /// Index into the config's edges, parallel to graph.long_edges.
  std::vector<std::size_t> witness;
  /// Witnesses for touching (implicit) adjacencies that happen to carry an
  /// edge; keyed by the canonical lattice pair.
  std::map<LatticeEdge, std::size_t> touching_witness;

  /// Config edge realizing the adjacency u -> v, oriented so that `from`
  /// lies in u's cube; returns false if no edge joins the two cubes.
  bool witness_for(const EdgeConfiguration& config, const Site& u, const Site& v,
                   Point& from, Point& to) const;
};

/// Lattice site of the half-open cube [k, k+1) * cell containing p. Points on
/// the window's upper face are assigned to the last cube.
Site cell_of(const Point& p, double cell, const Window& window);
Point cell_center(const Site& k, double cell);

/// Cubes become sites; i ~ j iff nearest neighbors, touching, or some config
/// edge joins cube i to cube j. The window must be a union of cubes of the
/// lattice cell * Z^d.
CoarseGrained coarse_grain_with_witnesses(const EdgeConfiguration& config, double cell);
LatticeGraph coarse_grain(const EdgeConfiguration& config, double cell);

/// Sequence of cubes visited by a trace: gaps contribute every cube they
/// cross, hops only their two endpoints' cubes. Consecutive repeats removed.
std::vector<Site> visited_cells(const PathTrace& trace, double cell, const Window& window);

/// Backward loop erasure: keep the last visit to the first cube, continue
/// from the cube right after it, and so on until the final cube.
std::vector<Site> loop_erase(const std::vector<Site>& cells);

std::vector<Site> skeleton_path(const PathTrace& trace, double cell, const Window& window);

/// Continuous path from x through the cubes of `path` to y. A lattice long
/// edge is traversed by its witness edge; a step without a witness is a
/// straight gap to the center of the next cube. Defaults: cube centers.
PathTrace realize_discrete_path(const CoarseGrained& cg, const std::vector<Site>& path,
                                const EdgeConfiguration& config);
PathTrace realize_discrete_path(const CoarseGrained& cg, const std::vector<Site>& path,
                                const EdgeConfiguration& config, const Point& x,
                                const Point& y);

struct CouplingPair {
  Point x;
  Point y;
};

struct CouplingReport {
  std::int64_t pairs_tested = 0;
  /// d(x, y) > 3d * dhat + 1 in unit-cell coordinates.
  std::int64_t forward_violations = 0;
  /// dhat > sqrt(d) * d(x, y) + (2d + 1)(h(P) + 1).
  std::int64_t reverse_violations = 0;
  /// Realized path failed its own length bound or used a foreign edge.
  std::int64_t realization_violations = 0;
  /// Skeleton path was not a self-avoiding path of the coarse graph.
  std::int64_t skeleton_violations = 0;
  std::int64_t same_cell_pairs = 0;
  double mean_hops = 0.0;
  std::int64_t max_hops = 0;
  /// Largest observed ratios of left to right side of each inequality.
  double max_forward_ratio = 0.0;
  double max_reverse_ratio = 0.0;

  bool clean() const {
    return forward_violations == 0 && reverse_violations == 0 &&
           realization_violations == 0 && skeleton_violations == 0;
  }
  void merge(const CouplingReport& o);
};

/// Inner half of the window (same center, half the side).
Window window_core(const Window& w);

/// Checks both coupling inequalities for each pair. The config is rescaled by
/// 1 / cell so the unit-scope model applies; its scope range must then be
/// [1, inf). Pairs must lie in the window core.
CouplingReport coupling_check(const EdgeConfiguration& config, double cell,
                              const std::vector<CouplingPair>& pairs);

}  // namespace lrp
