#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lrp/geometry.hpp"

namespace lrp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Parameters shared by every sample: dimension, coupling beta, the scope
/// window [delta_min, delta_max) of usable long edges, and the master seed.
struct ModelParams {
  int d = 1;
  double beta = 1.0;
  double delta_min = 1.0;
  double delta_max = kInfinity;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// A realized continuous sample: the long edges with both endpoints in
/// `window` and scope in [delta_min, delta_max).
struct EdgeConfiguration {
  ModelParams params;
  Window window;
  std::vector<LongEdge> edges;
  /// Labels of the random streams consumed to build this sample, in order.
  std::vector<std::string> seed_trace;

  /// Throws InvariantViolation if an endpoint leaves the window, a scope is
  /// out of range, an edge is not canonical, or two edges share an endpoint.
  void validate() const;

  /// Copy with every coordinate multiplied by r (scope window scaled too).
  EdgeConfiguration scaled(double r) const;

  friend bool operator==(const EdgeConfiguration&, const EdgeConfiguration&) = default;
};

/// Long edge of a lattice sample, stored as linear indices into the box with
/// a < b.
struct LatticeEdge {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend auto operator<=>(const LatticeEdge&, const LatticeEdge&) = default;
};

/// A realized discrete sample on a finite box of Z^d. Nearest-neighbor edges
/// are always present. When `touching_implicit` is set, every pair of sites
/// at l-infinity distance 1 is joined as well; those pairs have connection
/// probability one because their cube-pair integral diverges (d >= 2).
struct LatticeGraph {
  ModelParams params;
  IntBox box;
  std::vector<LatticeEdge> long_edges;
  bool touching_implicit = true;

  void validate() const;
  Site site_a(const LatticeEdge& e) const { return box.site(e.a); }
  Site site_b(const LatticeEdge& e) const { return box.site(e.b); }
  bool has_long_edge(const Site& u, const Site& v) const;

  friend bool operator==(const LatticeGraph&, const LatticeGraph&) = default;
};

/// Alternating record of gaps (straight segments, cost = Euclidean length)
/// and hops (long edges, cost 0).
struct PathTrace {
  enum class Kind {
    /// Geodesic in the continuous metric: hops and gaps alternate and no
    /// long edge is used twice.
    kProper,
    /// Lattice walk or polyline realization: consecutive gaps allowed.
    kWalk,
  };

  Kind kind = Kind::kProper;
  std::vector<Point> nodes;
  /// hop_flags[i] is set iff segment nodes[i] -> nodes[i+1] is a hop.
  std::vector<bool> hop_flags;
  double length_l1 = 0.0;
  std::int64_t hop_count = 0;

  std::size_t segments() const { return hop_flags.size(); }
  const Point& front() const { return nodes.front(); }
  const Point& back() const { return nodes.back(); }

  /// Recompute length_l1 and hop_count from the segments.
  void recompute();
};

struct PathStats {
  double length_l1 = 0.0;
  std::int64_t hop_count = 0;
};

/// Recomputes (||P||_1, h(P)) from the segments. Throws InvalidArgument on a
/// malformed trace, including consecutive gaps in a proper trace.
PathStats path_stats(const PathTrace& trace);

}  // namespace lrp
