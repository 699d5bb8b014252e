#include "lrp/model.hpp"

#include <algorithm>
#include <cmath>

#include "lrp/errors.hpp"

namespace lrp {

void ModelParams::validate() const {
  require(d >= 1 && d <= kMaxDim,
          "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive and finite");
  require(std::isfinite(delta_min) && delta_min > 0.0, "delta_min must be positive");
  require(delta_max > delta_min, "delta_max must exceed delta_min");
}

void EdgeConfiguration::validate() const {
  params.validate();
  if (window.dim() != params.d)
    throw InvariantViolation("window dimension differs from params.d");
  for (const auto& e : edges) {
    if (e.a.dim != params.d || e.b.dim != params.d)
      throw InvariantViolation("edge dimension differs from params.d");
    if (!window.contains(e.a) || !window.contains(e.b))
      throw InvariantViolation("edge endpoint outside window: " + to_string(e.a) +
                               " " + to_string(e.b));
    if (!lex_less(e.a, e.b)) throw InvariantViolation("edge not canonical");
    const double s = e.scope();
    if (!(s >= params.delta_min && s < params.delta_max))
      throw InvariantViolation("edge scope outside [delta_min, delta_max)");
  }
  std::vector<Point> ends;
  ends.reserve(2 * edges.size());
  for (const auto& e : edges) {
    ends.push_back(e.a);
    ends.push_back(e.b);
  }
  std::sort(ends.begin(), ends.end(), lex_less);
  for (std::size_t i = 1; i < ends.size(); ++i)
    if (ends[i] == ends[i - 1])
      throw InvariantViolation("two edges share the endpoint " + to_string(ends[i]));
}

EdgeConfiguration EdgeConfiguration::scaled(double r) const {
  require(r > 0.0 && std::isfinite(r), "scale factor must be positive");
  EdgeConfiguration out = *this;
  out.params.delta_min *= r;
  out.params.delta_max *= r;
  out.window = window.scaled(r);
  for (auto& e : out.edges) {
    e.a = r * e.a;
    e.b = r * e.b;
  }
  return out;
}

void LatticeGraph::validate() const {
  if (box.dim() != params.d) throw InvariantViolation("box dimension differs from params.d");
  const std::int64_t n = box.count();
  for (std::size_t i = 0; i < long_edges.size(); ++i) {
    const auto& e = long_edges[i];
    if (!(0 <= e.a && e.a < e.b && e.b < n))
      throw InvariantViolation("lattice edge index out of range or not canonical");
    if (i > 0 && !(long_edges[i - 1] < e))
      throw InvariantViolation("lattice edges not sorted and unique");
    if ((box.site(e.b) - box.site(e.a)).l1_norm() <= 1)
      throw InvariantViolation("lattice long edge has l1 length <= 1");
  }
}

bool LatticeGraph::has_long_edge(const Site& u, const Site& v) const {
  if (!box.contains(u) || !box.contains(v)) return false;
  std::int64_t a = box.index(u), b = box.index(v);
  if (a > b) std::swap(a, b);
  return std::binary_search(long_edges.begin(), long_edges.end(), LatticeEdge{a, b});
}

void PathTrace::recompute() {
  const PathStats s = path_stats(*this);
  length_l1 = s.length_l1;
  hop_count = s.hop_count;
}

PathStats path_stats(const PathTrace& trace) {
  require(!trace.nodes.empty(), "empty path trace");
  require(trace.hop_flags.size() + 1 == trace.nodes.size(),
          "path trace needs one flag per segment");
  PathStats s;
  std::vector<LongEdge> hops;
  for (std::size_t i = 0; i < trace.hop_flags.size(); ++i) {
    const Point& p = trace.nodes[i];
    const Point& q = trace.nodes[i + 1];
    if (trace.hop_flags[i]) {
      ++s.hop_count;
      if (trace.kind == PathTrace::Kind::kProper) {
        require(!(p == q), "hop with coincident endpoints");
        hops.push_back(canonicalize_edge(p, q));
      }
    } else {
      if (trace.kind == PathTrace::Kind::kProper && i > 0 && !trace.hop_flags[i - 1])
        throw InvalidArgument("malformed proper trace: consecutive gaps at segment " +
                              std::to_string(i));
      s.length_l1 += euclidean(p, q);
    }
  }
  if (trace.kind == PathTrace::Kind::kProper) {
    std::sort(hops.begin(), hops.end(), edge_less);
    for (std::size_t i = 1; i < hops.size(); ++i)
      if (hops[i] == hops[i - 1]) throw InvalidArgument("proper trace reuses a hop");
  }
  return s;
}

}  // namespace lrp
