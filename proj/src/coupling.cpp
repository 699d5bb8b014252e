#include "lrp/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "lrp/errors.hpp"

namespace lrp {

namespace {

std::int64_t aligned_index(double coord, double cell, const char* what) {
  const double q = coord / cell;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
    throw InvalidArgument(std::string("window ") + what + " is not aligned to the cell lattice");
  return static_cast<std::int64_t>(r);
}

struct SiteLess {
  bool operator()(const Site& a, const Site& b) const {
    return std::lexicographical_compare(a.k.begin(), a.k.begin() + a.dim, b.k.begin(),
                                        b.k.begin() + b.dim);
  }
};

Site to_site(const Point& p) {
  Site s(p.dim);
  for (int m = 0; m < p.dim; ++m) s[m] = std::llround(p[m]);
  return s;
}

bool adjacent(const LatticeGraph& g, const Site& u, const Site& v) {
  const Site diff = v - u;
  if (diff.linf_norm() == 1 && (diff.l1_norm() == 1 || g.touching_implicit)) return true;
  return g.has_long_edge(u, v);
}

}  // namespace

Site cell_of(const Point& p, double cell, const Window& window) {
  Site k(p.dim);
  for (int m = 0; m < p.dim; ++m) {
    const auto lo = static_cast<std::int64_t>(std::llround(window.lo[m] / cell));
    const auto hi = static_cast<std::int64_t>(std::llround(window.hi[m] / cell)) - 1;
    const auto c = static_cast<std::int64_t>(std::floor(p[m] / cell));
    k[m] = std::clamp(c, lo, hi);
  }
  return k;
}

Point cell_center(const Site& k, double cell) {
  Point p(k.dim);
  for (int m = 0; m < k.dim; ++m) p[m] = (static_cast<double>(k[m]) + 0.5) * cell;
  return p;
}

bool CoarseGrained::witness_for(const EdgeConfiguration& config, const Site& u, const Site& v,
                                Point& from, Point& to) const {
  if (!graph.box.contains(u) || !graph.box.contains(v)) return false;
  std::int64_t a = graph.box.index(u), b = graph.box.index(v);
  if (a > b) std::swap(a, b);
  const LatticeEdge key{a, b};
  std::size_t edge = 0;
  const auto it = std::lower_bound(graph.long_edges.begin(), graph.long_edges.end(), key);
  if (it != graph.long_edges.end() && *it == key) {
    edge = witness[static_cast<std::size_t>(it - graph.long_edges.begin())];
  } else {
    const auto t = touching_witness.find(key);
    if (t == touching_witness.end()) return false;
    edge = t->second;
  }
  const LongEdge& e = config.edges.at(edge);
  if (cell_of(e.a, cell, config.window) == u) {
    from = e.a;
    to = e.b;
  } else {
    from = e.b;
    to = e.a;
  }
  return true;
}

CoarseGrained coarse_grain_with_witnesses(const EdgeConfiguration& config, double cell) {
  require(cell > 0.0 && std::isfinite(cell), "cell must be positive");
  const int d = config.params.d;
  require(config.window.dim() == d, "window dimension differs from params.d");
  Site lo(d), hi(d);
  for (int m = 0; m < d; ++m) {
    require(config.window.side(m) >= cell * (1.0 - 1e-9), "cell larger than window");
    lo[m] = aligned_index(config.window.lo[m], cell, "lower corner");
    hi[m] = aligned_index(config.window.hi[m], cell, "upper corner") - 1;
  }
  CoarseGrained cg;
  cg.cell = cell;
  cg.graph.params = config.params;
  cg.graph.box = IntBox(lo, hi);
  cg.graph.touching_implicit = true;
  std::vector<std::pair<LatticeEdge, std::size_t>> found;
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    const LongEdge& e = config.edges[i];
    const Site ka = cell_of(e.a, cell, config.window);
    const Site kb = cell_of(e.b, cell, config.window);
    const Site diff = kb - ka;
    const std::int64_t l1 = diff.l1_norm();
    if (l1 <= 1) continue;
    std::int64_t a = cg.graph.box.index(ka), b = cg.graph.box.index(kb);
    if (a > b) std::swap(a, b);
    if (diff.linf_norm() == 1)
      cg.touching_witness.emplace(LatticeEdge{a, b}, i);
    else
      found.push_back({LatticeEdge{a, b}, i});
  }
  // The first config edge (in canonical order) joining a cube pair is its witness.
  std::sort(found.begin(), found.end());
  cg.graph.long_edges.reserve(found.size());
  cg.witness.reserve(found.size());
  for (std::size_t j = 0; j < found.size(); ++j) {
    if (j > 0 && found[j].first == found[j - 1].first) continue;
    cg.graph.long_edges.push_back(found[j].first);
    cg.witness.push_back(found[j].second);
  }
  return cg;
}

LatticeGraph coarse_grain(const EdgeConfiguration& config, double cell) {
  return coarse_grain_with_witnesses(config, cell).graph;
}

std::vector<Site> visited_cells(const PathTrace& trace, double cell, const Window& window) {
  require(!trace.nodes.empty(), "empty path trace");
  require(trace.hop_flags.size() + 1 == trace.nodes.size(),
          "path trace needs one flag per segment");
  std::vector<Site> cells = {cell_of(trace.nodes.front(), cell, window)};
  auto visit = [&](const Point& p) {
    const Site k = cell_of(p, cell, window);
    if (!(k == cells.back())) cells.push_back(k);
  };
  for (std::size_t i = 0; i < trace.hop_flags.size(); ++i) {
    const Point& p = trace.nodes[i];
    const Point& q = trace.nodes[i + 1];
    if (!trace.hop_flags[i]) {
      std::vector<double> cuts = {0.0, 1.0};
      for (int m = 0; m < p.dim; ++m) {
        if (p[m] == q[m]) continue;
        const double a = std::min(p[m], q[m]) / cell, b = std::max(p[m], q[m]) / cell;
        for (double j = std::floor(a) + 1.0; j < b; j += 1.0)
          cuts.push_back((j * cell - p[m]) / (q[m] - p[m]));
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t c = 1; c < cuts.size(); ++c) {
        if (cuts[c] <= cuts[c - 1]) continue;
        const double t = 0.5 * (cuts[c - 1] + cuts[c]);
        visit(p + t * (q - p));
      }
    }
    visit(q);
  }
  return cells;
}

std::vector<Site> loop_erase(const std::vector<Site>& cells) {
  require(!cells.empty(), "empty cell sequence");
  std::map<Site, std::size_t, SiteLess> last;
  for (std::size_t j = 0; j < cells.size(); ++j) last[cells[j]] = j;
  std::vector<Site> out;
  std::size_t s = last[cells[0]];
  out.push_back(cells[s]);
  while (s + 1 < cells.size()) {
    s = last[cells[s + 1]];
    out.push_back(cells[s]);
  }
  return out;
}

std::vector<Site> skeleton_path(const PathTrace& trace, double cell, const Window& window) {
  return loop_erase(visited_cells(trace, cell, window));
}

PathTrace realize_discrete_path(const CoarseGrained& cg, const std::vector<Site>& path,
                                const EdgeConfiguration& config) {
  require(!path.empty(), "empty lattice path");
  return realize_discrete_path(cg, path, config, cell_center(path.front(), cg.cell),
                               cell_center(path.back(), cg.cell));
}

PathTrace realize_discrete_path(const CoarseGrained& cg, const std::vector<Site>& path,
                                const EdgeConfiguration& config, const Point& x,
                                const Point& y) {
  require(!path.empty(), "empty lattice path");
  require(cell_of(x, cg.cell, config.window) == path.front() &&
              cell_of(y, cg.cell, config.window) == path.back(),
          "path endpoints are not in the cubes of x and y");
  PathTrace t;
  t.kind = PathTrace::Kind::kWalk;
  t.nodes.push_back(x);
  auto step = [&](const Point& p, bool hop) {
    t.nodes.push_back(p);
    t.hop_flags.push_back(hop);
  };
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const Site& u = path[j];
    const Site& v = path[j + 1];
    require(adjacent(cg.graph, u, v), "lattice path steps between non-adjacent sites");
    const Site diff = v - u;
    Point a, b;
    if (diff.l1_norm() > 1 && cg.witness_for(config, u, v, a, b)) {
      if (!(a == t.nodes.back())) step(a, false);
      step(b, true);
    } else if (diff.linf_norm() == 1) {
      step(cell_center(v, cg.cell), false);
    } else {
      throw InvariantViolation("lattice long edge " + to_string(u) + " " + to_string(v) +
                               " has no witnessing config edge");
    }
  }
  step(y, false);
  t.recompute();
  return t;
}

void CouplingReport::merge(const CouplingReport& o) {
  const std::int64_t total = pairs_tested + o.pairs_tested;
  if (total > 0)
    mean_hops = (mean_hops * static_cast<double>(pairs_tested) +
                 o.mean_hops * static_cast<double>(o.pairs_tested)) /
                static_cast<double>(total);
  pairs_tested = total;
  forward_violations += o.forward_violations;
  reverse_violations += o.reverse_violations;
  realization_violations += o.realization_violations;
  skeleton_violations += o.skeleton_violations;
  same_cell_pairs += o.same_cell_pairs;
  max_hops = std::max(max_hops, o.max_hops);
  max_forward_ratio = std::max(max_forward_ratio, o.max_forward_ratio);
  max_reverse_ratio = std::max(max_reverse_ratio, o.max_reverse_ratio);
}

Window window_core(const Window& w) {
  Point lo(w.dim()), hi(w.dim());
  for (int m = 0; m < w.dim(); ++m) {
    lo[m] = w.lo[m] + 0.25 * w.side(m);
    hi[m] = w.hi[m] - 0.25 * w.side(m);
  }
  return Window(lo, hi);
}

CouplingReport coupling_check(const EdgeConfiguration& config, double cell,
                              const std::vector<CouplingPair>& pairs) {
  require(cell > 0.0 && std::isfinite(cell), "cell must be positive");
  const EdgeConfiguration unit = cell == 1.0 ? config : config.scaled(1.0 / cell);
  require(std::abs(unit.params.delta_min - 1.0) <= 1e-9 && std::isinf(unit.params.delta_max),
          "coupling check needs scope range [cell, inf)");
  const int d = unit.params.d;
  const double dd = d;
  const Window core = window_core(unit.window);
  const CoarseGrained cg = coarse_grain_with_witnesses(unit, 1.0);
  const ContinuousMetric metric(unit, unit.window);
  const LatticeMetric lattice(cg.graph);
  std::vector<LongEdge> sorted = unit.edges;
  std::sort(sorted.begin(), sorted.end(), edge_less);

  constexpr double kTol = 1e-9;
  CouplingReport rep;
  double hop_sum = 0.0;
  for (const CouplingPair& pair : pairs) {
    const Point x = (1.0 / cell) * pair.x;
    const Point y = (1.0 / cell) * pair.y;
    require(core.contains(x) && core.contains(y), "coupling pair outside the window core");
    const Site ix = cell_of(x, 1.0, unit.window);
    const Site iy = cell_of(y, 1.0, unit.window);
    if (ix == iy) ++rep.same_cell_pairs;

    const DistanceResult lat = lattice.geodesic(ix, iy);
    const double dhat = lat.value;
    const DistanceResult geo = metric.geodesic(x, y);
    const double dist = geo.value;
    const auto hops = geo.trace.hop_count;

    const double fwd_rhs = 3.0 * dd * dhat + 1.0;
    const double rev_rhs = std::sqrt(dd) * dist + (2.0 * dd + 1.0) * static_cast<double>(hops + 1);
    if (dist > fwd_rhs + kTol) ++rep.forward_violations;
    if (dhat > rev_rhs + kTol) ++rep.reverse_violations;
    rep.max_forward_ratio = std::max(rep.max_forward_ratio, dist / fwd_rhs);
    rep.max_reverse_ratio = std::max(rep.max_reverse_ratio, dhat / rev_rhs);

    // The skeleton of the continuous geodesic must be a self-avoiding path
    // of the coarse graph between the two cubes.
    const std::vector<Site> sk = skeleton_path(geo.trace, 1.0, unit.window);
    bool sk_ok = sk.front() == ix && sk.back() == iy &&
                 static_cast<double>(sk.size() - 1) >= dhat;
    for (std::size_t j = 0; sk_ok && j + 1 < sk.size(); ++j)
      sk_ok = adjacent(cg.graph, sk[j], sk[j + 1]);
    std::vector<Site> uniq = sk;
    std::sort(uniq.begin(), uniq.end(), SiteLess{});
    for (std::size_t j = 1; sk_ok && j < uniq.size(); ++j) sk_ok = !(uniq[j] == uniq[j - 1]);
    if (!sk_ok) ++rep.skeleton_violations;

    // The lattice geodesic realized in the continuum respects the forward
    // bound on its own and only uses genuine config edges.
    std::vector<Site> lpath;
    for (const Point& p : lat.trace.nodes) lpath.push_back(to_site(p));
    const PathTrace real = realize_discrete_path(cg, lpath, unit, x, y);
    bool real_ok = real.length_l1 <= fwd_rhs + kTol && real.length_l1 + kTol >= dist;
    for (std::size_t j = 0; real_ok && j < real.hop_flags.size(); ++j) {
      if (!real.hop_flags[j]) continue;
      const LongEdge e = canonicalize_edge(real.nodes[j], real.nodes[j + 1]);
      real_ok = std::binary_search(sorted.begin(), sorted.end(), e, edge_less);
    }
    if (!real_ok) ++rep.realization_violations;

    ++rep.pairs_tested;
    hop_sum += static_cast<double>(hops);
    rep.max_hops = std::max<std::int64_t>(rep.max_hops, hops);
  }
  if (rep.pairs_tested > 0) rep.mean_hops = hop_sum / static_cast<double>(rep.pairs_tested);
  return rep;
}

}  // namespace lrp
