#include "lrp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "lrp/errors.hpp"

namespace lrp {

std::int64_t DistanceField::cell_count() const {
  std::int64_t n = 1;
  for (int m = 0; m < dim(); ++m) n *= shape[m];
  return n;
}

Point DistanceField::cell_center(std::int64_t index) const {
  Point p(dim());
  for (int m = dim() - 1; m >= 0; --m) {
    const std::int64_t i = index % shape[m];
    index /= shape[m];
    p[m] = std::min(window.hi[m], window.lo[m] + (static_cast<double>(i) + 0.5) * resolution);
  }
  return p;
}

std::int64_t DistanceField::cell_of(const Point& p) const {
  std::int64_t idx = 0;
  for (int m = 0; m < dim(); ++m) {
    auto i = static_cast<std::int64_t>(std::floor((p[m] - window.lo[m]) / resolution));
    i = std::clamp<std::int64_t>(i, 0, shape[m] - 1);
    idx = idx * shape[m] + i;
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Continuous metric

namespace {

constexpr std::int64_t kSourceEmitter = -1;

struct QueueItem {
  double key;
  std::uint8_t kind;  // 0 = settle cluster, 1 = ring event
  std::uint32_t id;
  std::uint32_t shell;

  bool operator>(const QueueItem& o) const {
    if (key != o.key) return key > o.key;
    if (kind != o.kind) return kind > o.kind;
    if (id != o.id) return id > o.id;
    return shell > o.shell;
  }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

}  // namespace

struct ContinuousMetric::Impl {
  Window domain;
  int d = 1;
  MetricOptions options;
  std::size_t edges = 0;
  std::vector<double> pts;  // endpoint 2e and 2e+1 of edge e, d coords each

  std::array<std::int64_t, kMaxDim> grid{};
  std::array<std::int64_t, kMaxDim> stride{};
  double h = 1.0;
  std::vector<std::uint32_t> bucket_start;
  std::vector<std::uint32_t> bucket_items;
  std::vector<std::uint32_t> point_bucket;

  // Static kd-tree over endpoints, used to evaluate distances at arbitrary
  // targets once every edge has its final distance.
  struct KdNode {
    std::array<double, kMaxDim> lo{}, hi{};
    std::uint32_t begin = 0, end = 0;
    std::int32_t left = -1, right = -1;
  };
  std::vector<KdNode> kd;
  std::vector<std::uint32_t> kd_perm;

  std::size_t points() const { return 2 * edges; }

  Point point(std::size_t i) const {
    Point p(d);
    for (int m = 0; m < d; ++m) p[m] = pts[i * d + m];
    return p;
  }

  double dist(std::size_t i, const Point& q) const {
    double s = 0.0;
    for (int m = 0; m < d; ++m) {
      const double t = pts[i * d + m] - q[m];
      s += t * t;
    }
    return std::sqrt(s);
  }

  std::int64_t bucket_axis(double c, int m) const {
    auto b = static_cast<std::int64_t>(std::floor((c - domain.lo[m]) / h));
    return std::clamp<std::int64_t>(b, 0, grid[m] - 1);
  }

  void build_grid() {
    const double vol = domain.volume();
    const double target_buckets = std::max<double>(1.0, static_cast<double>(points()) / 2.0);
    h = std::pow(vol / target_buckets, 1.0 / d);
    double total = 1.0;
    for (int m = 0; m < d; ++m) {
      h = std::max(h, domain.side(m) / 65536.0);
    }
    for (int m = 0; m < d; ++m) {
      grid[m] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(domain.side(m) / h)));
      total *= static_cast<double>(grid[m]);
    }
    // Very thin domains can produce too many buckets; coarsen uniformly.
    while (total > 4.0 * target_buckets + 64.0) {
      h *= 1.5;
      total = 1.0;
      for (int m = 0; m < d; ++m) {
        grid[m] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(domain.side(m) / h)));
        total *= static_cast<double>(grid[m]);
      }
    }
    std::int64_t s = 1;
    for (int m = d - 1; m >= 0; --m) {
      stride[m] = s;
      s *= grid[m];
    }
    const auto nb = static_cast<std::size_t>(s);
    point_bucket.resize(points());
    std::vector<std::uint32_t> count(nb + 1, 0);
    for (std::size_t i = 0; i < points(); ++i) {
      std::int64_t b = 0;
      for (int m = 0; m < d; ++m) b += bucket_axis(pts[i * d + m], m) * stride[m];
      point_bucket[i] = static_cast<std::uint32_t>(b);
      ++count[static_cast<std::size_t>(b) + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());
    bucket_start = count;
    bucket_items.resize(points());
    std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
    for (std::size_t i = 0; i < points(); ++i)
      bucket_items[fill[point_bucket[i]]++] = static_cast<std::uint32_t>(i);
  }

  std::int32_t build_kd(std::uint32_t begin, std::uint32_t end) {
    KdNode node;
    node.begin = begin;
    node.end = end;
    for (int m = 0; m < d; ++m) {
      node.lo[m] = kInfinity;
      node.hi[m] = -kInfinity;
    }
    for (std::uint32_t i = begin; i < end; ++i)
      for (int m = 0; m < d; ++m) {
        const double c = pts[kd_perm[i] * d + m];
        node.lo[m] = std::min(node.lo[m], c);
        node.hi[m] = std::max(node.hi[m], c);
      }
    const auto id = static_cast<std::int32_t>(kd.size());
    kd.push_back(node);
    if (end - begin > 8) {
      int axis = 0;
      for (int m = 1; m < d; ++m)
        if (node.hi[m] - node.lo[m] > node.hi[axis] - node.lo[axis]) axis = m;
      const std::uint32_t mid = begin + (end - begin) / 2;
      std::nth_element(kd_perm.begin() + begin, kd_perm.begin() + mid, kd_perm.begin() + end,
                       [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = pts[a * d + axis], cb = pts[b * d + axis];
                         return ca < cb || (ca == cb && a < b);
                       });
      const std::int32_t l = build_kd(begin, mid);
      const std::int32_t r = build_kd(mid, end);
      kd[static_cast<std::size_t>(id)].left = l;
      kd[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  }

  struct State {
    std::vector<double> tent;
    std::vector<std::uint8_t> settled;
    std::vector<std::int32_t> arrival;
    std::vector<std::int64_t> parent;
    std::vector<std::int32_t> unsettled_in_bucket;
    std::size_t remaining = 0;
    bool has_target = false;
    Point target;
    double target_tent = kInfinity;
    std::int64_t target_parent = kSourceEmitter;
  };

  Point emitter_pos(std::int64_t e, const Point& source) const {
    return e == kSourceEmitter ? source : point(static_cast<std::size_t>(e));
  }

  bool prefer(std::int64_t cand_parent, std::int64_t cur_parent, const Point& source) const {
    return lex_less(emitter_pos(cand_parent, source), emitter_pos(cur_parent, source));
  }

  void relax_point(State& st, std::size_t q, double cand, std::int64_t emitter,
                   const Point& source, MinQueue& pq) const {
    const std::size_t c = q / 2;
    if (st.settled[c]) return;
    if (cand < st.tent[c] ||
        (cand == st.tent[c] && st.parent[c] != emitter && prefer(emitter, st.parent[c], source))) {
      st.tent[c] = cand;
      st.arrival[c] = static_cast<std::int32_t>(q);
      st.parent[c] = emitter;
      pq.push({cand, 0, static_cast<std::uint32_t>(c), 0});
    }
  }

  void relax_target(State& st, double cand, std::int64_t emitter, const Point& source) const {
    if (!st.has_target) return;
    if (cand < st.target_tent ||
        (cand == st.target_tent && st.target_parent != emitter &&
         prefer(emitter, st.target_parent, source))) {
      st.target_tent = cand;
      st.target_parent = emitter;
    }
  }

  std::int64_t max_shell(const Point& p) const {
    std::int64_t s = 0;
    for (int m = 0; m < d; ++m) {
      const std::int64_t b = bucket_axis(p[m], m);
      s = std::max({s, b, grid[m] - 1 - b});
    }
    return s;
  }

  // Visits every bucket at Chebyshev distance exactly `shell` from `center`.
  template <class F>
  void for_each_shell_bucket(const std::array<std::int64_t, kMaxDim>& center,
                             std::int64_t shell, F&& f) const {
    std::array<std::int64_t, kMaxDim> b{};
    std::function<void(int, bool)> rec = [&](int m, bool on_boundary) {
      const std::int64_t lo = center[m] - shell, hi = center[m] + shell;
      if (m + 1 == d && !on_boundary) {
        if (lo >= 0) {
          b[m] = lo;
          f(b);
        }
        if (shell > 0 && hi < grid[m]) {
          b[m] = hi;
          f(b);
        }
        return;
      }
      for (std::int64_t v = std::max<std::int64_t>(lo, 0); v <= std::min(hi, grid[m] - 1); ++v) {
        b[m] = v;
        const bool edge = (v == lo || v == hi);
        if (m + 1 == d)
          f(b);
        else
          rec(m + 1, on_boundary || edge);
      }
    };
    rec(0, false);
  }

  void search(const Point& source, State& st) const {
    const std::size_t nc = edges;
    st.tent.assign(nc, kInfinity);
    st.settled.assign(nc, 0);
    st.arrival.assign(nc, -1);
    st.parent.assign(nc, kSourceEmitter);
    st.remaining = nc;
    if (st.has_target) {
      st.target_tent = euclidean(source, st.target);
      st.target_parent = kSourceEmitter;
    }
    MinQueue pq;
    const bool dense = options.relaxation == Relaxation::kDense;
    if (!dense) {
      st.unsettled_in_bucket.assign(bucket_start.size() - 1, 0);
      for (std::size_t i = 0; i < points(); ++i) ++st.unsettled_in_bucket[point_bucket[i]];
    }

    auto emit_dense = [&](std::int64_t e, double D) {
      const Point pe = emitter_pos(e, source);
      for (std::size_t c = 0; c < nc; ++c) {
        if (st.settled[c]) continue;
        relax_point(st, 2 * c, D + dist(2 * c, pe), e, source, pq);
        relax_point(st, 2 * c + 1, D + dist(2 * c + 1, pe), e, source, pq);
      }
    };
    // Ring events for emitters are keyed by a lower bound on the distance
    // to any point in the shell, so a point is always relaxed from every
    // settled emitter before its own tentative distance is final.
    std::vector<double> emitter_dist(points() + 1, 0.0);
    auto emitter_index = [&](std::int64_t e) {
      return e == kSourceEmitter ? points() : static_cast<std::size_t>(e);
    };
    auto emit_ring = [&](std::int64_t e, std::uint32_t shell, double D) {
      const Point pe = emitter_pos(e, source);
      std::array<std::int64_t, kMaxDim> center{};
      for (int m = 0; m < d; ++m) center[m] = bucket_axis(pe[m], m);
      for_each_shell_bucket(center, shell, [&](const std::array<std::int64_t, kMaxDim>& b) {
        std::int64_t idx = 0;
        for (int m = 0; m < d; ++m) idx += b[m] * stride[m];
        const auto bi = static_cast<std::size_t>(idx);
        if (st.unsettled_in_bucket[bi] == 0) return;
        for (std::uint32_t j = bucket_start[bi]; j < bucket_start[bi + 1]; ++j) {
          const std::size_t q = bucket_items[j];
          relax_point(st, q, D + dist(q, pe), e, source, pq);
        }
      });
      if (static_cast<std::int64_t>(shell) + 1 <= max_shell(pe))
        pq.push({D + static_cast<double>(shell) * h, 1,
                 static_cast<std::uint32_t>(emitter_index(e)), shell + 1});
    };

    if (dense)
      emit_dense(kSourceEmitter, 0.0);
    else if (nc > 0)
      pq.push({0.0, 1, static_cast<std::uint32_t>(points()), 0});

    while (!pq.empty()) {
      const QueueItem it = pq.top();
      if (st.has_target && it.key >= st.target_tent) break;
      if (st.remaining == 0) break;
      pq.pop();
      if (it.kind == 0) {
        const std::size_t c = it.id;
        if (st.settled[c] || it.key > st.tent[c]) continue;
        st.settled[c] = 1;
        --st.remaining;
        const double D = it.key;
        for (std::size_t q : {2 * c, 2 * c + 1}) {
          emitter_dist[q] = D;
          if (!dense) --st.unsettled_in_bucket[point_bucket[q]];
          if (st.has_target)
            relax_target(st, D + dist(q, st.target), static_cast<std::int64_t>(q), source);
        }
        if (dense) {
          emit_dense(static_cast<std::int64_t>(2 * c), D);
          emit_dense(static_cast<std::int64_t>(2 * c + 1), D);
        } else {
          pq.push({D, 1, static_cast<std::uint32_t>(2 * c), 0});
          pq.push({D, 1, static_cast<std::uint32_t>(2 * c + 1), 0});
        }
      } else {
        const std::int64_t e =
            it.id == points() ? kSourceEmitter : static_cast<std::int64_t>(it.id);
        emit_ring(e, it.shell, emitter_dist[emitter_index(e)]);
      }
    }
  }

  void check_query(const Point& p) const {
    require(p.dim == d && p.finite(), "query point has wrong dimension");
    require(domain.contains(p), "query point " + to_string(p) + " lies outside the domain");
  }

  PathTrace reconstruct(const State& st, const Point& x, const Point& y) const {
    std::vector<std::pair<Point, bool>> rev;  // (node, segment-from-node-is-hop)
    rev.push_back({y, false});
    std::int64_t e = st.target_parent;
    while (e != kSourceEmitter) {
      const auto c = static_cast<std::size_t>(e) / 2;
      const auto q = static_cast<std::int64_t>(st.arrival[c]);
      if (q != e) {
        rev.push_back({point(static_cast<std::size_t>(e)), false});
        rev.push_back({point(static_cast<std::size_t>(q)), true});
      }
      e = st.parent[c];
    }
    rev.push_back({x, false});
    PathTrace t;
    t.kind = PathTrace::Kind::kProper;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      t.nodes.push_back(it->first);
      if (std::next(it) != rev.rend()) t.hop_flags.push_back(it->second);
    }
    t.recompute();
    return t;
  }

  // min over endpoints of D(endpoint) + |endpoint - t|, pruned with the kd-tree.
  void kd_query(std::int32_t node, const Point& t, const std::vector<double>& point_dist,
                const std::vector<double>& node_min, double& best) const {
    const KdNode& n = kd[static_cast<std::size_t>(node)];
    double gap2 = 0.0;
    for (int m = 0; m < d; ++m) {
      const double c = t[m] < n.lo[m] ? n.lo[m] - t[m] : (t[m] > n.hi[m] ? t[m] - n.hi[m] : 0.0);
      gap2 += c * c;
    }
    if (node_min[static_cast<std::size_t>(node)] + std::sqrt(gap2) >= best) return;
    if (n.left < 0) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const std::uint32_t p = kd_perm[i];
        best = std::min(best, point_dist[p] + dist(p, t));
      }
      return;
    }
    kd_query(n.left, t, point_dist, node_min, best);
    kd_query(n.right, t, point_dist, node_min, best);
  }

  std::vector<double> evaluate(const Point& source, std::span<const Point> targets) const {
    State st;
    search(source, st);
    std::vector<double> point_dist(points());
    for (std::size_t i = 0; i < points(); ++i) point_dist[i] = st.tent[i / 2];
    std::vector<double> node_min(kd.size(), kInfinity);
    for (std::size_t n = kd.size(); n-- > 0;) {
      const KdNode& k = kd[n];
      if (k.left < 0) {
        for (std::uint32_t i = k.begin; i < k.end; ++i)
          node_min[n] = std::min(node_min[n], point_dist[kd_perm[i]]);
      } else {
        node_min[n] = std::min(node_min[static_cast<std::size_t>(k.left)],
                               node_min[static_cast<std::size_t>(k.right)]);
      }
    }
    std::vector<double> out;
    out.reserve(targets.size());
    for (const Point& t : targets) {
      double best = euclidean(source, t);
      if (!kd.empty()) kd_query(0, t, point_dist, node_min, best);
      out.push_back(best);
    }
    return out;
  }
};

ContinuousMetric::ContinuousMetric(const EdgeConfiguration& config, const Window& domain,
                                   MetricOptions options)
    : impl_(std::make_unique<Impl>()) {
  require(domain.dim() == config.params.d, "domain dimension differs from params.d");
  Impl& m = *impl_;
  m.domain = domain;
  m.d = config.params.d;
  m.options = options;
  for (const LongEdge& e : config.edges) {
    if (!domain.contains(e.a) || !domain.contains(e.b)) continue;
    const double s = e.scope();
    if (s < options.scope_min || s >= options.scope_max) continue;
    for (int k = 0; k < m.d; ++k) m.pts.push_back(e.a[k]);
    for (int k = 0; k < m.d; ++k) m.pts.push_back(e.b[k]);
    ++m.edges;
  }
  require(m.points() < (1u << 31), "too many edges for the metric engine");
  m.build_grid();
  m.kd_perm.resize(m.points());
  std::iota(m.kd_perm.begin(), m.kd_perm.end(), 0u);
  if (m.points() > 0) m.build_kd(0, static_cast<std::uint32_t>(m.points()));
}

ContinuousMetric::~ContinuousMetric() = default;
ContinuousMetric::ContinuousMetric(ContinuousMetric&&) noexcept = default;
ContinuousMetric& ContinuousMetric::operator=(ContinuousMetric&&) noexcept = default;

const Window& ContinuousMetric::domain() const { return impl_->domain; }
std::size_t ContinuousMetric::edge_count() const { return impl_->edges; }

double ContinuousMetric::distance(const Point& x, const Point& y) const {
  impl_->check_query(x);
  impl_->check_query(y);
  if (x == y) return 0.0;
  Impl::State st;
  st.has_target = true;
  st.target = y;
  impl_->search(x, st);
  return st.target_tent;
}

DistanceResult ContinuousMetric::geodesic(const Point& x, const Point& y) const {
  impl_->check_query(x);
  impl_->check_query(y);
  DistanceResult r;
  if (x == y) {
    r.trace.nodes = {x};
    return r;
  }
  Impl::State st;
  st.has_target = true;
  st.target = y;
  impl_->search(x, st);
  r.value = st.target_tent;
  r.trace = impl_->reconstruct(st, x, y);
  return r;
}

std::vector<double> ContinuousMetric::distances_from(const Point& source,
                                                     std::span<const Point> targets) const {
  impl_->check_query(source);
  for (const Point& t : targets) impl_->check_query(t);
  return impl_->evaluate(source, targets);
}

DistanceField ContinuousMetric::ball_field(const Point& source, double resolution) const {
  require(resolution > 0.0 && std::isfinite(resolution), "resolution must be positive");
  impl_->check_query(source);
  DistanceField f;
  f.window = impl_->domain;
  f.resolution = resolution;
  for (int m = 0; m < f.dim(); ++m)
    f.shape[m] = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(f.window.side(m) / resolution - 1e-9)));
  if (static_cast<double>(f.cell_count()) > 1.0e9) throw ResourceLimit("raster too large");
  // The source is snapped to the center of its cell so that the source cell
  // reads exactly zero.
  f.source = f.cell_center(f.cell_of(source));
  std::vector<Point> centers;
  centers.reserve(static_cast<std::size_t>(f.cell_count()));
  for (std::int64_t i = 0; i < f.cell_count(); ++i) centers.push_back(f.cell_center(i));
  f.values = impl_->evaluate(f.source, centers);
  return f;
}

DistanceResult continuous_distance(const EdgeConfiguration& config, const Point& x,
                                   const Point& y, const Window& domain, MetricOptions options) {
  return ContinuousMetric(config, domain, options).geodesic(x, y);
}

DistanceField continuous_ball_field(const EdgeConfiguration& config, const Point& source,
                                    const Window& domain, double resolution) {
  return ContinuousMetric(config, domain).ball_field(source, resolution);
}

DistanceResult internal_distance(const EdgeConfiguration& config, const Point& x,
                                 const Point& y, const Window& sub) {
  require(config.window.contains(sub, 1e-12), "sub-window is not contained in the window");
  return ContinuousMetric(config, sub).geodesic(x, y);
}

double brute_force_distance(const EdgeConfiguration& config, const Point& x, const Point& y) {
  require(config.edges.size() <= 32, "brute force is limited to 64 endpoints");
  std::vector<Point> nodes = {x, y};
  for (const LongEdge& e : config.edges) {
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  const std::size_t n = nodes.size();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = euclidean(nodes[i], nodes[j]);
  for (std::size_t e = 0; e < config.edges.size(); ++e) {
    const std::size_t a = 2 + 2 * e, b = a + 1;
    w[a * n + b] = w[b * n + a] = 0.0;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        w[i * n + j] = std::min(w[i * n + j], w[i * n + k] + w[k * n + j]);
  return w[0 * n + 1];
}

// ---------------------------------------------------------------------------
// Lattice metric

LatticeMetric::LatticeMetric(const LatticeGraph& graph) : box_(graph.box), d_(graph.box.dim()) {
  require(box_.count() < (std::int64_t{1} << 31), "box too large for the lattice metric");
  // Offsets of the implicit neighborhood: nearest neighbors, plus every
  // l-infinity neighbor when touching pairs are implicit.
  const bool touching = graph.touching_implicit;
  Site off(d_);
  std::function<void(int)> rec = [&](int m) {
    if (m == d_) {
      const std::int64_t l1 = off.l1_norm();
      if (l1 == 0) return;
      if (l1 == 1 || touching) local_offsets_.push_back(off);
      return;
    }
    for (std::int64_t v = -1; v <= 1; ++v) {
      off[m] = v;
      rec(m + 1);
    }
  };
  rec(0);
  const auto n = static_cast<std::size_t>(box_.count());
  adj_start_.assign(n + 1, 0);
  for (const LatticeEdge& e : graph.long_edges) {
    ++adj_start_[static_cast<std::size_t>(e.a) + 1];
    ++adj_start_[static_cast<std::size_t>(e.b) + 1];
  }
  std::partial_sum(adj_start_.begin(), adj_start_.end(), adj_start_.begin());
  adj_.resize(static_cast<std::size_t>(adj_start_.back()));
  std::vector<std::int64_t> fill(adj_start_.begin(), adj_start_.end() - 1);
  for (const LatticeEdge& e : graph.long_edges) {
    adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.a)]++)] = e.b;
    adj_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.b)]++)] = e.a;
  }
}

void LatticeMetric::distances_from(std::int64_t source, std::vector<std::int32_t>& dist,
                                   std::vector<std::int64_t>& queue) const {
  const auto n = static_cast<std::size_t>(box_.count());
  dist.assign(n, -1);
  queue.resize(n);
  std::size_t head = 0, tail = 0;
  dist[static_cast<std::size_t>(source)] = 0;
  queue[tail++] = source;
  while (head < tail) {
    const std::int64_t v = queue[head++];
    const std::int32_t dv = dist[static_cast<std::size_t>(v)] + 1;
    for_each_neighbor(v, [&](std::int64_t w) {
      auto& dw = dist[static_cast<std::size_t>(w)];
      if (dw < 0) {
        dw = dv;
        queue[tail++] = w;
      }
    });
  }
}

std::vector<std::int32_t> LatticeMetric::distances_from(const Site& source) const {
  require(box_.contains(source), "source " + to_string(source) + " lies outside the box");
  std::vector<std::int32_t> dist;
  std::vector<std::int64_t> queue;
  distances_from(box_.index(source), dist, queue);
  return dist;
}

std::int64_t LatticeMetric::distance(const Site& u, const Site& v) const {
  require(box_.contains(v), "target " + to_string(v) + " lies outside the box");
  return distances_from(u)[static_cast<std::size_t>(box_.index(v))];
}

DistanceResult LatticeMetric::geodesic(const Site& u, const Site& v) const {
  require(box_.contains(v), "target " + to_string(v) + " lies outside the box");
  const std::vector<std::int32_t> dist = distances_from(u);
  std::int64_t cur = box_.index(v);
  const std::int32_t total = dist[static_cast<std::size_t>(cur)];
  if (total < 0) throw InvariantViolation("target unreachable in lattice graph");
  std::vector<std::int64_t> rev = {cur};
  while (dist[static_cast<std::size_t>(cur)] > 0) {
    const std::int32_t want = dist[static_cast<std::size_t>(cur)] - 1;
    std::int64_t best = -1;
    for_each_neighbor(cur, [&](std::int64_t w) {
      if (dist[static_cast<std::size_t>(w)] == want && (best < 0 || w < best)) best = w;
    });
    cur = best;
    rev.push_back(cur);
  }
  DistanceResult r;
  r.value = total;
  r.trace.kind = PathTrace::Kind::kWalk;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    const Site s = box_.site(*it);
    if (!r.trace.nodes.empty()) {
      const Site prev = box_.site(*std::prev(it));
      r.trace.hop_flags.push_back((s - prev).l1_norm() > 1);
    }
    r.trace.nodes.push_back(s.to_point());
  }
  r.trace.recompute();
  return r;
}

DistanceField bfs_distance(const LatticeGraph& graph, const Site& source) {
  const LatticeMetric metric(graph);
  const std::vector<std::int32_t> dist = metric.distances_from(source);
  DistanceField f;
  const IntBox& b = graph.box;
  Point lo(b.dim()), hi(b.dim());
  for (int m = 0; m < b.dim(); ++m) {
    lo[m] = static_cast<double>(b.lo[m]) - 0.5;
    hi[m] = static_cast<double>(b.hi[m]) + 0.5;
    f.shape[m] = b.extent(m);
  }
  f.window = Window(lo, hi);
  f.resolution = 1.0;
  f.source = source.to_point();
  f.values.assign(dist.begin(), dist.end());
  return f;
}

DistanceResult bfs_geodesic(const LatticeGraph& graph, const Site& u, const Site& v) {
  require(graph.box.contains(u) && graph.box.contains(v), "geodesic endpoints outside the box");
  return LatticeMetric(graph).geodesic(u, v);
}

}  // namespace lrp
