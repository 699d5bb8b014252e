#include "lrp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>

#include "lrp/coupling.hpp"
#include "lrp/errors.hpp"
#include "lrp/metric.hpp"
#include "lrp/sampler.hpp"
#include "lrp/stats.hpp"

namespace lrp {

unsigned thread_count() {
  if (const char* env = std::getenv("LRP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kDiscrete ? "discrete" : "continuous";
}

namespace {

std::string replicate_label(std::int64_t r) { return "replicate/" + std::to_string(r); }

void check_n_values(const std::vector<std::int64_t>& n_values) {
  require(!n_values.empty(), "n_values is empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    require(n_values[i] >= 1, "n values must be positive");
    if (i > 0) require(n_values[i] > n_values[i - 1], "n values must be increasing");
  }
}

Site diagonal(int d, std::int64_t n) { return Site::filled(d, n); }

Point diagonal_point(int d, double n) { return Point::filled(d, n); }

// Box of sites padded around the segment [0, n_max]: side `padding` * n_max.
IntBox padded_box(int d, std::int64_t n_max, double padding) {
  const auto ext =
      static_cast<std::int64_t>(std::ceil((padding - 1.0) * static_cast<double>(n_max) / 2.0));
  return IntBox::cube(d, -ext, n_max + ext);
}

// Window of side padding * n centered on the segment [0, n]^d.
Window padded_window(int d, double n, double padding) {
  return Window::cube(d, n / 2.0 - padding * n / 2.0, n / 2.0 + padding * n / 2.0);
}

void check_box_budget(const IntBox& box) {
  if (box.count() > 50'000'000) throw ResourceLimit("lattice box too large: " +
                                                    std::to_string(box.count()) + " sites");
}

std::vector<double> column_medians(const std::vector<std::vector<double>>& samples) {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(median(s));
  return out;
}

}  // namespace

MedianTable estimate_medians(const ModelParams& params, const std::vector<std::int64_t>& n_values,
                             std::int64_t replicates, ModelKind model,
                             const MedianOptions& options) {
  params.validate();
  check_n_values(n_values);
  require(replicates >= 1, "replicates must be positive");
  require(options.padding >= 1.0, "padding must be at least 1");
  const int d = params.d;
  MedianTable t;
  t.model = model;
  t.params = params;
  t.n_values = n_values;
  t.replicates = replicates;
  t.padding = options.padding;
  const auto R = static_cast<std::size_t>(replicates);
  t.samples.assign(n_values.size(), std::vector<double>(R));
  const bool check = options.padding_check && model == ModelKind::kContinuous;
  std::vector<std::vector<double>> wide(check ? n_values.size() : 0, std::vector<double>(R));

  if (model == ModelKind::kDiscrete) {
    const IntBox box = padded_box(d, n_values.back(), options.padding);
    check_box_budget(box);
    parallel_for(R, [&](std::size_t r) {
      const Stream s = derive_stream(params.seed, replicate_label(static_cast<std::int64_t>(r)));
      LatticeGraph g = sample_discrete(params, box, s.child("discrete"));
      if (options.strip_long_edges) {
        g.long_edges.clear();
        g.touching_implicit = false;
      }
      const std::vector<std::int32_t> dist = LatticeMetric(g).distances_from(Site(d));
      for (std::size_t i = 0; i < n_values.size(); ++i)
        t.samples[i][r] = dist[static_cast<std::size_t>(box.index(diagonal(d, n_values[i])))];
    });
  } else {
    parallel_for(R, [&](std::size_t r) {
      const Stream s = derive_stream(params.seed, replicate_label(static_cast<std::int64_t>(r)));
      for (std::size_t i = 0; i < n_values.size(); ++i) {
        const auto n = static_cast<double>(n_values[i]);
        const Window core = padded_window(d, n, options.padding);
        const Window outer = check ? padded_window(d, n, 2.0 * options.padding) : core;
        EdgeConfiguration cfg =
            sample_continuous(params, outer, s.child("n/" + std::to_string(n_values[i])));
        if (options.strip_long_edges) cfg.edges.clear();
        const Point x(d), y = diagonal_point(d, n);
        t.samples[i][r] = ContinuousMetric(cfg, core).distance(x, y) / n;
        if (check) wide[i][r] = ContinuousMetric(cfg, outer).distance(x, y) / n;
      }
    });
  }
  t.medians = column_medians(t.samples);
  if (check) {
    const std::vector<double> wm = column_medians(wide);
    for (std::size_t i = 0; i < wm.size(); ++i)
      t.padding_shift.push_back(std::abs(wm[i] - t.medians[i]) / t.medians[i]);
  }
  return t;
}

ThetaEstimate fit_theta(const MedianTable& table, std::int64_t resamples) {
  const std::size_t k = table.n_values.size();
  require(k == table.medians.size(), "median table is inconsistent");
  require(k >= 4, "fit needs at least 4 n values");
  require(table.n_values.back() >= 4 * table.n_values.front(),
          "n values must span at least two octaves");
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(table.medians[i] > 0.0)) throw FitFailure("medians must be positive");
    x[i] = std::log(static_cast<double>(table.n_values[i]));
    y[i] = std::log(table.medians[i]);
  }
  if (std::all_of(table.medians.begin(), table.medians.end(),
                  [&](double m) { return m == table.medians.front(); }))
    throw FitFailure("degenerate table: medians are constant");
  const LinearFit fit = least_squares(x, y);
  // Continuous medians are already divided by n.
  const double offset = table.model == ModelKind::kContinuous ? 1.0 : 0.0;
  ThetaEstimate est;
  est.theta_hat = fit.slope + offset;
  est.r_squared = fit.r_squared;
  est.beta = table.params.beta;
  est.d = table.params.d;
  est.ci_low = est.ci_high = est.theta_hat;

  const bool have_samples = table.samples.size() == k && table.replicates >= 2;
  if (!have_samples || resamples <= 0) return est;
  const auto R = static_cast<std::size_t>(table.replicates);
  Stream stream = derive_stream(table.params.seed, "bootstrap");
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(resamples));
  std::vector<std::size_t> idx(R);
  std::vector<double> col(R), yb(k);
  for (std::int64_t b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = static_cast<std::size_t>(stream.below(R));
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r = 0; r < R; ++r) col[r] = table.samples[i][idx[r]];
      const double m = median(col);
      if (!(m > 0.0)) ok = false;
      yb[i] = ok ? std::log(m) : 0.0;
    }
    if (ok) slopes.push_back(least_squares(x, yb).slope + offset);
  }
  if (slopes.empty()) throw FitFailure("every bootstrap resample was degenerate");
  est.bootstrap_resamples = static_cast<std::int64_t>(slopes.size());
  est.ci_low = quantile(slopes, 0.025);
  est.ci_high = quantile(slopes, 0.975);
  return est;
}

std::vector<LatticeGraph> coupled_lattice_samples(int d, const std::vector<double>& betas,
                                                  const IntBox& box, const Stream& stream) {
  require(!betas.empty(), "beta list is empty");
  require(box.dim() == d, "box dimension differs from d");
  Point lo(d), hi(d);
  for (int m = 0; m < d; ++m) {
    lo[m] = static_cast<double>(box.lo[m]);
    hi[m] = static_cast<double>(box.hi[m] + 1);
  }
  const Window window(lo, hi);
  ModelParams p;
  p.d = d;
  p.beta = betas.front();
  p.delta_min = 1.0;
  p.delta_max = kInfinity;
  // Coarse-graining commutes with superposition, so each increment is
  // coarse-grained on its own and the lattice edge sets are merged.
  LatticeGraph g = coarse_grain(sample_continuous(p, window, stream.child("beta/0")), 1.0);
  std::vector<LatticeGraph> out = {g};
  for (std::size_t b = 1; b < betas.size(); ++b) {
    const double extra = betas[b] - betas[b - 1];
    require(extra >= 0.0, "beta list must be nondecreasing");
    if (extra > 0.0) {
      ModelParams q = p;
      q.beta = extra;
      const LatticeGraph inc =
          coarse_grain(sample_continuous(q, window, stream.child("beta/" + std::to_string(b))), 1.0);
      std::vector<LatticeEdge> merged;
      merged.reserve(g.long_edges.size() + inc.long_edges.size());
      std::set_union(g.long_edges.begin(), g.long_edges.end(), inc.long_edges.begin(),
                     inc.long_edges.end(), std::back_inserter(merged));
      g.long_edges = std::move(merged);
    }
    g.params.beta = betas[b];
    out.push_back(g);
  }
  return out;
}

MonotonicityReport theta_monotonicity(const std::vector<double>& betas,
                                      const MonotonicitySettings& settings) {
  require(betas.size() >= 2, "need at least two beta values");
  for (std::size_t b = 0; b < betas.size(); ++b) {
    require(betas[b] > 0.0, "beta must be positive");
    if (b > 0) require(betas[b] >= betas[b - 1], "beta list must be nondecreasing");
  }
  check_n_values(settings.n_values);
  require(settings.replicates >= 2, "need at least two replicates");
  const int d = settings.d;
  const IntBox box = padded_box(d, settings.n_values.back(), settings.padding);
  check_box_budget(box);
  const std::size_t B = betas.size(), K = settings.n_values.size();
  const auto R = static_cast<std::size_t>(settings.replicates);

  MonotonicityReport rep;
  rep.betas = betas;
  rep.tables.resize(B);
  for (std::size_t b = 0; b < B; ++b) {
    MedianTable& t = rep.tables[b];
    t.model = ModelKind::kDiscrete;
    t.params = ModelParams{d, betas[b], 1.0, kInfinity, settings.seed};
    t.n_values = settings.n_values;
    t.replicates = settings.replicates;
    t.padding = settings.padding;
    t.samples.assign(K, std::vector<double>(R));
  }
  std::vector<std::int64_t> violations(R, 0);
  parallel_for(R, [&](std::size_t r) {
    const Stream s = derive_stream(settings.seed, replicate_label(static_cast<std::int64_t>(r)));
    const std::vector<LatticeGraph> graphs = coupled_lattice_samples(d, betas, box, s);
    for (std::size_t b = 0; b < B; ++b) {
      const std::vector<std::int32_t> dist = LatticeMetric(graphs[b]).distances_from(Site(d));
      for (std::size_t i = 0; i < K; ++i) {
        const double v =
            dist[static_cast<std::size_t>(box.index(diagonal(d, settings.n_values[i])))];
        rep.tables[b].samples[i][r] = v;
        if (b > 0 && v > rep.tables[b - 1].samples[i][r]) ++violations[r];
      }
    }
  });
  rep.per_sample_violations = std::accumulate(violations.begin(), violations.end(), 0LL);
  rep.comparisons = static_cast<std::int64_t>((B - 1) * K * R);
  for (auto& t : rep.tables) {
    t.medians = column_medians(t.samples);
    rep.estimates.push_back(fit_theta(t, settings.resamples));
  }
  rep.decreasing = true;
  rep.separated = true;
  bool reversed_and_separated = false;
  for (std::size_t b = 1; b < B; ++b) {
    if (betas[b] == betas[b - 1]) continue;
    const ThetaEstimate& lo = rep.estimates[b - 1];
    const ThetaEstimate& hi = rep.estimates[b];
    if (!(hi.theta_hat < lo.theta_hat)) rep.decreasing = false;
    if (!(hi.ci_high < lo.ci_low)) rep.separated = false;
    if (hi.ci_low > lo.ci_high) reversed_and_separated = true;
  }
  if (rep.per_sample_violations > 0 || reversed_and_separated)
    rep.verdict = "fail";
  else if (rep.decreasing && rep.separated)
    rep.verdict = "pass";
  else
    rep.verdict = "inconclusive";
  return rep;
}

LatticeGraph restrict_graph(const LatticeGraph& graph, const IntBox& sub) {
  require(graph.box.contains(sub), "sub-box not contained in the sample box");
  LatticeGraph out;
  out.params = graph.params;
  out.box = sub;
  out.touching_implicit = graph.touching_implicit;
  for (const LatticeEdge& e : graph.long_edges) {
    const Site a = graph.site_a(e), b = graph.site_b(e);
    if (sub.contains(a) && sub.contains(b)) out.long_edges.push_back({sub.index(a), sub.index(b)});
  }
  std::sort(out.long_edges.begin(), out.long_edges.end());
  return out;
}

std::int64_t lattice_diameter(const LatticeGraph& graph) {
  const double n = static_cast<double>(graph.box.count());
  if (n * n > 2.0e10) throw ResourceLimit("all-pairs diameter too expensive for this box");
  const LatticeMetric metric(graph);
  std::vector<std::int32_t> dist;
  std::vector<std::int64_t> queue;
  std::int64_t diam = 0;
  for (std::int64_t v = 0; v < graph.box.count(); ++v) {
    metric.distances_from(v, dist, queue);
    for (std::int32_t x : dist) {
      if (x < 0) throw InvariantViolation("lattice sample is disconnected");
      diam = std::max<std::int64_t>(diam, x);
    }
  }
  return diam;
}

TailReport diameter_tail(const ModelParams& params, const std::vector<std::int64_t>& n_values,
                         std::int64_t replicates, double eta, double theta_prior) {
  params.validate();
  check_n_values(n_values);
  require(replicates >= 1, "replicates must be positive");
  require(eta > 0.0, "eta must be positive");
  const int d = params.d;
  const std::size_t K = n_values.size();
  const auto R = static_cast<std::size_t>(replicates);
  const IntBox box = IntBox::cube(d, 0, n_values.back());
  check_box_budget(box);
  std::vector<std::vector<double>> diam(K, std::vector<double>(R));
  std::vector<std::int64_t> order_violations(R, 0);
  parallel_for(R, [&](std::size_t r) {
    const Stream s = derive_stream(params.seed, replicate_label(static_cast<std::int64_t>(r)));
    const LatticeGraph g = sample_discrete(params, box, s.child("discrete"));
    for (std::size_t i = 0; i < K; ++i) {
      const LatticeGraph sub = restrict_graph(g, IntBox::cube(d, 0, n_values[i]));
      diam[i][r] = static_cast<double>(lattice_diameter(sub));
      const auto dhat = LatticeMetric(sub).distance(Site(d), diagonal(d, n_values[i]));
      if (diam[i][r] < static_cast<double>(dhat)) ++order_violations[r];
    }
  });
  TailReport rep;
  rep.eta = eta;
  rep.n_values = n_values;
  rep.diameter_medians = column_medians(diam);
  rep.diameter_order_violations =
      std::accumulate(order_violations.begin(), order_violations.end(), 0LL);
  if (theta_prior > 0.0) {
    rep.theta_hat = theta_prior;
  } else {
    MedianTable t;
    t.params = params;
    t.n_values = n_values;
    t.replicates = replicates;
    t.samples = diam;
    t.medians = rep.diameter_medians;
    const ThetaEstimate est = fit_theta(t);
    rep.theta_hat = est.theta_hat;
    rep.theta_ci_low = est.ci_low;
    rep.theta_ci_high = est.ci_high;
    rep.theta_fitted = true;
  }
  auto mgf = [&](double theta) {
    std::vector<double> out;
    for (std::size_t i = 0; i < K; ++i) {
      const double scale = std::pow(static_cast<double>(n_values[i]), theta);
      double s = 0.0;
      for (double v : diam[i]) s += std::exp(std::pow(v / scale, eta));
      out.push_back(s / static_cast<double>(R));
    }
    return out;
  };
  rep.mgf = mgf(rep.theta_hat);
  rep.mgf_shifted = mgf(rep.theta_hat + 0.2);
  rep.overflow = !std::all_of(rep.mgf.begin(), rep.mgf.end(), [](double v) {
    return std::isfinite(v);
  });
  if (rep.overflow) {
    rep.stability_ratio = kInfinity;
  } else {
    const auto [mn, mx] = std::minmax_element(rep.mgf.begin(), rep.mgf.end());
    rep.stability_ratio = *mx / *mn;
  }
  auto ratio = [](const std::vector<double>& m) {
    const auto [mn, mx] = std::minmax_element(m.begin(), m.end());
    return std::isfinite(*mx) ? *mx / *mn : kInfinity;
  };
  if (rep.theta_fitted) {
    rep.stability_at_ci_low = ratio(mgf(rep.theta_ci_low));
    rep.stability_at_ci_high = ratio(mgf(rep.theta_ci_high));
  }
  rep.shifted_decreasing = true;
  for (std::size_t i = 1; i < K; ++i)
    if (!(rep.mgf_shifted[i] < rep.mgf_shifted[i - 1])) rep.shifted_decreasing = false;
  return rep;
}

BranchingConstant discrete_branching_constant(const ModelParams& params, std::int64_t radius) {
  params.validate();
  require(radius >= 2, "radius must be at least 2");
  const int d = params.d;
  BranchingConstant c;
  if (d == 1) {
    c.partial = 2.0;
    for (std::int64_t k = 2; k <= radius; ++k) c.partial += 2.0 * discrete_edge_prob(params, Site{k});
  } else {
    Site k(d);
    std::function<void(int)> rec = [&](int m) {
      if (m == d) {
        if (k.l1_norm() != 0) c.partial += discrete_edge_prob(params, k);
        return;
      }
      for (std::int64_t v = -radius; v <= radius; ++v) {
        k[m] = v;
        rec(m + 1);
      }
    };
    rec(0);
  }
  // sum over ||j||_inf > radius of |j|^{-2d} <= sum_s (shell size) s^{-2d}.
  const double dd = d;
  double tail = 0.0;
  constexpr std::int64_t kTerms = 1'000'000;
  const std::int64_t s_end = radius + kTerms;
  for (std::int64_t s = radius + 1; s <= s_end; ++s) {
    const double sz = std::pow(2.0 * s + 1.0, dd) - std::pow(2.0 * s - 1.0, dd);
    tail += sz * std::pow(static_cast<double>(s), -2.0 * dd);
  }
  tail += 2.0 * dd * std::pow(3.0, dd - 1.0) / (dd * std::pow(static_cast<double>(s_end), dd));
  c.tail_bound = std::pow(2.0, 2.0 * dd) * params.beta * tail;
  c.value = c.partial + c.tail_bound;
  return c;
}

std::vector<std::int64_t> count_self_avoiding_paths(const LatticeGraph& graph,
                                                    const Site& origin, int m_max) {
  require(m_max >= 0, "m_max must be nonnegative");
  require(graph.box.contains(origin), "origin outside the box");
  const LatticeMetric metric(graph);
  std::vector<char> on_path(static_cast<std::size_t>(graph.box.count()), 0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m_max) + 1, 0);
  std::function<void(std::int64_t, int)> dfs = [&](std::int64_t v, int len) {
    ++counts[static_cast<std::size_t>(len)];
    if (len == m_max) return;
    on_path[static_cast<std::size_t>(v)] = 1;
    metric.for_each_neighbor(v, [&](std::int64_t w) {
      if (!on_path[static_cast<std::size_t>(w)]) dfs(w, len + 1);
    });
    on_path[static_cast<std::size_t>(v)] = 0;
  };
  dfs(graph.box.index(origin), 0);
  return counts;
}

PathCountReport path_count_mc(const ModelParams& params, int m_max, std::int64_t replicates,
                              std::int64_t radius) {
  params.validate();
  require(m_max >= 1, "m_max must be positive");
  require(radius >= m_max, "box radius is smaller than the path length");
  require(replicates >= 2, "need at least two replicates");
  const int d = params.d;
  const IntBox box = IntBox::cube(d, -radius, radius);
  check_box_budget(box);
  const auto R = static_cast<std::size_t>(replicates);
  const auto M = static_cast<std::size_t>(m_max);
  std::vector<std::vector<double>> counts(M + 1, std::vector<double>(R));
  parallel_for(R, [&](std::size_t r) {
    const Stream s = derive_stream(params.seed, replicate_label(static_cast<std::int64_t>(r)));
    const LatticeGraph g = sample_discrete(params, box, s.child("discrete"));
    const auto c = count_self_avoiding_paths(g, Site(d), m_max);
    for (std::size_t k = 0; k <= M; ++k) counts[k][r] = static_cast<double>(c[k]);
  });
  PathCountReport rep;
  rep.m_max = m_max;
  rep.replicates = replicates;
  rep.c_dis = discrete_branching_constant(params, d == 1 ? 1 << 16 : 32);
  const double C = rep.c_dis.value;
  std::vector<double> cumulative(R, 0.0);
  double geometric = 0.0;
  for (std::size_t k = 0; k <= M; ++k) {
    geometric += std::pow(C, static_cast<double>(k));
    rep.mean.push_back(mean(counts[k]));
    rep.se.push_back(standard_error(counts[k]));
    for (std::size_t r = 0; r < R; ++r) cumulative[r] += counts[k][r];
    rep.mean_cumulative.push_back(mean(cumulative));
    rep.cumulative_bound.push_back(geometric);
    if (rep.mean_cumulative.back() - geometric > 3.0 * standard_error(cumulative))
      ++rep.bound_violations;
  }
  for (std::size_t k = 0; k < M; ++k) {
    std::vector<double> excess(R);
    for (std::size_t r = 0; r < R; ++r) excess[r] = counts[k + 1][r] - C * counts[k][r];
    rep.excess_mean.push_back(mean(excess));
    rep.excess_se.push_back(standard_error(excess));
    if (rep.excess_mean.back() > 3.0 * rep.excess_se.back()) ++rep.recursion_violations;
  }
  return rep;
}

namespace {

// Depth-first enumeration of hop sequences. Calls visit(length, hops) once
// per class, where length is the total gap length up to the last hop.
class HopEnumerator {
 public:
  HopEnumerator(const EdgeConfiguration& config, std::int64_t cap) : d_(config.params.d), cap_(cap) {
    for (const LongEdge& e : config.edges) {
      if (e.scope() < 1.0) continue;
      pts_.push_back(e.a);
      pts_.push_back(e.b);
    }
    order_.resize(pts_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return pts_[a][0] < pts_[b][0]; });
    keys_.reserve(order_.size());
    for (std::uint32_t i : order_) keys_.push_back(pts_[i][0]);
    used_.assign(pts_.size() / 2, 0);
  }

  template <class F>
  void run(const Point& origin, double t, F&& visit) {
    require(origin.dim == d_, "origin dimension mismatch");
    classes_ = 0;
    dfs(origin, t, 0.0, 0, visit);
  }

 private:
  template <class F>
  void dfs(const Point& p, double budget, double spent, std::int64_t hops, F& visit) {
    if (++classes_ > cap_) throw ResourceLimit("hop-class enumeration exceeded its cap");
    visit(spent, hops);
    const auto lo = std::lower_bound(keys_.begin(), keys_.end(), p[0] - budget) - keys_.begin();
    const auto hi = std::upper_bound(keys_.begin(), keys_.end(), p[0] + budget) - keys_.begin();
    for (auto j = lo; j < hi; ++j) {
      const std::uint32_t q = order_[static_cast<std::size_t>(j)];
      const std::size_t e = q / 2;
      if (used_[e]) continue;
      const double gap = euclidean(p, pts_[q]);
      if (gap > budget) continue;
      used_[e] = 1;
      dfs(pts_[q ^ 1u], budget - gap, spent + gap, hops + 1, visit);
      used_[e] = 0;
    }
  }

  int d_;
  std::int64_t cap_;
  std::int64_t classes_ = 0;
  std::vector<Point> pts_;
  std::vector<std::uint32_t> order_;
  std::vector<double> keys_;
  std::vector<char> used_;
};

}  // namespace

std::vector<std::int64_t> count_hop_classes(const EdgeConfiguration& config, const Point& origin,
                                            double t, std::int64_t cap) {
  require(t >= 0.0, "t must be nonnegative");
  std::vector<std::int64_t> by_hops(1, 0);
  HopEnumerator en(config, cap);
  en.run(origin, t, [&](double, std::int64_t h) {
    if (static_cast<std::size_t>(h) >= by_hops.size()) by_hops.resize(static_cast<std::size_t>(h) + 1, 0);
    ++by_hops[static_cast<std::size_t>(h)];
  });
  return by_hops;
}

double hop_constant(const ModelParams& params) {
  const int d = params.d;
  const double sigma = unit_sphere_measure(d);
  const double c_d = sigma * sigma / d;
  return std::pow(params.beta * c_d * std::tgamma(static_cast<double>(d)), 1.0 / d);
}

HopCountReport hop_count_mc(const ModelParams& params, const std::vector<double>& t_values,
                            std::int64_t replicates, double half_width) {
  params.validate();
  require(!t_values.empty(), "t_values is empty");
  require(replicates >= 2, "need at least two replicates");
  const double t_max = *std::max_element(t_values.begin(), t_values.end());
  require(t_max >= 0.0 && half_width > t_max, "window too small for the largest t");
  const int d = params.d;
  HopCountReport rep;
  rep.c_hat = hop_constant(params);
  rep.c_cont = std::exp(rep.c_hat * std::exp(1.0));
  rep.alpha = 2.0 * rep.c_cont;
  rep.replicates = replicates;
  rep.t_values = t_values;
  ModelParams unit = params;
  unit.delta_min = 1.0;
  unit.delta_max = kInfinity;
  const Window window = Window::cube(d, -half_width, half_width);
  const auto R = static_cast<std::size_t>(replicates);
  const std::size_t T = t_values.size();
  std::vector<std::vector<double>> totals(T, std::vector<double>(R, 0.0));
  std::vector<std::vector<double>> tail_hits(T, std::vector<double>(R, 0.0));
  parallel_for(R, [&](std::size_t r) {
    const Stream s = derive_stream(params.seed, replicate_label(static_cast<std::int64_t>(r)));
    const EdgeConfiguration cfg = sample_continuous(unit, window, s.child("continuous"));
    HopEnumerator en(cfg, 50'000'000);
    en.run(Point(d), t_max, [&](double len, std::int64_t h) {
      for (std::size_t i = 0; i < T; ++i) {
        if (len > t_values[i]) continue;
        totals[i][r] += 1.0;
        if (static_cast<double>(h) >= rep.alpha * t_values[i]) tail_hits[i][r] = 1.0;
      }
    });
  });
  for (std::size_t i = 0; i < T; ++i) {
    const double t = t_values[i];
    rep.mean.push_back(mean(totals[i]));
    rep.se.push_back(standard_error(totals[i]));
    rep.bound.push_back(std::exp(rep.c_hat * t));
    if (rep.mean.back() - rep.bound.back() > 3.0 * rep.se.back()) ++rep.violations;
    const double tb = std::pow(rep.c_cont / rep.alpha, t);
    rep.tail.push_back(mean(tail_hits[i]));
    rep.tail_bound.push_back(tb);
    const double sd = std::sqrt(std::min(tb, 1.0) * (1.0 - std::min(tb, 1.0)) / static_cast<double>(R));
    if (rep.tail.back() - tb > 3.0 * sd) ++rep.violations;
  }
  return rep;
}

ScalingReport scaling_ks_test(const ModelParams& params, std::int64_t n, std::int64_t samples,
                              double exponent) {
  params.validate();
  require(samples >= 100, "scaling test needs at least 100 samples per side");
  require(n >= 1, "n must be positive");
  const int d = params.d;
  const auto S = static_cast<std::size_t>(samples);
  const double nn = static_cast<double>(n);
  ModelParams fine = params, coarse = params;
  fine.delta_min = 1.0 / nn;
  fine.delta_max = kInfinity;
  coarse.delta_min = 1.0;
  coarse.delta_max = kInfinity;
  const Window wf = padded_window(d, 1.0, 2.0);
  const Window wc = padded_window(d, nn, 2.0);
  std::vector<double> a(S), b(S);
  parallel_for(S, [&](std::size_t i) {
    const std::string idx = std::to_string(i);
    const EdgeConfiguration cf =
        sample_continuous(fine, wf, derive_stream(params.seed, "scaling/fine/" + idx));
    a[i] = ContinuousMetric(cf, wf).distance(Point(d), diagonal_point(d, 1.0));
    const EdgeConfiguration cc =
        sample_continuous(coarse, wc, derive_stream(params.seed, "scaling/coarse/" + idx));
    b[i] = std::pow(nn, -exponent) * ContinuousMetric(cc, wc).distance(Point(d), diagonal_point(d, nn));
  });
  ScalingReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.exponent = exponent;
  rep.mean_fine = mean(a);
  rep.mean_coarse = mean(b);
  const KsResult ks = ks_two_sample(a, b);
  rep.statistic = ks.statistic;
  rep.p_value = ks.p_value;
  return rep;
}

FidelityReport coarse_grain_fidelity(const ModelParams& params, std::int64_t side,
                                     std::int64_t seeds, double radius) {
  params.validate();
  require(side >= 3, "side must be at least 3");
  require(seeds >= 1, "seeds must be positive");
  const int d = params.d;
  const auto rmax = static_cast<std::int64_t>(std::floor(radius));
  FidelityReport rep;
  rep.seeds = seeds;
  // Offsets in the half-space, grouped by orbit (sorted absolute values).
  std::map<std::vector<std::int64_t>, std::size_t> orbit_index;
  std::map<std::vector<std::int64_t>, std::size_t> offset_orbit;
  Site k(d);
  std::function<void(int)> rec = [&](int m) {
    if (m == d) {
      int first = 0;
      while (first < d && k[first] == 0) ++first;
      if (first == d || k[first] < 0) return;
      if (k.linf_norm() < 2) return;
      double r2 = 0.0;
      std::int64_t pairs = 1;
      for (int a = 0; a < d; ++a) {
        r2 += static_cast<double>(k[a] * k[a]);
        pairs *= std::max<std::int64_t>(0, side - std::abs(k[a]));
      }
      if (r2 > radius * radius || pairs == 0) return;
      std::vector<std::int64_t> key;
      for (int a = 0; a < d; ++a) key.push_back(std::abs(k[a]));
      std::sort(key.begin(), key.end());
      auto [it, fresh] = orbit_index.emplace(key, rep.orbits.size());
      if (fresh) {
        OrbitCount oc;
        oc.representative = Site(d);
        for (int a = 0; a < d; ++a) oc.representative[a] = key[static_cast<std::size_t>(d - 1 - a)];
        oc.probability = discrete_edge_prob(params, oc.representative);
        rep.orbits.push_back(oc);
      }
      rep.orbits[it->second].trials += pairs * seeds;
      offset_orbit.emplace(std::vector<std::int64_t>(k.k.begin(), k.k.begin() + d), it->second);
      return;
    }
    for (std::int64_t v = -rmax; v <= rmax; ++v) {
      k[m] = v;
      rec(m + 1);
    }
  };
  rec(0);
  require(!rep.orbits.empty(), "no orbits in range");

  ModelParams unit = params;
  unit.delta_min = 1.0;
  unit.delta_max = kInfinity;
  const Window window = Window::cube(d, 0.0, static_cast<double>(side));
  const auto S = static_cast<std::size_t>(seeds);
  std::vector<std::vector<std::int64_t>> hits(S);
  parallel_for(S, [&](std::size_t s) {
    const EdgeConfiguration cfg = sample_continuous(
        unit, window, derive_stream(params.seed, "fidelity/" + std::to_string(s)));
    const LatticeGraph g = coarse_grain(cfg, 1.0);
    std::vector<std::int64_t> h(rep.orbits.size(), 0);
    for (const LatticeEdge& e : g.long_edges) {
      const Site diff = g.site_b(e) - g.site_a(e);
      const auto it = offset_orbit.find(std::vector<std::int64_t>(diff.k.begin(), diff.k.begin() + d));
      if (it != offset_orbit.end()) ++h[it->second];
    }
    hits[s] = std::move(h);
  });
  for (const auto& h : hits)
    for (std::size_t o = 0; o < h.size(); ++o) rep.orbits[o].hits += h[o];
  for (const OrbitCount& o : rep.orbits) {
    const double n = static_cast<double>(o.trials), p = o.probability;
    if (!(p > 0.0 && p < 1.0)) continue;
    const double z = (static_cast<double>(o.hits) - n * p);
    rep.chi_square += z * z / (n * p * (1.0 - p));
    ++rep.dof;
  }
  rep.p_value = rep.dof > 0 ? chi_square_sf(rep.chi_square, rep.dof) : 1.0;
  return rep;
}

}  // namespace lrp
