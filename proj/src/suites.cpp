#include "lrp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "lrp/coupling.hpp"
#include "lrp/errors.hpp"
#include "lrp/estimators.hpp"
#include "lrp/metric.hpp"
#include "lrp/sampler.hpp"
#include "lrp/stats.hpp"

namespace lrp {

using ojson = nlohmann::ordered_json;

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ojson SuiteReport::to_json() const {
  ojson j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["scale"] = scale;
  j["pass"] = pass();
  j["checks"] = ojson::array();
  for (const CheckResult& c : checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

namespace {

std::int64_t scaled(std::int64_t full, double scale, std::int64_t minimum) {
  const auto v = static_cast<std::int64_t>(std::llround(static_cast<double>(full) * scale));
  return std::max(minimum, std::min(full, v));
}

Point random_point(const Window& w, Stream& s) {
  Point p(w.dim());
  for (int m = 0; m < w.dim(); ++m) p[m] = s.uniform(w.lo[m], w.hi[m]);
  return p;
}

ModelParams unit_params(int d, double beta, std::uint64_t seed) {
  ModelParams p;
  p.d = d;
  p.beta = beta;
  p.delta_min = 1.0;
  p.delta_max = kInfinity;
  p.seed = seed;
  return p;
}

std::vector<std::int64_t> powers_of_two(int lo, int hi) {
  std::vector<std::int64_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::int64_t{1} << e);
  return out;
}

// ---------------------------------------------------------------------------

SuiteReport oracle_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t instances = scaled(1000, cfg.scale, 20);
  double err_bucket = 0.0, err_dense = 0.0;
  std::int64_t queries = 0, bad_traces = 0, max_endpoints = 0;
  for (std::int64_t i = 0; i < instances; ++i) {
    Stream s = derive_stream(cfg.seed, "oracle/" + std::to_string(i));
    const int d = 1 + static_cast<int>(i % 2);
    const Window w = Window::cube(d, 0.0, 10.0);
    EdgeConfiguration c;
    if (i % 4 < 2) {
      // Uniformly scattered edges of any length.
      c.params = ModelParams{d, 1.0, 1e-12, kInfinity, cfg.seed};
      c.window = w;
      const auto m = s.below(33);
      for (std::uint64_t e = 0; e < m; ++e) {
        const Point a = random_point(w, s), b = random_point(w, s);
        if (a == b) continue;
        c.edges.push_back(canonicalize_edge(a, b));
      }
    } else {
      ModelParams p = unit_params(d, 1.0, cfg.seed);
      p.delta_min = d == 1 ? 0.6 : 1.5;
      c = sample_continuous(p, w, s.child("sample"));
      if (c.edges.size() > 32) c.edges.resize(32);
    }
    max_endpoints = std::max<std::int64_t>(max_endpoints, 2 * static_cast<std::int64_t>(c.edges.size()));
    const ContinuousMetric bucket(c, w);
    const ContinuousMetric dense(c, w, MetricOptions{0.0, kInfinity, Relaxation::kDense});
    std::vector<std::pair<Point, Point>> pairs;
    for (int q = 0; q < 4; ++q) pairs.push_back({random_point(w, s), random_point(w, s)});
    if (!c.edges.empty()) {
      const LongEdge& e = c.edges[s.below(c.edges.size())];
      pairs.push_back({e.a, random_point(w, s)});
      pairs.push_back({e.a, e.b});
    }
    for (const auto& [x, y] : pairs) {
      const double ref = brute_force_distance(c, x, y);
      const DistanceResult g = bucket.geodesic(x, y);
      err_bucket = std::max(err_bucket, std::abs(g.value - ref));
      err_dense = std::max(err_dense, std::abs(dense.distance(x, y) - ref));
      bool ok = g.trace.front() == x && g.trace.back() == y &&
                std::abs(g.trace.length_l1 - g.value) <= 1e-9;
      try {
        const PathStats st = path_stats(g.trace);
        ok = ok && std::abs(st.length_l1 - g.value) <= 1e-9;
      } catch (const InvalidArgument&) {
        ok = false;
      }
      if (!ok) ++bad_traces;
      ++queries;
    }
  }
  rep.checks.push_back({"bucketed_matches_brute_force", err_bucket <= 1e-9,
                        {{"instances", instances}, {"queries", queries},
                         {"max_endpoints", max_endpoints}, {"max_abs_error", err_bucket}}});
  rep.checks.push_back({"dense_matches_brute_force", err_dense <= 1e-9,
                        {{"queries", queries}, {"max_abs_error", err_dense}}});
  rep.checks.push_back({"geodesic_traces_proper", bad_traces == 0,
                        {{"queries", queries}, {"bad_traces", bad_traces}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport axioms_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t configs = scaled(20, cfg.scale, 2);
  const std::int64_t triples = scaled(10000, cfg.scale, 500);
  double sym_err = 0.0;
  std::int64_t tri_viol = 0, upper_viol = 0, pairs_checked = 0, zero_viol = 0, zero_checked = 0;
  std::int64_t edge_mono = 0, scope_mono = 0, sub_mono = 0, mono_checked = 0;
  for (std::int64_t c = 0; c < configs; ++c) {
    Stream s = derive_stream(cfg.seed, "axioms/" + std::to_string(c));
    const int d = 1 + static_cast<int>(c % 2);
    const Window w = d == 1 ? Window::cube(1, 0.0, 64.0) : Window::cube(2, 0.0, 16.0);
    const EdgeConfiguration conf = sample_continuous(unit_params(d, 1.0, cfg.seed), w, s.child("sample"));
    const ContinuousMetric metric(conf, w);
    std::vector<Point> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(random_point(w, s));
    const std::size_t n_edge_pts = std::min<std::size_t>(5, conf.edges.size());
    for (std::size_t e = 0; e < n_edge_pts; ++e) {
      pts.push_back(conf.edges[e].a);
      pts.push_back(conf.edges[e].b);
    }
    const std::size_t K = pts.size();
    std::vector<std::vector<double>> D(K);
    for (std::size_t i = 0; i < K; ++i) D[i] = metric.distances_from(pts[i], pts);
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) {
        sym_err = std::max(sym_err, std::abs(D[i][j] - D[j][i]));
        if (D[i][j] > euclidean(pts[i], pts[j]) + 1e-12) ++upper_viol;
        ++pairs_checked;
      }
    for (std::int64_t t = 0; t < triples; ++t) {
      const auto i = s.below(K), j = s.below(K), k = s.below(K);
      if (D[i][k] > D[i][j] + D[j][k] + 1e-9) ++tri_viol;
    }
    // Zero distance exactly between the two ends of an edge (or a point and
    // itself); random distinct points are at positive distance.
    for (std::size_t e = 0; e < n_edge_pts; ++e) {
      const std::size_t a = 100 + 2 * e, b = a + 1;
      if (D[a][b] != 0.0) ++zero_viol;
      ++zero_checked;
    }
    for (std::size_t i = 0; i + 1 < 100; ++i) {
      if (!(D[i][i + 1] > 0.0) || D[i][i] != 0.0) ++zero_viol;
      ++zero_checked;
    }
    // Monotone couplings: more edges, a wider scope range, a larger domain.
    const EdgeConfiguration more = superpose(conf, 0.5, s.child("extra"));
    const ContinuousMetric metric_more(more, w);
    const ContinuousMetric metric_scope(conf, w, MetricOptions{2.0, kInfinity, Relaxation::kBucketed});
    const Window core = window_core(w);
    const ContinuousMetric metric_core(conf, core);
    for (int q = 0; q < 50; ++q) {
      const Point x = random_point(core, s), y = random_point(core, s);
      const double base = metric.distance(x, y);
      if (metric_more.distance(x, y) > base + 1e-9) ++edge_mono;
      if (metric_scope.distance(x, y) < base - 1e-9) ++scope_mono;
      if (metric_core.distance(x, y) < base - 1e-9) ++sub_mono;
      ++mono_checked;
    }
  }
  rep.checks.push_back({"symmetry", sym_err <= 1e-12,
                        {{"configurations", configs}, {"max_abs_asymmetry", sym_err}}});
  rep.checks.push_back({"triangle_inequality", tri_viol == 0,
                        {{"triples_per_configuration", triples}, {"violations", tri_viol}}});
  rep.checks.push_back({"euclidean_upper_bound", upper_viol == 0,
                        {{"pairs", pairs_checked}, {"violations", upper_viol}}});
  rep.checks.push_back({"zero_distance", zero_viol == 0,
                        {{"checked", zero_checked}, {"violations", zero_viol}}});
  rep.checks.push_back({"monotone_in_edges", edge_mono == 0,
                        {{"pairs", mono_checked}, {"violations", edge_mono}}});
  rep.checks.push_back({"monotone_in_scope", scope_mono == 0,
                        {{"pairs", mono_checked}, {"violations", scope_mono}}});
  rep.checks.push_back({"monotone_in_domain", sub_mono == 0,
                        {{"pairs", mono_checked}, {"violations", sub_mono}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport sampler_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t N = scaled(100000, cfg.scale, 2000);
  const ModelParams p = unit_params(1, 1.0, cfg.seed);

  std::int64_t present = 0;
  const IntBox box = IntBox::cube(1, 0, 2);
  for (std::int64_t i = 0; i < N; ++i) {
    const LatticeGraph g =
        sample_discrete(p, box, derive_stream(cfg.seed, "sampler/discrete/" + std::to_string(i)));
    if (g.has_long_edge(Site{0}, Site{2})) ++present;
  }
  const double freq = static_cast<double>(present) / static_cast<double>(N);
  const double z_disc = (freq - 0.25) / std::sqrt(0.25 * 0.75 / static_cast<double>(N));
  rep.checks.push_back({"discrete_edge_frequency", std::abs(z_disc) <= 3.0,
                        {{"seeds", N}, {"frequency", freq}, {"expected", 0.25}, {"z", z_disc}}});

  const Window w = Window::cube(1, 0.0, 2.0);
  double total = 0.0;
  for (std::int64_t i = 0; i < N; ++i)
    total += static_cast<double>(
        sample_continuous(p, w, derive_stream(cfg.seed, "sampler/continuous/" + std::to_string(i)))
            .edges.size());
  const double mu = 1.0 - std::log(2.0);
  const double mean_count = total / static_cast<double>(N);
  const double z_cont = (mean_count - mu) / std::sqrt(mu / static_cast<double>(N));
  rep.checks.push_back({"continuous_edge_count", std::abs(z_cont) <= 3.0,
                        {{"seeds", N}, {"mean", mean_count}, {"expected", mu}, {"z", z_cont}}});

  const std::int64_t M = scaled(10000, cfg.scale, 500);
  const Window w4 = Window::cube(1, 0.0, 4.0);
  std::vector<double> sup, direct;
  std::int64_t invalid = 0;
  const ModelParams half = unit_params(1, 0.5, cfg.seed);
  for (std::int64_t i = 0; i < M; ++i) {
    const Stream s = derive_stream(cfg.seed, "sampler/superpose/" + std::to_string(i));
    const EdgeConfiguration a = superpose(sample_continuous(half, w4, s.child("base")), 0.5, s.child("extra"));
    const EdgeConfiguration b = sample_continuous(p, w4, s.child("direct"));
    for (const EdgeConfiguration* c : {&a, &b}) {
      try {
        c->validate();
      } catch (const InvariantViolation&) {
        ++invalid;
      }
    }
    sup.push_back(static_cast<double>(a.edges.size()));
    direct.push_back(static_cast<double>(b.edges.size()));
  }
  const KsResult ks = ks_two_sample(sup, direct);
  rep.checks.push_back({"superposition_law", ks.p_value > 0.01,
                        {{"samples", M}, {"ks_statistic", ks.statistic}, {"p_value", ks.p_value},
                         {"mean_superposed", mean(sup)}, {"mean_direct", mean(direct)}}});
  rep.checks.push_back({"sample_validation", invalid == 0,
                        {{"samples", 2 * M}, {"invalid", invalid}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport coupling_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t seeds = scaled(100, cfg.scale, 5);
  constexpr int kPairs = 100;
  for (int d = 1; d <= 2; ++d) {
    const Window w = d == 1 ? Window::cube(1, 0.0, 128.0) : Window::cube(2, 0.0, 32.0);
    const Window core = window_core(w);
    CouplingReport total;
    std::int64_t redraws = 0;
    for (std::int64_t s = 0; s < seeds; ++s) {
      Stream st = derive_stream(cfg.seed, "coupling/d" + std::to_string(d) + "/" + std::to_string(s));
      const EdgeConfiguration conf = sample_continuous(unit_params(d, 1.0, cfg.seed), w, st.child("sample"));
      std::vector<CouplingPair> pairs;
      while (static_cast<int>(pairs.size()) < kPairs) {
        const Point x = random_point(core, st), y = random_point(core, st);
        if (cell_of(x, 1.0, w) == cell_of(y, 1.0, w)) {
          ++redraws;
          continue;
        }
        pairs.push_back({x, y});
      }
      total.merge(coupling_check(conf, 1.0, pairs));
    }
    rep.checks.push_back({"coupling_inequalities_d" + std::to_string(d), total.clean(),
                          {{"seeds", seeds},
                           {"pairs_tested", total.pairs_tested},
                           {"forward_violations", total.forward_violations},
                           {"reverse_violations", total.reverse_violations},
                           {"realization_violations", total.realization_violations},
                           {"skeleton_violations", total.skeleton_violations},
                           {"same_cell_redraws", redraws},
                           {"mean_hops", total.mean_hops},
                           {"max_hops", total.max_hops},
                           {"max_forward_ratio", total.max_forward_ratio},
                           {"max_reverse_ratio", total.max_reverse_ratio}}});
  }
  // Coarse-graining commutes with scaling.
  std::int64_t mismatches = 0;
  const std::int64_t eq_seeds = scaled(20, cfg.scale, 3);
  for (std::int64_t s = 0; s < eq_seeds; ++s) {
    const EdgeConfiguration conf = sample_continuous(
        unit_params(2, 1.0, cfg.seed), Window::cube(2, 0.0, 16.0),
        derive_stream(cfg.seed, "coupling/scale/" + std::to_string(s)));
    const LatticeGraph a = coarse_grain(conf, 1.0);
    const LatticeGraph b = coarse_grain(conf.scaled(0.5), 0.5);
    if (!(a.box == b.box) || a.long_edges != b.long_edges) ++mismatches;
  }
  rep.checks.push_back({"scale_equivariance", mismatches == 0,
                        {{"samples", eq_seeds}, {"mismatches", mismatches}}});
  const Site k1{0}, k2{1}, k3{2};
  const std::vector<Site> erased = loop_erase({k1, k2, k1, k3});
  rep.checks.push_back({"loop_erasure_example", erased == std::vector<Site>{k1, k3},
                        {{"input", "k1 k2 k1 k3"}, {"output_length", erased.size()}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport fidelity_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t seeds = scaled(10000, cfg.scale, 300);
  const FidelityReport f = coarse_grain_fidelity(unit_params(2, 1.0, cfg.seed), 16, seeds, 8.0);
  ojson orbits = ojson::array();
  for (const OrbitCount& o : f.orbits) {
    const double n = static_cast<double>(o.trials);
    orbits.push_back({{"k", {o.representative[0], o.representative[1]}},
                      {"trials", o.trials},
                      {"hits", o.hits},
                      {"p", o.probability},
                      {"frequency", static_cast<double>(o.hits) / n}});
  }
  rep.checks.push_back({"coarse_grain_edge_marginals", f.p_value > 0.01,
                        {{"seeds", seeds}, {"chi_square", f.chi_square}, {"dof", f.dof},
                         {"p_value", f.p_value}, {"orbits", orbits}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport paths_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t R = scaled(2000, cfg.scale, 100);
  for (double beta : {0.5, 1.0}) {
    const PathCountReport p = path_count_mc(unit_params(1, beta, cfg.seed), 6, R, 1024);
    rep.checks.push_back({"path_count_recursion_beta_" + std::to_string(beta).substr(0, 3),
                          p.recursion_violations == 0 && p.bound_violations == 0,
                          {{"replicates", R},
                           {"c_dis", p.c_dis.value},
                           {"c_dis_tail_bound", p.c_dis.tail_bound},
                           {"mean_by_length", p.mean},
                           {"se_by_length", p.se},
                           {"mean_cumulative", p.mean_cumulative},
                           {"cumulative_bound", p.cumulative_bound},
                           {"excess_mean", p.excess_mean},
                           {"excess_se", p.excess_se},
                           {"recursion_violations", p.recursion_violations},
                           {"bound_violations", p.bound_violations}}});
  }
  return rep;
}

SuiteReport hops_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t R = scaled(1000, cfg.scale, 100);
  const HopCountReport h = hop_count_mc(unit_params(1, 0.5, cfg.seed), {1.0, 2.0, 3.0, 4.0}, R, 256.0);
  rep.checks.push_back({"hop_class_counts", h.violations == 0,
                        {{"beta", 0.5},
                         {"replicates", R},
                         {"c_hat", h.c_hat},
                         {"c_cont", h.c_cont},
                         {"alpha", h.alpha},
                         {"t", h.t_values},
                         {"mean_classes", h.mean},
                         {"se", h.se},
                         {"bound", h.bound},
                         {"hop_tail", h.tail},
                         {"hop_tail_bound", h.tail_bound},
                         {"violations", h.violations}}});
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport scaling_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t S = scaled(500, cfg.scale, 100);
  const ModelParams p = unit_params(1, 1.0, cfg.seed);
  const ScalingReport a = scaling_ks_test(p, 8, S, 1.0);
  rep.checks.push_back({"scaling_invariance", a.p_value > 0.01,
                        {{"n", 8}, {"samples", S}, {"ks_statistic", a.statistic},
                         {"p_value", a.p_value}, {"mean_fine", a.mean_fine},
                         {"mean_coarse", a.mean_coarse}}});
  const ScalingReport b = scaling_ks_test(p, 8, S, 0.5);
  rep.checks.push_back({"power_wrong_exponent", b.p_value < 0.001,
                        {{"exponent", 0.5}, {"ks_statistic", b.statistic}, {"p_value", b.p_value}}});
  return rep;
}

// ---------------------------------------------------------------------------

ojson theta_json(const ThetaEstimate& e) {
  return {{"beta", e.beta},        {"theta_hat", e.theta_hat}, {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},  {"r_squared", e.r_squared},
          {"bootstrap_resamples", e.bootstrap_resamples}};
}

SuiteReport theta_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  MonotonicitySettings st;
  st.d = 1;
  st.n_values = powers_of_two(6, 13);
  st.replicates = scaled(200, cfg.scale, 20);
  st.seed = cfg.seed;
  st.resamples = 1000;
  const MonotonicityReport m = theta_monotonicity({0.1, 5.0}, st);
  const ThetaEstimate& small = m.estimates[0];
  ojson medians = ojson::array();
  for (const MedianTable& t : m.tables) medians.push_back({{"beta", t.params.beta}, {"medians", t.medians}});
  rep.checks.push_back({"theta_small_beta_bracket",
                        small.theta_hat >= 0.8 && small.theta_hat < 1.0,
                        {{"n", st.n_values}, {"replicates", st.replicates},
                         {"estimate", theta_json(small)}, {"bracket", {0.8, 1.0}}}});
  rep.checks.push_back({"theta_decreasing_in_beta", m.verdict == "pass",
                        {{"verdict", m.verdict},
                         {"estimates", {theta_json(m.estimates[0]), theta_json(m.estimates[1])}},
                         {"medians", medians}}});
  rep.checks.push_back({"coupled_distances_monotone", m.per_sample_violations == 0,
                        {{"comparisons", m.comparisons}, {"violations", m.per_sample_violations}}});
  return rep;
}

SuiteReport medians_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t R = scaled(200, cfg.scale, 20);
  const ModelParams p = unit_params(1, 1.0, cfg.seed);
  const MedianTable disc = estimate_medians(p, powers_of_two(4, 10), R, ModelKind::kDiscrete);
  const bool nondecreasing = std::is_sorted(disc.medians.begin(), disc.medians.end());
  const ThetaEstimate td = fit_theta(disc);
  rep.checks.push_back({"discrete_medians_nondecreasing", nondecreasing,
                        {{"n", disc.n_values}, {"medians", disc.medians},
                         {"replicates", R}, {"fit", theta_json(td)}}});

  bool exact = true;
  for (int d = 1; d <= 2; ++d) {
    MedianOptions opt;
    opt.strip_long_edges = true;
    const MedianTable t = estimate_medians(unit_params(d, 1.0, cfg.seed), {4, 8, 16, 32}, 5,
                                           ModelKind::kDiscrete, opt);
    for (std::size_t i = 0; i < t.n_values.size(); ++i)
      if (t.medians[i] != static_cast<double>(t.n_values[i] * d)) exact = false;
  }
  rep.checks.push_back({"stripped_medians_are_taxicab", exact, {{"dimensions", {1, 2}}}});

  // The padding grows until doubling it moves no median by 1% or more; only
  // then is the continuous fit accepted.
  ojson attempts = ojson::array();
  bool settled = false;
  for (double pad : {2.0, 4.0, 8.0}) {
    MedianOptions opt;
    opt.padding = pad;
    opt.padding_check = true;
    const MedianTable cont = estimate_medians(p, powers_of_two(3, 7), R, ModelKind::kContinuous, opt);
    const double worst = *std::max_element(cont.padding_shift.begin(), cont.padding_shift.end());
    ojson a = {{"padding", pad}, {"n", cont.n_values}, {"medians", cont.medians},
               {"relative_shift_at_double_padding", cont.padding_shift}, {"max_shift", worst}};
    if (worst < 0.01) {
      a["fit"] = theta_json(fit_theta(cont));
      settled = true;
    }
    attempts.push_back(a);
    if (settled) break;
  }
  rep.checks.push_back({"continuous_padding_sensitivity", settled,
                        {{"tolerance", 0.01}, {"attempts", attempts}}});

  const MedianTable again = estimate_medians(p, powers_of_two(4, 10), R, ModelKind::kDiscrete);
  rep.checks.push_back({"reproducible", again.samples == disc.samples, ojson::object()});
  return rep;
}

SuiteReport tails_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  const std::int64_t R = scaled(200, cfg.scale, 20);
  const TailReport t = diameter_tail(unit_params(1, 1.0, cfg.seed), powers_of_two(6, 10), R, 1.0);
  rep.checks.push_back({"mgf_stability", !t.overflow && t.stability_ratio <= 3.0,
                        {{"eta", t.eta}, {"theta_hat", t.theta_hat},
                         {"theta_fitted_to_diameters", t.theta_fitted}, {"n", t.n_values},
                         {"diameter_medians", t.diameter_medians}, {"mgf", t.mgf},
                         {"stability_ratio", t.overflow ? -1.0 : t.stability_ratio},
                         {"theta_ci", {t.theta_ci_low, t.theta_ci_high}},
                         {"stability_at_theta_ci", {t.stability_at_ci_low, t.stability_at_ci_high}},
                         {"replicates", R}}});
  rep.checks.push_back({"over_normalized_trend", t.shifted_decreasing,
                        {{"theta_used", t.theta_hat + 0.2}, {"mgf", t.mgf_shifted}}});
  rep.checks.push_back({"diameter_dominates_distance", t.diameter_order_violations == 0,
                        {{"violations", t.diameter_order_violations}}});
  return rep;
}

using SuiteFn = SuiteReport (*)(const SuiteConfig&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r = {
      {"theta", theta_suite},     {"medians", medians_suite},   {"tails", tails_suite},
      {"paths", paths_suite},     {"hops", hops_suite},         {"scaling", scaling_suite},
      {"coupling", coupling_suite}, {"axioms", axioms_suite},   {"oracle", oracle_suite},
      {"sampler", sampler_suite}, {"fidelity", fidelity_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"theta",    "medians", "tails",  "paths",
                                                 "hops",     "scaling", "coupling", "axioms",
                                                 "oracle",   "sampler", "fidelity"};
  return names;
}

bool is_suite(const std::string& name) { return registry().count(name) > 0; }

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw InvalidArgument("unknown suite: " + name);
  require(config.scale > 0.0 && config.scale <= 1.0, "scale must be in (0, 1]");
  SuiteReport rep = it->second(config);
  rep.suite = name;
  rep.seed = config.seed;
  rep.scale = config.scale;
  return rep;
}

}  // namespace lrp
