#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "lrp/model.hpp"
#include "lrp/rng.hpp"

namespace lrp {

/// Worker count: LRP_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs f(i) for i in [0, n) on thread_count() workers. Each index must write
/// only its own output slot; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

enum class ModelKind { kDiscrete, kContinuous };

std::string to_string(ModelKind kind);

struct MedianOptions {
  /// Side of the simulation window relative to the query segment.
  double padding = 2.0;
  /// Remove every edge except nearest neighbors (a control run).
  bool strip_long_edges = false;
  /// Continuous only: also measure the medians in a window padded by
  /// 2 * padding, from the same samples.
  bool padding_check = false;
};

struct MedianTable {
  ModelKind model = ModelKind::kDiscrete;
  ModelParams params;
  std::vector<std::int64_t> n_values;
  std::vector<double> medians;
  std::int64_t replicates = 0;
  /// samples[i][r]: value at n_values[i] in replicate r.
  std::vector<std::vector<double>> samples;
  double padding = 2.0;
  /// Relative median shift when the padding is doubled (continuous, when
  /// requested).
  std::vector<double> padding_shift;
};

/// Median of dhat(0, n 1) on the box padded around [0, n]^d (discrete, one
/// breadth-first search per replicate), or of n^{-1} d_{(1,inf)}(0, n 1) on
/// the padded window (continuous). Replicate r uses stream
/// derive_stream(seed, "replicate/r").
MedianTable estimate_medians(const ModelParams& params, const std::vector<std::int64_t>& n_values,
                             std::int64_t replicates, ModelKind model,
                             const MedianOptions& options = {});

struct ThetaEstimate {
  double theta_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
  double beta = 0.0;
  int d = 1;
  std::int64_t bootstrap_resamples = 0;
};

/// Slope of log median against log n with a percentile bootstrap interval
/// over replicates (plus one for continuous tables, whose values carry the
/// 1/n factor). Tables without per-replicate samples get a point
/// estimate only.
ThetaEstimate fit_theta(const MedianTable& table, std::int64_t resamples = 1000);

struct MonotonicityReport {
  std::vector<double> betas;
  std::vector<MedianTable> tables;
  std::vector<ThetaEstimate> estimates;
  /// Samples where a larger beta gave a strictly larger distance.
  std::int64_t per_sample_violations = 0;
  std::int64_t comparisons = 0;
  bool decreasing = false;
  bool separated = false;
  /// "pass", "inconclusive" (ordered but intervals overlap) or "fail".
  std::string verdict;
};

struct MonotonicitySettings {
  int d = 1;
  std::vector<std::int64_t> n_values;
  std::int64_t replicates = 200;
  std::uint64_t seed = 0;
  double padding = 2.0;
  std::int64_t resamples = 1000;
};

/// Discrete samples for every beta from one superposition-coupled chain of
/// continuous samples, coarse-grained at unit cell; fits theta per beta.
MonotonicityReport theta_monotonicity(const std::vector<double>& betas,
                                      const MonotonicitySettings& settings);

/// Coupled discrete samples on `box` for increasing betas: each is the
/// coarse-graining of a unit-scope continuous sample, and the continuous
/// samples are nested by superposition, so edge sets only grow.
std::vector<LatticeGraph> coupled_lattice_samples(int d, const std::vector<double>& betas,
                                                  const IntBox& box, const Stream& stream);

/// Graph diameter of a lattice sample (breadth-first search from every
/// site).
std::int64_t lattice_diameter(const LatticeGraph& graph);

/// Restriction of a lattice sample to a sub-box, re-indexed.
LatticeGraph restrict_graph(const LatticeGraph& graph, const IntBox& sub);

struct TailReport {
  double eta = 1.0;
  double theta_hat = 0.0;
  bool theta_fitted = false;
  std::vector<std::int64_t> n_values;
  std::vector<double> diameter_medians;
  std::vector<double> mgf;
  double stability_ratio = 0.0;
  /// Bootstrap interval of a fitted theta and the stability ratio at its ends.
  double theta_ci_low = 0.0;
  double theta_ci_high = 0.0;
  double stability_at_ci_low = 0.0;
  double stability_at_ci_high = 0.0;
  /// MGF with theta_hat + 0.2, for the diagnostic trend.
  std::vector<double> mgf_shifted;
  bool shifted_decreasing = false;
  bool overflow = false;
  /// Samples with diam([0, n]^d) < dhat(0, n 1); must be zero.
  std::int64_t diameter_order_violations = 0;
};

/// Empirical E exp((diam([0, n]^d) / n^theta)^eta) from nested boxes of one
/// sample per replicate. If theta_prior is not positive, theta is fitted to
/// the diameter medians.
TailReport diameter_tail(const ModelParams& params, const std::vector<std::int64_t>& n_values,
                         std::int64_t replicates, double eta, double theta_prior = 0.0);

struct BranchingConstant {
  double partial = 0.0;
  double tail_bound = 0.0;
  /// partial + tail_bound: an upper bound for 2d + sum p_{0j}.
  double value = 0.0;
};

/// 2d + sum over ||j||_1 > 1 of p_{0j}, summed to l-infinity radius `radius`
/// with the tail bounded by 2^{2d} beta sum |j|^{-2d}.
BranchingConstant discrete_branching_constant(const ModelParams& params, std::int64_t radius);

/// Number of self-avoiding paths from `origin` of each exact length 0..m_max.
std::vector<std::int64_t> count_self_avoiding_paths(const LatticeGraph& graph,
                                                    const Site& origin, int m_max);

struct PathCountReport {
  int m_max = 0;
  std::int64_t replicates = 0;
  BranchingConstant c_dis;
  /// Mean and standard error of |P_k| for k = 0..m_max.
  std::vector<double> mean;
  std::vector<double> se;
  /// Mean of |P_{<= m}| and the bound sum_{k <= m} C_dis^k implied by the
  /// recursion.
  std::vector<double> mean_cumulative;
  std::vector<double> cumulative_bound;
  /// Mean and standard error of |P_{k+1}| - C_dis |P_k|, k < m_max.
  std::vector<double> excess_mean;
  std::vector<double> excess_se;
  std::int64_t recursion_violations = 0;
  std::int64_t bound_violations = 0;
};

/// Self-avoiding path counts from 0 in discrete samples on [-radius, radius]^d.
PathCountReport path_count_mc(const ModelParams& params, int m_max, std::int64_t replicates,
                              std::int64_t radius);

/// Equivalence classes (hop sequences) of proper paths from `origin` with
/// length at most t, using edges with scope >= 1. Entry k counts classes with
/// exactly k hops. Throws ResourceLimit past `cap` classes.
std::vector<std::int64_t> count_hop_classes(const EdgeConfiguration& config, const Point& origin,
                                            double t, std::int64_t cap = 50'000'000);

struct HopCountReport {
  double c_hat = 0.0;
  double c_cont = 0.0;
  double alpha = 0.0;
  std::int64_t replicates = 0;
  std::vector<double> t_values;
  std::vector<double> mean;
  std::vector<double> se;
  std::vector<double> bound;
  /// Empirical P[some class has at least alpha t hops] and its bound.
  std::vector<double> tail;
  std::vector<double> tail_bound;
  std::int64_t violations = 0;
};

/// c_hat = (beta c_d (d-1)!)^{1/d}, c_d = sigma_{d-1}^2 / d.
double hop_constant(const ModelParams& params);

/// Hop-class counts from 0 in continuous unit-scope samples on
/// [-half_width, half_width]^d.
HopCountReport hop_count_mc(const ModelParams& params, const std::vector<double>& t_values,
                            std::int64_t replicates, double half_width);

struct ScalingReport {
  std::int64_t n = 1;
  std::int64_t samples = 0;
  double exponent = 1.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double mean_fine = 0.0;
  double mean_coarse = 0.0;
};

/// Two-sample KS between d_{(1/n,inf)}(0, 1) and n^{-exponent} d_{(1,inf)}(0, n 1),
/// each on windows padded by 2 around its segment.
ScalingReport scaling_ks_test(const ModelParams& params, std::int64_t n, std::int64_t samples,
                              double exponent = 1.0);

struct OrbitCount {
  Site representative;
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double probability = 0.0;
};

struct FidelityReport {
  std::vector<OrbitCount> orbits;
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::int64_t seeds = 0;
};

/// Coarse-grains unit-scope continuous samples on [0, side]^d and compares the
/// cube-pair edge frequencies with discrete_edge_prob, per orbit of offsets k
/// with 2 <= ||k||_inf and |k| <= radius.
FidelityReport coarse_grain_fidelity(const ModelParams& params, std::int64_t side,
                                     std::int64_t seeds, double radius);

}  // namespace lrp
