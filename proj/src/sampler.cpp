#include "lrp/sampler.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "lrp/errors.hpp"

namespace lrp {
namespace {

constexpr double kMaxCandidates = 4.0e8;

struct OrbitKey {
  int d;
  std::array<std::int64_t, kMaxDim> abs_sorted;
  friend auto operator<=>(const OrbitKey&, const OrbitKey&) = default;
};

OrbitKey orbit_of(int d, const Site& k) {
  OrbitKey key{d, {}};
  for (int i = 0; i < d; ++i) key.abs_sorted[i] = k[i] < 0 ? -k[i] : k[i];
  std::sort(key.abs_sorted.begin(), key.abs_sorted.begin() + d);
  return key;
}

class MassCache {
 public:
  double get(int d, const Site& k) {
    const OrbitKey key = orbit_of(d, k);
    {
      std::lock_guard lock(mu_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    Site canon(d);
    for (int i = 0; i < d; ++i) canon[i] = key.abs_sorted[i];
    const double m = cube_pair_mass_quadrature(d, canon);
    std::lock_guard lock(mu_);
    table_.emplace(key, m);
    return m;
  }

 private:
  std::mutex mu_;
  std::map<OrbitKey, double> table_;
};

MassCache& mass_cache() {
  static MassCache cache;
  return cache;
}

double closed_form_mass_1d(std::int64_t k) {
  const double a = static_cast<double>(k < 0 ? -k : k);
  // ln(k^2 / (k^2 - 1)) = -log1p(-1/k^2), stable for large k.
  return -std::log1p(-1.0 / (a * a));
}

}  // namespace

double cube_pair_mass_quadrature(int d, const Site& k, double rel_tol) {
  require(d >= 1 && d <= kMaxDim && k.dim == d, "offset dimension mismatch");
  require(k.l1_norm() != 0, "cube_pair_mass: k = 0");
  if (k.linf_norm() <= 1) return kInfinity;

  using boost::math::quadrature::gauss_kronrod;
  std::array<double, kMaxDim> t{};
  // Integrates axis m..d-1 for fixed t[0..m); each axis is split at 0 where
  // the tent weight has a kink.
  std::function<double(int)> integrate_axis = [&](int m) -> double {
    auto inner = [&, m](double tm) {
      t[m] = tm;
      const double w = 1.0 - std::abs(tm);
      if (m + 1 == d) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
          const double c = static_cast<double>(k[i]) + t[i];
          r2 += c * c;
        }
        return w * std::pow(r2, -static_cast<double>(d));
      }
      return w * integrate_axis(m + 1);
    };
    const double lo = gauss_kronrod<double, 21>::integrate(inner, -1.0, 0.0, 20, rel_tol);
    const double hi = gauss_kronrod<double, 21>::integrate(inner, 0.0, 1.0, 20, rel_tol);
    return lo + hi;
  };
  return integrate_axis(0);
}

CubePairMass cube_pair_mass(int d, const Site& k) {
  require(d >= 1 && d <= kMaxDim && k.dim == d, "offset dimension mismatch");
  require(k.l1_norm() != 0, "cube_pair_mass: k = 0");
  if (k.linf_norm() <= 1) return {k, kInfinity};
  if (d == 1) return {k, closed_form_mass_1d(k[0])};
  return {k, mass_cache().get(d, k)};
}

double discrete_edge_prob(const ModelParams& params, const Site& k) {
  require(k.l1_norm() != 0, "discrete_edge_prob: k = 0");
  if (k.l1_norm() == 1) return 1.0;
  const CubePairMass m = cube_pair_mass(params.d, k);
  if (m.touching()) return 1.0;
  return -std::expm1(-params.beta * m.mass);
}

namespace {

// Offsets k in the half-space (first nonzero coordinate positive) with
// l-infinity norm in [s_lo, s_hi) and |k_m| < extent_m on every axis.
void enumerate_offsets(const IntBox& box, std::int64_t s_lo, std::int64_t s_hi,
                       std::vector<Site>& out) {
  const int d = box.dim();
  Site k(d);
  std::function<void(int, bool, bool)> rec = [&](int m, bool outer, bool leading_zero) {
    const std::int64_t lim = std::min(s_hi - 1, box.extent(m) - 1);
    const std::int64_t from = leading_zero ? 0 : -lim;
    for (std::int64_t v = from; v <= lim; ++v) {
      const std::int64_t av = v < 0 ? -v : v;
      const bool now_outer = outer || av >= s_lo;
      const bool now_zero = leading_zero && v == 0;
      if (m + 1 == d) {
        if (!now_outer || now_zero) continue;
        k[m] = v;
        out.push_back(k);
      } else {
        k[m] = v;
        rec(m + 1, now_outer, now_zero);
      }
    }
  };
  rec(0, false, true);
}

std::uint64_t pair_count(const IntBox& box, const Site& k) {
  std::uint64_t c = 1;
  for (int m = 0; m < box.dim(); ++m) {
    const std::int64_t a = k[m] < 0 ? -k[m] : k[m];
    const std::int64_t e = box.extent(m) - a;
    if (e <= 0) return 0;
    c *= static_cast<std::uint64_t>(e);
  }
  return c;
}

struct OffsetGroup {
  std::vector<Site> offsets;
  std::vector<double> probs;
  std::vector<std::uint64_t> cumulative;  // cumulative[i] = pairs in offsets[0..i]
  double p_bar = 0.0;
};

// Shells up to this l-infinity radius get one group per offset with the exact
// probability as dominating bound; beyond it shells are merged and thinned.
constexpr std::int64_t kExactShellLimit = 8;

void draw_group(const ModelParams& params, const IntBox& box, const OffsetGroup& g,
                Stream& stream, std::vector<LatticeEdge>& out) {
  if (g.offsets.empty() || g.p_bar <= 0.0) return;
  const std::uint64_t total = g.cumulative.back();
  if (g.p_bar * static_cast<double>(total) > kMaxCandidates)
    throw ResourceLimit("discrete sample would draw too many candidate pairs");
  const int d = params.d;
  std::uint64_t pos = 0;
  bool first = true;
  for (;;) {
    const std::uint64_t skip = stream.geometric_failures(g.p_bar);
    if (skip >= total) break;
    pos += skip + (first ? 0 : 1);
    first = false;
    if (pos >= total) break;
    const auto it = std::upper_bound(g.cumulative.begin(), g.cumulative.end(), pos);
    const auto idx = static_cast<std::size_t>(it - g.cumulative.begin());
    const std::uint64_t before = idx == 0 ? 0 : g.cumulative[idx - 1];
    std::uint64_t rank = pos - before;
    const Site& k = g.offsets[idx];
    const double p = g.probs.empty() ? discrete_edge_prob(params, k) : g.probs[idx];
    if (p < g.p_bar && !(stream.uniform() * g.p_bar < p)) continue;
    Site i(d);
    for (int m = d - 1; m >= 0; --m) {
      const std::int64_t a = k[m] < 0 ? -k[m] : k[m];
      const auto radix = static_cast<std::uint64_t>(box.extent(m) - a);
      i[m] = box.lo[m] + std::max<std::int64_t>(0, -k[m]) +
             static_cast<std::int64_t>(rank % radix);
      rank /= radix;
    }
    const std::int64_t ia = box.index(i);
    const std::int64_t ib = box.index(i + k);
    out.push_back(ia < ib ? LatticeEdge{ia, ib} : LatticeEdge{ib, ia});
  }
}

}  // namespace

LatticeGraph sample_discrete(const ModelParams& params, const IntBox& box, Stream stream) {
  params.validate();
  require(box.dim() == params.d, "box dimension differs from params.d");
  LatticeGraph g{params, box, {}, true};
  std::int64_t s_max = 0;
  for (int m = 0; m < box.dim(); ++m) s_max = std::max(s_max, box.extent(m) - 1);

  std::int64_t s = 2;
  while (s <= s_max) {
    const std::int64_t s_hi =
        s <= kExactShellLimit ? s + 1 : std::max(s + 1, (s * 9) / 8);
    std::vector<Site> offsets;
    enumerate_offsets(box, s, s_hi, offsets);
    if (s <= kExactShellLimit) {
      for (const Site& k : offsets) {
        OffsetGroup grp;
        const std::uint64_t c = pair_count(box, k);
        if (c == 0) continue;
        const double p = discrete_edge_prob(params, k);
        grp.offsets = {k};
        grp.probs = {p};
        grp.cumulative = {c};
        grp.p_bar = p;
        draw_group(params, box, grp, stream, g.long_edges);
      }
    } else {
      OffsetGroup grp;
      grp.p_bar = -std::expm1(-params.beta *
                              std::pow(static_cast<double>(s - 1), -2.0 * params.d));
      std::uint64_t acc = 0;
      for (const Site& k : offsets) {
        const std::uint64_t c = pair_count(box, k);
        if (c == 0) continue;
        acc += c;
        grp.offsets.push_back(k);
        grp.cumulative.push_back(acc);
      }
      // probs stays empty: exact probabilities are evaluated only for offsets
      // that receive a candidate.
      draw_group(params, box, grp, stream, g.long_edges);
    }
    s = s_hi;
  }
  std::sort(g.long_edges.begin(), g.long_edges.end());
  return g;
}

LatticeGraph sample_discrete_naive(const ModelParams& params, const IntBox& box,
                                   Stream stream) {
  params.validate();
  require(box.dim() == params.d, "box dimension differs from params.d");
  require(box.count() <= 4096, "naive sampler is limited to 4096 sites");
  LatticeGraph g{params, box, {}, true};
  const std::int64_t n = box.count();
  for (std::int64_t a = 0; a < n; ++a) {
    const Site sa = box.site(a);
    for (std::int64_t b = a + 1; b < n; ++b) {
      const Site k = box.site(b) - sa;
      if (k.linf_norm() <= 1) continue;
      if (stream.uniform() < discrete_edge_prob(params, k)) g.long_edges.push_back({a, b});
    }
  }
  return g;
}

double continuous_dominating_mean(const ModelParams& params, const Window& window) {
  const int d = params.d;
  const double r_max = std::min(params.delta_max, window.diameter());
  if (params.delta_min >= r_max) return 0.0;
  const double radial = std::pow(params.delta_min, -d) - std::pow(r_max, -d);
  return params.beta * window.volume() * unit_sphere_measure(d) * radial / d;
}

namespace {

std::string stream_tag(const Stream& s) {
  std::ostringstream os;
  os << "stream:" << std::hex << s.key();
  return os.str();
}

Point random_direction(int d, Stream& stream) {
  Point u(d);
  if (d == 1) {
    u[0] = (stream() >> 63) ? 1.0 : -1.0;
    return u;
  }
  if (d == 2) {
    const double phi = 2.0 * std::numbers::pi * stream.uniform();
    u[0] = std::cos(phi);
    u[1] = std::sin(phi);
    return u;
  }
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      u[i] = stream.normal();
      n2 += u[i] * u[i];
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (int i = 0; i < d; ++i) u[i] *= inv;
  return u;
}

}  // namespace

EdgeConfiguration sample_continuous(const ModelParams& params, const Window& window,
                                    Stream stream) {
  params.validate();
  require(window.dim() == params.d, "window dimension differs from params.d");
  EdgeConfiguration cfg{params, window, {}, {stream_tag(stream)}};
  const int d = params.d;
  const double r_max = std::min(params.delta_max, window.diameter());
  if (params.delta_min >= r_max) return cfg;

  const double mu = continuous_dominating_mean(params, window);
  if (mu > kMaxCandidates)
    throw ResourceLimit("continuous sample would draw too many candidate edges");
  const std::uint64_t n = stream.poisson(mu);
  const double shrink = 1.0 - std::pow(params.delta_min / r_max, d);
  cfg.edges.reserve(static_cast<std::size_t>(n / 2 + 16));
  for (std::uint64_t i = 0; i < n; ++i) {
    Point a(d);
    for (int m = 0; m < d; ++m) a[m] = stream.uniform(window.lo[m], window.hi[m]);
    const double r = params.delta_min * std::pow(1.0 - stream.uniform() * shrink, -1.0 / d);
    const Point u = random_direction(d, stream);
    Point b(d);
    for (int m = 0; m < d; ++m) b[m] = a[m] + r * u[m];
    if (!window.contains(b) || !lex_less(a, b)) continue;
    // r is drawn below r_max, but rounding in a + r u can nudge the realized
    // scope across a cutoff.
    const double s = euclidean(a, b);
    if (!(s >= params.delta_min && s < params.delta_max)) continue;
    cfg.edges.push_back(LongEdge{a, b});
  }
  std::sort(cfg.edges.begin(), cfg.edges.end(), edge_less);
  return cfg;
}

EdgeConfiguration superpose(const EdgeConfiguration& base, double extra_beta, Stream stream) {
  require(extra_beta > 0.0 && std::isfinite(extra_beta), "extra_beta must be positive");
  ModelParams extra_params = base.params;
  extra_params.beta = extra_beta;
  return superpose(base, sample_continuous(extra_params, base.window, stream));
}

EdgeConfiguration superpose(const EdgeConfiguration& base, const EdgeConfiguration& extra) {
  require(base.window == extra.window, "superpose: windows differ");
  require(base.params.d == extra.params.d &&
              base.params.delta_min == extra.params.delta_min &&
              base.params.delta_max == extra.params.delta_max,
          "superpose: scope ranges differ");
  EdgeConfiguration out;
  out.params = base.params;
  out.params.beta = base.params.beta + extra.params.beta;
  out.window = base.window;
  out.edges.reserve(base.edges.size() + extra.edges.size());
  std::merge(base.edges.begin(), base.edges.end(), extra.edges.begin(), extra.edges.end(),
             std::back_inserter(out.edges), edge_less);
  out.seed_trace = base.seed_trace;
  out.seed_trace.insert(out.seed_trace.end(), extra.seed_trace.begin(),
                        extra.seed_trace.end());
  return out;
}

}  // namespace lrp
