#pragma once

#include "lrp/model.hpp"
#include "lrp/rng.hpp"

namespace lrp {

/// Value of the double integral of |u - v|^{-2d} over the unit cubes centered
/// at 0 and at k. Infinite exactly when the cubes touch.
struct CubePairMass {
  Site offset;
  double mass = 0.0;

  bool touching() const { return std::isinf(mass); }
};

/// Closed form for d = 1; adaptive Gauss-Kronrod quadrature for d >= 2
/// (relative error well below 1e-8). Results are cached per symmetry orbit.
CubePairMass cube_pair_mass(int d, const Site& k);

/// Quadrature route for any d, without the d = 1 closed form or the cache.
/// Integrates the tent-weighted kernel prod(1 - |t_m|) |k + t|^{-2d} over
/// [-1, 1]^d, which equals the cube-pair integral after the substitution
/// t = v - u - k.
double cube_pair_mass_quadrature(int d, const Site& k, double rel_tol = 1e-11);

/// Probability that the long edge <0, k> is open: 1 for nearest neighbors and
/// touching cubes, otherwise 1 - exp(-beta * mass).
double discrete_edge_prob(const ModelParams& params, const Site& k);

/// Exact sample of the discrete model on `box`. Each unordered pair with
/// l1-distance > 1 is open independently with discrete_edge_prob. Pairs at
/// l-infinity distance 1 are represented implicitly (probability one).
/// Far pairs are drawn by geometric skipping over offset groups with a
/// dominating probability followed by thinning.
LatticeGraph sample_discrete(const ModelParams& params, const IntBox& box, Stream stream);

/// Reference sampler: scans every pair. Only for small boxes.
LatticeGraph sample_discrete_naive(const ModelParams& params, const IntBox& box,
                                   Stream stream);

/// Mean number of candidates drawn by sample_continuous before rejection.
double continuous_dominating_mean(const ModelParams& params, const Window& window);

/// Exact sample of the Poisson edge process with intensity beta |x-y|^{-2d}
/// on the half-space {a < b lexicographically}, restricted to edges with both
/// endpoints in `window` and scope in [delta_min, delta_max).
EdgeConfiguration sample_continuous(const ModelParams& params, const Window& window,
                                    Stream stream);

/// Union of `base` with an independent sample at coupling extra_beta; the
/// result is a sample at beta + extra_beta containing every edge of base.
EdgeConfiguration superpose(const EdgeConfiguration& base, double extra_beta, Stream stream);

/// Union of two independent samples on the same window and scope range;
/// the couplings add. Throws InvalidArgument on a mismatch.
EdgeConfiguration superpose(const EdgeConfiguration& base, const EdgeConfiguration& extra);

}  // namespace lrp
