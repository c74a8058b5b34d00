#pragma once

// Leave-one-out cross-validation, kernel parameter fitting and the stepwise
// search over index sets.

#include <cstddef>
#include <vector>

#include "spre/extrapolate.hpp"
#include "spre/index_poly.hpp"
#include "spre/kernels.hpp"

namespace spre {

struct LoocvPoint {
  double mu = 0.0;
  double sigma2 = 0.0;
  double f = 0.0;
};

struct LoocvResult {
  /// L(k, A) = -sum_i log N(f_i; mu_i, sigma_i^2).
  double neg_log_density = 0.0;
  std::vector<LoocvPoint> per_point;
};

/// Refits on every X \ {x_i} and scores the held-out value. Throws FoldError
/// when a reduced design is not P_A-unisolvent, kNumericalBreakdown when a
/// held-out variance is not positive.
LoocvResult loocv(const IndexSet& A, const Covariance& cov, const Dataset& data);

struct TrustRegionOptions {
  int iterations = 10;
  double initial_radius = 1.0;
  double expand_above = 0.75;
  double shrink_below = 0.25;
  double expand_factor = 2.0;
  double shrink_factor = 0.25;
  double gradient_step = 1e-6;
  double hessian_step = 1e-3;
};

struct KernelFit {
  Covariance cov;
  /// L(A) = min over the visited iterates.
  double objective;
};

/// Minimises theta -> L(k_theta, A) from theta = 1 with a fixed number of
/// trust-region iterations. Deterministic; propagates loocv errors raised at
/// the initial point.
KernelFit optimize_kernel(const IndexSet& A, const Covariance& family, const Dataset& data,
                          const TrustRegionOptions& opts = {});
KernelFit optimize_kernel(const IndexSet& A, KernelFamily family, const Dataset& data,
                          const TrustRegionOptions& opts = {});

struct SelectionStep {
  IndexSet candidate;
  /// L(candidate); +inf when the candidate could not be scored.
  double objective;
  int order;
  /// true for the enlarged set A_i formed from all qualifying monomials.
  bool merged;
  bool accepted;
};

struct SelectionTrace {
  IndexSet chosen;
  Covariance chosen_cov;
  double chosen_objective;
  std::vector<SelectionStep> history;
};

/// Greedy order-by-order search starting from A_0 = {0}: every monomial of
/// order i that alone lowers L joins A_i, which is kept only if it improves
/// on A_{i-1}.
SelectionTrace stepwise_select(const Dataset& data, KernelFamily family,
                               const TrustRegionOptions& opts = {});

}  // namespace spre
