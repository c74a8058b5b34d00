#include "spre/model_select.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "spre/error.hpp"

namespace spre {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LoocvResult loocv(const IndexSet& A, const Covariance& cov, const Dataset& data) {
  const std::size_t n = data.size();
  if (n < A.size() + 1) {
    throw FoldError(0, "LOOCV needs n >= dim(A)+1, have n=" + std::to_string(n) +
                           ", dim(A)=" + std::to_string(A.size()));
  }
  LoocvResult out;
  out.per_point.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Dataset fold = data.without(i);
    if (!is_unisolvent(A, fold.X)) {
      throw FoldError(i, "fold " + std::to_string(i) + " is not P_A-unisolvent");
    }
    Posterior post;
    try {
      post = Extrapolant::fit(A, cov, fold).predict(data.X[i]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNotUnisolvent) throw FoldError(i, e.what());
      throw;
    }
    if (!(post.variance > 0.0) || !std::isfinite(post.mean)) {
      fail(ErrorCode::kNumericalBreakdown,
           "held-out variance for fold " + std::to_string(i) + " is not positive");
    }
    const double r = data.f[i] - post.mean;
    out.neg_log_density +=
        0.5 * std::log(2.0 * std::numbers::pi * post.variance) + 0.5 * r * r / post.variance;
    out.per_point.push_back({post.mean, post.variance, data.f[i]});
  }
  if (!std::isfinite(out.neg_log_density)) {
    fail(ErrorCode::kNumericalBreakdown, "LOOCV criterion is not finite");
  }
  return out;
}

namespace {

class Objective {
 public:
  Objective(const IndexSet& A, const Covariance& base, const Dataset& data)
      : A_(A), base_(base), data_(data) {}

  double operator()(const Eigen::VectorXd& theta) const {
    try {
      return loocv(A_, at(theta), data_).neg_log_density;
    } catch (const Error&) {
      return kInf;
    }
  }

  Covariance at(const Eigen::VectorXd& theta) const {
    return base_.with_theta(std::vector<double>(theta.data(), theta.data() + theta.size()));
  }

 private:
  const IndexSet& A_;
  const Covariance& base_;
  const Dataset& data_;
};

Eigen::VectorXd fd_gradient(const Objective& L, const Eigen::VectorXd& theta, double f0, double h) {
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    Eigen::VectorXd t = theta;
    t(j) += h;
    double fp = L(t);
    if (std::isfinite(fp)) {
      g(j) = (fp - f0) / h;
      continue;
    }
    t(j) = theta(j) - h;
    const double fm = L(t);
    g(j) = std::isfinite(fm) ? (f0 - fm) / h : 0.0;
  }
  return g;
}

// Central second differences; falls back to zero curvature on failure so the
// step reduces to a steepest-descent step to the trust-region boundary.
Eigen::MatrixXd fd_hessian(const Objective& L, const Eigen::VectorXd& theta, double f0, double h) {
  const Eigen::Index p = theta.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);
  auto eval = [&](Eigen::Index a, double da, Eigen::Index b, double db) {
    Eigen::VectorXd t = theta;
    t(a) += da;
    t(b) += db;
    return L(t);
  };
  for (Eigen::Index j = 0; j < p; ++j) {
    const double fp = eval(j, h, j, 0.0);
    const double fm = eval(j, -h, j, 0.0);
    if (!std::isfinite(fp) || !std::isfinite(fm)) return Eigen::MatrixXd::Zero(p, p);
    H(j, j) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j + 1; k < p; ++k) {
      const double fpp = eval(j, h, k, h);
      const double fpm = eval(j, h, k, -h);
      const double fmp = eval(j, -h, k, h);
      const double fmm = eval(j, -h, k, -h);
      if (!std::isfinite(fpp + fpm + fmp + fmm)) return Eigen::MatrixXd::Zero(p, p);
      H(j, k) = H(k, j) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

// Solves min g.p + p.H.p / 2 subject to |p| <= radius via the eigenbasis of H.
Eigen::VectorXd trust_region_step(const Eigen::VectorXd& g, const Eigen::MatrixXd& H, double radius) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const Eigen::VectorXd lam = eig.eigenvalues();
  const Eigen::MatrixXd Q = eig.eigenvectors();
  const Eigen::VectorXd gq = Q.transpose() * g;

  auto step_for = [&](double shift) {
    Eigen::VectorXd c(gq.size());
    for (Eigen::Index i = 0; i < gq.size(); ++i) c(i) = -gq(i) / (lam(i) + shift);
    return Eigen::VectorXd(Q * c);
  };

  const double lam_min = lam.minCoeff();
  if (lam_min > 0.0) {
    const Eigen::VectorXd newton = step_for(0.0);
    if (newton.norm() <= radius) return newton;
  }
  const double gnorm = gq.norm();
  if (gnorm == 0.0) {
    // Stationary point with negative curvature: move along the lowest mode.
    if (lam_min < 0.0) return radius * Q.col(0);
    return Eigen::VectorXd::Zero(g.size());
  }
  // |p(shift)| decreases in shift on (-lam_min, inf); bracket and bisect.
  double lo = std::max(0.0, -lam_min);
  double hi = lo + gnorm / radius + std::abs(lam_min) + 1.0;
  while (step_for(hi).norm() > radius) hi *= 2.0;
  lo = std::nextafter(lo, kInf);
  if (step_for(lo).norm() < radius) {
    // Hard case: the gradient has no weight on the lowest mode.
    Eigen::VectorXd p = step_for(lo);
    const double extra = std::sqrt(std::max(0.0, radius * radius - p.squaredNorm()));
    return p + extra * Q.col(0);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (step_for(mid).norm() > radius) lo = mid;
    else hi = mid;
  }
  return step_for(hi);
}

}  // namespace

KernelFit optimize_kernel(const IndexSet& A, const Covariance& family, const Dataset& data,
                          const TrustRegionOptions& opts) {
  const auto start = initial_theta(family.kernel().family());
  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(start.size()));
  const Objective L(A, family, data);

  // Errors at the initial point propagate to the caller.
  double f = loocv(A, L.at(theta), data).neg_log_density;
  double radius = opts.initial_radius;

  for (int it = 0; it < opts.iterations; ++it) {
    const Eigen::VectorXd g = fd_gradient(L, theta, f, opts.gradient_step);
    const Eigen::MatrixXd H = fd_hessian(L, theta, f, opts.hessian_step);
    const Eigen::VectorXd p = trust_region_step(g, H, radius);
    const double predicted = -(g.dot(p) + 0.5 * p.dot(H * p));
    if (!(predicted > 0.0)) {
      radius *= opts.shrink_factor;
      continue;
    }
    const Eigen::VectorXd trial = theta + p;
    const double f_trial = L(trial);
    const double ratio = std::isfinite(f_trial) ? (f - f_trial) / predicted : -kInf;
    if (ratio < opts.shrink_below) radius *= opts.shrink_factor;
    else if (ratio > opts.expand_above) radius *= opts.expand_factor;
    if (f_trial < f) {
      theta = trial;
      f = f_trial;
    }
  }
  return {L.at(theta), f};
}

KernelFit optimize_kernel(const IndexSet& A, KernelFamily family, const Dataset& data,
                          const TrustRegionOptions& opts) {
  return optimize_kernel(A, Covariance(KernelSpec(family, initial_theta(family))), data, opts);
}

SelectionTrace stepwise_select(const Dataset& data, KernelFamily family, const TrustRegionOptions& opts) {
  const std::size_t d = data.dim();
  const std::size_t n = data.size();
  IndexSet current = IndexSet::constant(d);
  const Covariance base(KernelSpec(family, initial_theta(family)));

  SelectionTrace trace{current, base, kInf, {}};
  KernelFit best{base, kInf};
  try {
    best = optimize_kernel(current, base, data, opts);
  } catch (const Error&) {
    return trace;  // too little data to score even the constant model
  }
  trace.chosen_cov = best.cov;
  trace.chosen_objective = best.objective;
  trace.history.push_back({current, best.objective, 0, true, true});

  for (int order = 1;; ++order) {
    // Folds hold n-1 points and need n-1 >= dim(A)+1 for any enlarged set.
    if (current.size() + 2 > n) break;
    std::vector<MultiIndex> qualifying;
    KernelFit single_fit = best;
    for (const auto& alpha : indices_of_order(d, order)) {
      const IndexSet candidate = current.with(alpha);
      KernelFit fit{base, kInf};
      try {
        fit = optimize_kernel(candidate, base, data, opts);
      } catch (const Error&) {
        continue;
      }
      const bool qualifies = fit.objective < best.objective;
      trace.history.push_back({candidate, fit.objective, order, false, qualifies});
      if (qualifies) {
        qualifying.push_back(alpha);
        single_fit = fit;
      }
    }
    if (qualifying.empty()) break;

    const IndexSet enlarged = current.with(qualifying);
    KernelFit enlarged_fit{base, kInf};
    if (qualifying.size() == 1) {
      enlarged_fit = single_fit;
    } else {
      try {
        enlarged_fit = optimize_kernel(enlarged, base, data, opts);
      } catch (const Error&) {
        break;
      }
    }
    if (!std::isfinite(enlarged_fit.objective)) break;
    const bool improves = enlarged_fit.objective < best.objective;
    trace.history.push_back({enlarged, enlarged_fit.objective, order, true, improves});
    if (!improves) break;
    current = enlarged;
    best = enlarged_fit;
    trace.chosen = current;
    trace.chosen_cov = best.cov;
    trace.chosen_objective = best.objective;
  }
  return trace;
}

}  // namespace spre
