#pragma once

// Extrapolation engines: the sparse GP posterior (SPRE), multivariate
// Richardson extrapolation (MRE), Gauss-Richardson extrapolation (GRE), and
// the saddle-point / power-function routes used to cross-check them.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spre/index_poly.hpp"
#include "spre/kernels.hpp"

namespace spre {

struct Dataset {
  Design X;
  std::vector<double> f;
  /// Per-point simulation cost, when known.
  std::optional<std::vector<double>> cost;

  Dataset(Design X_, std::vector<double> f_,
          std::optional<std::vector<double>> cost_ = std::nullopt);

  std::size_t size() const noexcept { return f.size(); }
  std::size_t dim() const noexcept { return X.dim(); }
  Dataset without(std::size_t i) const;
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset appended(const std::vector<Point>& points, const std::vector<double>& values) const;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Relative negative-variance tolerance before clamping gives up.
inline constexpr double kVarianceClampTol = 1e-12;

/// A fitted SPRE model. Immutable after construction; predictions are
/// const and may run concurrently.
///
/// The design is internally rescaled by rho = max coordinate so monomial
/// columns stay O(1) at tiny tolerances; beta() reports coefficients in the
/// original coordinates.
class Extrapolant {
 public:
  /// Throws kNotUnisolvent when X is not P_A-unisolvent (including n < dim(A))
  /// and kGramNotPd when the Gram matrix cannot be Cholesky-factored.
  static Extrapolant fit(IndexSet A, Covariance cov, Dataset data);

  Posterior predict(std::span<const double> x_star) const;
  Posterior predict_at_zero() const;

  const IndexSet& index_set() const noexcept { return A_; }
  const Covariance& covariance() const noexcept { return cov_; }
  const Dataset& data() const noexcept { return data_; }
  /// GLS coefficients beta_hat_A in original coordinates.
  Eigen::VectorXd beta() const;

 private:
  Extrapolant(IndexSet A, Covariance cov, Dataset data);

  Eigen::VectorXd scaled_monomials(std::span<const double> x) const;

  IndexSet A_;
  Covariance cov_;
  Dataset data_;
  double rho_ = 1.0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::MatrixXd W_;          // L^{-1} V_A (scaled columns)
  Eigen::MatrixXd R_;          // W = Q R
  Eigen::VectorXd z_;          // L^{-1} f
  Eigen::VectorXd beta_scaled_;
  double max_diag_ = 0.0;
};

/// Convenience wrappers mirroring the operation names.
Extrapolant spre_fit(const IndexSet& A, const KernelSpec& kernel, const Dataset& data);
Posterior spre_predict(const Extrapolant& model, std::span<const double> x_star);

/// Posterior variance at x_star for design X. Data values do not enter.
double posterior_variance(const IndexSet& A, const Covariance& cov, const Design& X,
                          std::span<const double> x_star);

/// p(0) for the P_A interpolant of the data; needs n = dim(A).
double mre_extrapolate(const IndexSet& A, const Dataset& data);

/// The dim(A) points nearest the origin (Euclidean), ties by original order.
Dataset mre_select_subset(const IndexSet& A, const Dataset& data);

/// Constant-mean GP with covariance sigma^2 eps(x) eps(y) delta(x, y).
Posterior gre_fit_predict(const LeadScaling& lead, double sigma2_theta, const Dataset& data,
                          std::span<const double> x_star);

struct BlockSolution {
  Eigen::VectorXd c;  // kernel weights
  Eigen::VectorXd b;  // polynomial coefficients, original coordinates
  double value = 0.0; // s(x_star)
};

/// Minimal semi-norm interpolant from the saddle-point system
/// [[K, V], [V^T, 0]] [c; b] = [f; 0], evaluated at x_star.
BlockSolution spre_block_system(const IndexSet& A, const Covariance& cov, const Dataset& data,
                                std::span<const double> x_star);
double spre_mean_via_block_system(const IndexSet& A, const Covariance& cov, const Dataset& data,
                                  std::span<const double> x_star);

/// Squared power function P^2(x) through the constrained quadratic form in
/// the optimal weights u*(x).
double power_function_sq(const IndexSet& A, const Covariance& cov, const Design& X,
                         std::span<const double> x);
double power_function_sq_at_zero(const IndexSet& A, const Covariance& cov, const Design& X);

double abs_error(double estimate, double truth);
/// (truth - mean) / sqrt(variance); requires variance > 0.
double rel_error(const Posterior& post, double truth);

}  // namespace spre
