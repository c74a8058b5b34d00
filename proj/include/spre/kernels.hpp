#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spre/index_poly.hpp"

namespace spre {

enum class KernelFamily { kWhiteNoise, kMatern12, kMatern32, kGaussian };

std::string_view to_string(KernelFamily family) noexcept;
/// Accepts the canonical names ("WhiteNoise", "Matern12", "Matern32",
/// "Gaussian"), case-insensitively.
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// Number of unconstrained parameters for a family.
std::size_t parameter_count(KernelFamily family) noexcept;
/// Initial unconstrained parameters: all ones.
std::vector<double> initial_theta(KernelFamily family);

/// log(1 + exp(z)), returning z itself once exp(z) dominates.
double softplus(double z) noexcept;
/// Inverse of softplus on (0, inf).
double softplus_inverse(double y);

/// A parametric kernel with unconstrained parameters theta:
/// sigma^2 = softplus(theta[0]), lengthscale = softplus(theta[1]).
class KernelSpec {
 public:
  KernelSpec(KernelFamily family, std::vector<double> theta);

  /// Build from positive amplitude and lengthscale (ignored for white noise).
  static KernelSpec from_natural(KernelFamily family, double sigma2, double lengthscale = 1.0);

  KernelFamily family() const noexcept { return family_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  double sigma2() const noexcept { return softplus(theta_[0]); }
  double lengthscale() const noexcept;

  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  KernelFamily family_;
  std::vector<double> theta_;
};

/// k(x, y) for the kernel's family.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// epsilon(x) = sum over lead of x^alpha.
class LeadScaling {
 public:
  explicit LeadScaling(std::vector<MultiIndex> lead);

  const std::vector<MultiIndex>& lead() const noexcept { return lead_; }
  double operator()(std::span<const double> x) const;

 private:
  std::vector<MultiIndex> lead_;
};

/// epsilon(x) epsilon(y) k(x, y). Only the white-noise base is supported.
double gre_covariance(const KernelSpec& base, const LeadScaling& eps,
                      std::span<const double> x, std::span<const double> y);

/// Covariance function of the GP prior: either a plain kernel, or the
/// numerically-informed product epsilon(x) epsilon(y) k(x, y).
class Covariance {
 public:
  Covariance(KernelSpec kernel) : kernel_(std::move(kernel)) {}  // NOLINT(implicit)
  Covariance(KernelSpec kernel, LeadScaling scaling);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const std::optional<LeadScaling>& scaling() const noexcept { return scaling_; }
  /// Same structure, different kernel parameters.
  Covariance with_theta(std::vector<double> theta) const;

  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  KernelSpec kernel_;
  std::optional<LeadScaling> scaling_;
};

/// K = [c(x_i, x_j)].
Eigen::MatrixXd gram(const Covariance& cov, const Design& X);
/// [c(x_i, x)]_i.
Eigen::VectorXd cross_covariance(const Covariance& cov, const Design& X, std::span<const double> x);

}  // namespace spre
