#include "spre/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "spre/error.hpp"

namespace spre {

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::kWhiteNoise: return "WhiteNoise";
    case KernelFamily::kMatern12: return "Matern12";
    case KernelFamily::kMatern32: return "Matern32";
    case KernelFamily::kGaussian: return "Gaussian";
  }
  return "?";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  std::string lower;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "whitenoise") return KernelFamily::kWhiteNoise;
  if (lower == "matern12") return KernelFamily::kMatern12;
  if (lower == "matern32") return KernelFamily::kMatern32;
  if (lower == "gaussian") return KernelFamily::kGaussian;
  return std::nullopt;
}

std::size_t parameter_count(KernelFamily family) noexcept {
  return family == KernelFamily::kWhiteNoise ? 1 : 2;
}

std::vector<double> initial_theta(KernelFamily family) {
  return std::vector<double>(parameter_count(family), 1.0);
}

double softplus(double z) noexcept {
  if (z > 30.0) return z;
  return std::log1p(std::exp(z));
}

double softplus_inverse(double y) {
  if (!(y > 0.0)) fail(ErrorCode::kInvalidArgument, "softplus_inverse requires y > 0");
  if (y > 30.0) return y;
  return std::log(std::expm1(y));
}

KernelSpec::KernelSpec(KernelFamily family, std::vector<double> theta)
    : family_(family), theta_(std::move(theta)) {
  if (theta_.size() != parameter_count(family_)) {
    fail(ErrorCode::kInvalidArgument,
         std::string(to_string(family_)) + " kernel expects " +
             std::to_string(parameter_count(family_)) + " parameters, got " +
             std::to_string(theta_.size()));
  }
  for (double t : theta_) {
    if (!std::isfinite(t)) fail(ErrorCode::kInvalidArgument, "kernel parameters must be finite");
  }
}

KernelSpec KernelSpec::from_natural(KernelFamily family, double sigma2, double lengthscale) {
  std::vector<double> theta{softplus_inverse(sigma2)};
  if (parameter_count(family) == 2) theta.push_back(softplus_inverse(lengthscale));
  return KernelSpec(family, std::move(theta));
}

double KernelSpec::lengthscale() const noexcept {
  return theta_.size() > 1 ? softplus(theta_[1]) : 0.0;
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) fail(ErrorCode::kDimensionMismatch, "kernel arguments differ in length");
  const double s2 = sigma2();
  if (family_ == KernelFamily::kWhiteNoise) {
    return std::equal(x.begin(), x.end(), y.begin()) ? s2 : 0.0;
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - y[j];
    sq += d * d;
  }
  const double ell = lengthscale();
  switch (family_) {
    case KernelFamily::kMatern12:
      return s2 * std::exp(-std::sqrt(sq) / ell);
    case KernelFamily::kMatern32: {
      const double a = std::sqrt(3.0) * std::sqrt(sq) / ell;
      return s2 * (1.0 + a) * std::exp(-a);
    }
    case KernelFamily::kGaussian:
      return s2 * std::exp(-sq / (ell * ell));
    case KernelFamily::kWhiteNoise:
      break;
  }
  return 0.0;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  return spec(x, y);
}

LeadScaling::LeadScaling(std::vector<MultiIndex> lead) : lead_(std::move(lead)) {
  if (lead_.empty()) fail(ErrorCode::kInvalidArgument, "lead scaling needs at least one multi-index");
  for (const auto& a : lead_) {
    if (a.is_zero()) fail(ErrorCode::kInvalidArgument, "lead scaling must exclude the zero index");
    if (a.dim() != lead_.front().dim()) {
      fail(ErrorCode::kDimensionMismatch, "lead multi-indices differ in length");
    }
  }
}

double LeadScaling::operator()(std::span<const double> x) const {
  double e = 0.0;
  for (const auto& a : lead_) e += monomial_eval(x, a);
  return e;
}

double gre_covariance(const KernelSpec& base, const LeadScaling& eps,
                      std::span<const double> x, std::span<const double> y) {
  if (base.family() != KernelFamily::kWhiteNoise) {
    fail(ErrorCode::kInvalidArgument, "gre_covariance supports the white-noise base kernel only");
  }
  if (x.size() != y.size()) fail(ErrorCode::kDimensionMismatch, "covariance arguments differ in length");
  return eps(x) * eps(y) * base(x, y);
}

Covariance::Covariance(KernelSpec kernel, LeadScaling scaling)
    : kernel_(std::move(kernel)), scaling_(std::move(scaling)) {
  if (kernel_.family() != KernelFamily::kWhiteNoise) {
    fail(ErrorCode::kInvalidArgument, "scaled covariance supports the white-noise base kernel only");
  }
}

Covariance Covariance::with_theta(std::vector<double> theta) const {
  Covariance out = *this;
  out.kernel_ = KernelSpec(kernel_.family(), std::move(theta));
  return out;
}

double Covariance::operator()(std::span<const double> x, std::span<const double> y) const {
  if (scaling_) return gre_covariance(kernel_, *scaling_, x, y);
  return kernel_(x, y);
}

Eigen::MatrixXd gram(const Covariance& cov, const Design& X) {
  const auto n = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = cov(X[static_cast<std::size_t>(i)], X[static_cast<std::size_t>(j)]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Eigen::VectorXd cross_covariance(const Covariance& cov, const Design& X, std::span<const double> x) {
  Eigen::VectorXd k(static_cast<Eigen::Index>(X.size()));
  for (std::size_t i = 0; i < X.size(); ++i) k(static_cast<Eigen::Index>(i)) = cov(X[i], x);
  return k;
}

}  // namespace spre
