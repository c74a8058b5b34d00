#include "spre/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spre/error.hpp"

namespace spre {

Dataset::Dataset(Design X_, std::vector<double> f_, std::optional<std::vector<double>> cost_)
    : X(std::move(X_)), f(std::move(f_)), cost(std::move(cost_)) {
  if (f.size() != X.size()) {
    fail(ErrorCode::kDimensionMismatch, "dataset has " + std::to_string(X.size()) +
                                            " points but " + std::to_string(f.size()) + " values");
  }
  if (cost && cost->size() != f.size()) {
    fail(ErrorCode::kDimensionMismatch, "dataset cost column length differs from value count");
  }
}

Dataset Dataset::without(std::size_t i) const {
  auto g = f;
  g.erase(g.begin() + static_cast<std::ptrdiff_t>(i));
  std::optional<std::vector<double>> c;
  if (cost) {
    c = *cost;
    c->erase(c->begin() + static_cast<std::ptrdiff_t>(i));
  }
  return Dataset(X.without(i), std::move(g), std::move(c));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> g;
  std::optional<std::vector<double>> c;
  if (cost) c.emplace();
  for (std::size_t r : rows) {
    g.push_back(f.at(r));
    if (cost) c->push_back(cost->at(r));
  }
  return Dataset(X.subset(rows), std::move(g), std::move(c));
}

Dataset Dataset::appended(const std::vector<Point>& points, const std::vector<double>& values) const {
  if (points.size() != values.size()) {
    fail(ErrorCode::kDimensionMismatch, "appended points and values differ in count");
  }
  auto g = f;
  g.insert(g.end(), values.begin(), values.end());
  // Costs of the new points are unknown here, so the cost column is dropped.
  return Dataset(X.appended(points), std::move(g));
}

namespace {

double design_scale(const Design& X) {
  const double rho = X.max_coordinate();
  return rho > 0.0 ? rho : 1.0;
}

Eigen::MatrixXd scaled_vandermonde(const IndexSet& A, const Design& X, double rho) {
  return vandermonde(A, X.scaled(1.0 / rho));
}

Eigen::VectorXd scaled_monomial_vector(const IndexSet& A, std::span<const double> x, double rho) {
  Point xs(x.begin(), x.end());
  for (double& c : xs) c /= rho;
  return monomial_vector(A, xs);
}

// Divide scaled coefficients by rho^{|alpha|} to return to original units.
Eigen::VectorXd unscale_coefficients(const IndexSet& A, const Eigen::VectorXd& scaled, double rho) {
  Eigen::VectorXd out = scaled;
  for (std::size_t j = 0; j < A.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) /= std::pow(rho, A[j].order());
  }
  return out;
}

void require_unisolvent(const IndexSet& A, const Design& X) {
  if (A.dim() != X.dim()) fail(ErrorCode::kDimensionMismatch, "index set and design dimensions differ");
  if (X.size() < A.size()) {
    fail(ErrorCode::kNotUnisolvent, "need at least dim(A)=" + std::to_string(A.size()) +
                                        " points, have " + std::to_string(X.size()));
  }
  if (!is_unisolvent(A, X)) fail(ErrorCode::kNotUnisolvent, "design is not P_A-unisolvent");
}

Eigen::MatrixXd saddle_matrix(const Eigen::MatrixXd& K, const Eigen::MatrixXd& V) {
  const auto n = K.rows();
  const auto m = V.cols();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = K;
  M.topRightCorner(n, m) = V;
  M.bottomLeftCorner(m, n) = V.transpose();
  return M;
}

Eigen::FullPivLU<Eigen::MatrixXd> factor_saddle(const Eigen::MatrixXd& M) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) fail(ErrorCode::kNotUnisolvent, "saddle-point system is singular");
  return lu;
}

}  // namespace

Extrapolant::Extrapolant(IndexSet A, Covariance cov, Dataset data)
    : A_(std::move(A)), cov_(std::move(cov)), data_(std::move(data)) {}

Extrapolant Extrapolant::fit(IndexSet A, Covariance cov, Dataset data) {
  require_unisolvent(A, data.X);
  Extrapolant model(std::move(A), std::move(cov), std::move(data));
  const Design& X = model.data_.X;
  const auto n = static_cast<Eigen::Index>(X.size());
  const auto m = static_cast<Eigen::Index>(model.A_.size());

  const Eigen::MatrixXd K = gram(model.cov_, X);
  model.max_diag_ = K.diagonal().maxCoeff();
  model.chol_.compute(K);
  if (model.chol_.info() != Eigen::Success || !(model.max_diag_ > 0.0)) {
    fail(ErrorCode::kGramNotPd, "Gram matrix is not positive definite");
  }
  const Eigen::VectorXd piv = model.chol_.matrixL().toDenseMatrix().diagonal();
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * model.max_diag_;
  if (!((piv.array().square() > floor).all()) || !piv.allFinite()) {
    fail(ErrorCode::kGramNotPd, "Gram matrix is numerically singular");
  }

  model.rho_ = design_scale(X);
  const Eigen::MatrixXd V = scaled_vandermonde(model.A_, X, model.rho_);
  model.W_ = model.chol_.matrixL().solve(V);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(model.W_);
  model.R_ = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Eigen::VectorXd rdiag = model.R_.diagonal().cwiseAbs();
  if (!(rdiag.minCoeff() > 1e-15 * rdiag.maxCoeff())) {
    fail(ErrorCode::kNotUnisolvent, "V_A^T K^-1 V_A is singular to working precision");
  }

  const Eigen::Map<const Eigen::VectorXd> f(model.data_.f.data(), n);
  model.z_ = model.chol_.matrixL().solve(f);
  const Eigen::VectorXd qtz = (qr.householderQ().transpose() * model.z_).head(m);
  model.beta_scaled_ = model.R_.triangularView<Eigen::Upper>().solve(qtz);
  return model;
}

Eigen::VectorXd Extrapolant::scaled_monomials(std::span<const double> x) const {
  return scaled_monomial_vector(A_, x, rho_);
}

Posterior Extrapolant::predict(std::span<const double> x_star) const {
  if (x_star.size() != A_.dim()) fail(ErrorCode::kDimensionMismatch, "query point dimension mismatch");
  const Eigen::VectorXd k = cross_covariance(cov_, data_.X, x_star);
  const double kss = cov_(x_star, x_star);
  const Eigen::VectorXd a = chol_.matrixL().solve(k);   // L^{-1} k(x*)
  const Eigen::VectorXd r = scaled_monomials(x_star) - W_.transpose() * a;
  const Eigen::VectorXd s = R_.transpose().triangularView<Eigen::Lower>().solve(r);

  Posterior post;
  post.mean = a.dot(z_) + r.dot(beta_scaled_);
  const double explained = a.squaredNorm();
  const double trend = s.squaredNorm();
  double var = kss - explained + trend;
  const double scale = std::max({std::abs(kss), explained, trend, max_diag_});
  if (var < 0.0) {
    if (var < -kVarianceClampTol * scale) {
      fail(ErrorCode::kNumericalBreakdown,
           "negative posterior variance " + std::to_string(var) + " beyond tolerance");
    }
    var = 0.0;
  }
  post.variance = var;
  return post;
}

Posterior Extrapolant::predict_at_zero() const {
  const Point zero(A_.dim(), 0.0);
  return predict(zero);
}

Eigen::VectorXd Extrapolant::beta() const { return unscale_coefficients(A_, beta_scaled_, rho_); }

Extrapolant spre_fit(const IndexSet& A, const KernelSpec& kernel, const Dataset& data) {
  return Extrapolant::fit(A, Covariance(kernel), data);
}

Posterior spre_predict(const Extrapolant& model, std::span<const double> x_star) {
  return model.predict(x_star);
}

double posterior_variance(const IndexSet& A, const Covariance& cov, const Design& X,
                          std::span<const double> x_star) {
  Dataset blank(X, std::vector<double>(X.size(), 0.0));
  return Extrapolant::fit(A, cov, std::move(blank)).predict(x_star).variance;
}

double mre_extrapolate(const IndexSet& A, const Dataset& data) {
  const Eigen::VectorXd w = lagrange_at_zero(A, data.X);
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) acc += w(static_cast<Eigen::Index>(i)) * data.f[i];
  return acc;
}

Dataset mre_select_subset(const IndexSet& A, const Dataset& data) {
  if (data.size() < A.size()) {
    fail(ErrorCode::kInvalidArgument, "MRE needs at least dim(A)=" + std::to_string(A.size()) +
                                          " points, have " + std::to_string(data.size()));
  }
  std::vector<double> norms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double sq = 0.0;
    for (double c : data.X[i]) sq += c * c;
    norms[i] = sq;
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });
  order.resize(A.size());
  std::sort(order.begin(), order.end());
  return data.subset(order);
}

Posterior gre_fit_predict(const LeadScaling& lead, double sigma2_theta, const Dataset& data,
                          std::span<const double> x_star) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (lead(data.X[i]) == 0.0) {
      fail(ErrorCode::kDegenerateScaling,
           "lead scaling vanishes at training point " + std::to_string(i));
    }
  }
  Covariance cov(KernelSpec(KernelFamily::kWhiteNoise, {sigma2_theta}), lead);
  return Extrapolant::fit(IndexSet::constant(data.dim()), std::move(cov), data).predict(x_star);
}

BlockSolution spre_block_system(const IndexSet& A, const Covariance& cov, const Dataset& data,
                                std::span<const double> x_star) {
  require_unisolvent(A, data.X);
  if (x_star.size() != A.dim()) fail(ErrorCode::kDimensionMismatch, "query point dimension mismatch");
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(A.size());
  const double rho = design_scale(data.X);
  const Eigen::MatrixXd K = gram(cov, data.X);
  const Eigen::MatrixXd V = scaled_vandermonde(A, data.X, rho);
  const auto lu = factor_saddle(saddle_matrix(K, V));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = Eigen::Map<const Eigen::VectorXd>(data.f.data(), n);
  const Eigen::VectorXd sol = lu.solve(rhs);

  BlockSolution out;
  out.c = sol.head(n);
  const Eigen::VectorXd b_scaled = sol.tail(m);
  out.b = unscale_coefficients(A, b_scaled, rho);
  out.value = scaled_monomial_vector(A, x_star, rho).dot(b_scaled) +
              cross_covariance(cov, data.X, x_star).dot(out.c);
  return out;
}

double spre_mean_via_block_system(const IndexSet& A, const Covariance& cov, const Dataset& data,
                                  std::span<const double> x_star) {
  return spre_block_system(A, cov, data, x_star).value;
}

double power_function_sq(const IndexSet& A, const Covariance& cov, const Design& X,
                         std::span<const double> x) {
  require_unisolvent(A, X);
  if (x.size() != A.dim()) fail(ErrorCode::kDimensionMismatch, "query point dimension mismatch");
  const auto n = static_cast<Eigen::Index>(X.size());
  const auto m = static_cast<Eigen::Index>(A.size());
  const double rho = design_scale(X);
  const Eigen::MatrixXd K = gram(cov, X);
  Eigen::LLT<Eigen::MatrixXd> pd(K);
  if (pd.info() != Eigen::Success) fail(ErrorCode::kGramNotPd, "Gram matrix is not positive definite");
  const Eigen::MatrixXd V = scaled_vandermonde(A, X, rho);
  const auto lu = factor_saddle(saddle_matrix(K, V));

  const Eigen::VectorXd kx = cross_covariance(cov, X, x);
  Eigen::VectorXd rhs(n + m);
  rhs.head(n) = kx;
  rhs.tail(m) = scaled_monomial_vector(A, x, rho);
  const Eigen::VectorXd u = lu.solve(rhs).head(n);
  const double q = cov(x, x) - 2.0 * u.dot(kx) + u.dot(K * u);
  return std::max(q, 0.0);
}

double power_function_sq_at_zero(const IndexSet& A, const Covariance& cov, const Design& X) {
  const Point zero(A.dim(), 0.0);
  return power_function_sq(A, cov, X, zero);
}

double abs_error(double estimate, double truth) { return std::abs(estimate - truth); }

double rel_error(const Posterior& post, double truth) {
  if (!(post.variance > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "relative error is undefined for zero posterior variance");
  }
  return (truth - post.mean) / std::sqrt(post.variance);
}

}  // namespace spre
