#include "spre/index_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spre/error.hpp"

namespace spre {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) fail(ErrorCode::kInvalidArgument, "multi-index exponents must be >= 0");
  }
}

int MultiIndex::order() const noexcept {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  const int oa = a.order();
  const int ob = b.order();
  if (oa != ob) return oa < ob;
  return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(),
                                      a.exponents().begin(), a.exponents().end());
}

IndexSet::IndexSet(std::size_t dim, std::vector<MultiIndex> indices)
    : dim_(dim), indices_(std::move(indices)) {
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "index set dimension must be positive");
  for (const auto& alpha : indices_) {
    if (alpha.dim() != dim_) {
      fail(ErrorCode::kDimensionMismatch,
           "multi-index of length " + std::to_string(alpha.dim()) +
               " in index set of dimension " + std::to_string(dim_));
    }
  }
  std::sort(indices_.begin(), indices_.end(), graded_less);
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    fail(ErrorCode::kInvalidArgument, "index set contains duplicate multi-indices");
  }
  if (indices_.empty() || !indices_.front().is_zero()) {
    fail(ErrorCode::kInvalidArgument, "index set must contain the zero multi-index");
  }
}

IndexSet IndexSet::constant(std::size_t dim) {
  return IndexSet(dim, {MultiIndex::zero(dim)});
}

IndexSet IndexSet::total_degree(std::size_t dim, int degree) {
  std::vector<MultiIndex> all;
  for (int k = 0; k <= degree; ++k) {
    auto level = indices_of_order(dim, k);
    all.insert(all.end(), level.begin(), level.end());
  }
  return IndexSet(dim, std::move(all));
}

bool IndexSet::contains(const MultiIndex& alpha) const {
  return std::find(indices_.begin(), indices_.end(), alpha) != indices_.end();
}

int IndexSet::max_order() const { return indices_.back().order(); }

IndexSet IndexSet::with(const MultiIndex& alpha) const {
  auto next = indices_;
  next.push_back(alpha);
  return IndexSet(dim_, std::move(next));
}

IndexSet IndexSet::with(const std::vector<MultiIndex>& extra) const {
  auto next = indices_;
  next.insert(next.end(), extra.begin(), extra.end());
  return IndexSet(dim_, std::move(next));
}

std::vector<MultiIndex> IndexSet::lead() const {
  std::vector<MultiIndex> out;
  int lowest = 0;
  for (const auto& alpha : indices_) {
    const int k = alpha.order();
    if (k == 0) continue;
    if (lowest == 0) lowest = k;
    if (k == lowest) out.push_back(alpha);
  }
  return out;
}

namespace {

void enumerate_order(std::size_t dim, int remaining, std::size_t pos,
                     std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == dim) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate_order(dim, remaining - e, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_order(std::size_t dim, int order) {
  std::vector<MultiIndex> out;
  if (dim == 0 || order < 0) return out;
  std::vector<int> cur(dim, 0);
  enumerate_order(dim, order, 0, cur, out);
  return out;
}

Design::Design(std::size_t dim, std::vector<Point> points)
    : dim_(dim), points_(std::move(points)) {
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "design dimension must be positive");
  for (const auto& p : points_) {
    if (p.size() != dim_) {
      fail(ErrorCode::kDimensionMismatch,
           "design point of length " + std::to_string(p.size()) +
               " in design of dimension " + std::to_string(dim_));
    }
    for (double c : p) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        fail(ErrorCode::kInvalidArgument, "design coordinates must be finite and >= 0");
      }
    }
  }
}

Design Design::scaled(double h) const {
  auto pts = points_;
  for (auto& p : pts)
    for (double& c : p) c *= h;
  return Design(dim_, std::move(pts));
}

Design Design::shifted(const Point& offset, double h) const {
  if (offset.size() != dim_) fail(ErrorCode::kDimensionMismatch, "offset dimension mismatch");
  auto pts = points_;
  for (auto& p : pts)
    for (std::size_t j = 0; j < dim_; ++j) p[j] = offset[j] + h * p[j];
  return Design(dim_, std::move(pts));
}

Design Design::without(std::size_t i) const {
  auto pts = points_;
  pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
  return Design(dim_, std::move(pts));
}

Design Design::subset(std::span<const std::size_t> rows) const {
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (std::size_t r : rows) pts.push_back(points_.at(r));
  return Design(dim_, std::move(pts));
}

Design Design::appended(const std::vector<Point>& extra) const {
  auto pts = points_;
  pts.insert(pts.end(), extra.begin(), extra.end());
  return Design(dim_, std::move(pts));
}

double Design::max_coordinate() const {
  double m = 0.0;
  for (const auto& p : points_)
    for (double c : p) m = std::max(m, c);
  return m;
}

double monomial_eval(std::span<const double> x, const MultiIndex& alpha) {
  if (x.size() != alpha.dim()) {
    fail(ErrorCode::kDimensionMismatch, "monomial_eval: point and multi-index lengths differ");
  }
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (int e = 0; e < alpha[j]; ++e) v *= x[j];
  }
  return v;
}

Eigen::VectorXd monomial_vector(const IndexSet& A, std::span<const double> x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(A.size()));
  for (std::size_t j = 0; j < A.size(); ++j) v(static_cast<Eigen::Index>(j)) = monomial_eval(x, A[j]);
  return v;
}

Eigen::MatrixXd vandermonde(const IndexSet& A, const Design& X) {
  if (A.dim() != X.dim()) fail(ErrorCode::kDimensionMismatch, "vandermonde: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(X.size());
  const auto m = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd V(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      V(i, j) = monomial_eval(X[static_cast<std::size_t>(i)], A[static_cast<std::size_t>(j)]);
  return V;
}

namespace {

// Columns rescaled to unit max-norm. An all-zero column stays zero so the
// rank test still sees it.
Eigen::MatrixXd equilibrated(Eigen::MatrixXd V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    const double s = V.col(j).cwiseAbs().maxCoeff();
    if (s > 0.0) V.col(j) /= s;
  }
  return V;
}

}  // namespace

bool is_unisolvent(const IndexSet& A, const Design& X, double rel_tol) {
  if (A.dim() != X.dim()) fail(ErrorCode::kDimensionMismatch, "is_unisolvent: dimension mismatch");
  if (X.size() < A.size()) return false;
  const Eigen::MatrixXd V = equilibrated(vandermonde(A, X));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (!(largest > 0.0)) return false;
  return smallest / largest > rel_tol;
}

Eigen::VectorXd lagrange_at_zero(const IndexSet& A, const Design& X) {
  if (A.dim() != X.dim()) fail(ErrorCode::kDimensionMismatch, "lagrange_at_zero: dimension mismatch");
  if (X.size() != A.size()) {
    fail(ErrorCode::kInvalidArgument, "lagrange_at_zero requires n = dim(A), got n=" +
                                          std::to_string(X.size()) + ", dim(A)=" +
                                          std::to_string(A.size()));
  }
  if (!is_unisolvent(A, X)) fail(ErrorCode::kNotUnisolvent, "design is not P_A-unisolvent");
  // V^T w = v_A(0) = e1. Column scaling by D gives D Vs^T w = e1, and the
  // constant column has scale 1, so Vs^T w = e1 as well.
  const Eigen::MatrixXd Vs = equilibrated(vandermonde(A, X));
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(Vs.cols());
  e1(0) = 1.0;
  return Vs.transpose().fullPivLu().solve(e1);
}

double lebesgue_at_zero(const IndexSet& A, const Design& X) {
  return lagrange_at_zero(A, X).cwiseAbs().sum();
}

}  // namespace spre
