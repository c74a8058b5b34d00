#pragma once

// Multi-index sets, sparse monomial bases and the Vandermonde / Lagrange
// machinery used for polynomial extrapolation to the origin.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spre {

using Point = std::vector<double>;

/// Exponent vector alpha of the monomial x^alpha.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(std::size_t dim) {
    return MultiIndex(std::vector<int>(dim, 0));
  }

  std::size_t dim() const noexcept { return exps_.size(); }
  int operator[](std::size_t j) const { return exps_[j]; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  /// |alpha|, the total degree.
  int order() const noexcept;
  bool is_zero() const noexcept { return order() == 0; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exps_;
};

/// Canonical ordering: ascending total degree, then descending exponent
/// vectors, so (1,0) precedes (0,1) and (2,0) < (1,1) < (0,2).
bool graded_less(const MultiIndex& a, const MultiIndex& b);

/// A set of multi-indices spanning the basis P_A. Always contains the zero
/// index and is kept in canonical order, which puts the zero index first.
class IndexSet {
 public:
  IndexSet(std::size_t dim, std::vector<MultiIndex> indices);

  /// {0} in dimension `dim`.
  static IndexSet constant(std::size_t dim);
  /// {alpha : |alpha| <= degree}.
  static IndexSet total_degree(std::size_t dim, int degree);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& operator[](std::size_t j) const { return indices_[j]; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(const MultiIndex& alpha) const;
  int max_order() const;
  IndexSet with(const MultiIndex& alpha) const;
  IndexSet with(const std::vector<MultiIndex>& extra) const;

  /// Indices of minimal nonzero order; empty when the set is {0}.
  std::vector<MultiIndex> lead() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t dim_;
  std::vector<MultiIndex> indices_;
};

/// All multi-indices with |alpha| = order in `dim` variables, canonical order.
std::vector<MultiIndex> indices_of_order(std::size_t dim, int order);

/// Ordered point list in [0, inf)^d. Points may repeat.
class Design {
 public:
  Design(std::size_t dim, std::vector<Point> points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// {h x_i}.
  Design scaled(double h) const;
  /// {offset + h x_i}.
  Design shifted(const Point& offset, double h) const;
  Design without(std::size_t i) const;
  Design subset(std::span<const std::size_t> rows) const;
  Design appended(const std::vector<Point>& extra) const;
  /// Largest coordinate over all points (0 for an empty design).
  double max_coordinate() const;

 private:
  std::size_t dim_;
  std::vector<Point> points_;
};

/// x^alpha with 0^0 = 1.
double monomial_eval(std::span<const double> x, const MultiIndex& alpha);

/// v_A(x) = [x^alpha_j]_j.
Eigen::VectorXd monomial_vector(const IndexSet& A, std::span<const double> x);

/// V_A(X)(i, j) = x_i^alpha_j.
Eigen::MatrixXd vandermonde(const IndexSet& A, const Design& X);

/// Full-column-rank test on the column-equilibrated Vandermonde matrix.
bool is_unisolvent(const IndexSet& A, const Design& X, double rel_tol = 1e-10);

/// Lagrange weights l_i^A(0; X), requiring n = dim(A) and unisolvency.
Eigen::VectorXd lagrange_at_zero(const IndexSet& A, const Design& X);

/// Sum of absolute Lagrange weights at the origin.
double lebesgue_at_zero(const IndexSet& A, const Design& X);

}  // namespace spre
