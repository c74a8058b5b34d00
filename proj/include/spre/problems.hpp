#pragma once

// Benchmark simulators with known limits: the midpoint-rule cubature family
// and the synthetic function used for sequential design.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spre/index_poly.hpp"

namespace spre {

/// Polynomial sum_k c[k] z^k.
struct Polynomial {
  std::vector<long double> c;

  long double operator()(long double z) const;
  Polynomial antiderivative() const;  // zero constant term
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial scaled(long double a) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

/// Two-piece polynomial on [0, 1/2] and [1/2, 1].
struct SplitPolynomial {
  Polynomial left;
  Polynomial right;

  long double operator()(long double z) const { return z < 0.5L ? left(z) : right(z); }
};

/// phi_0(z) = |z - 1/2|, phi_i(z) = integral_0^z phi_{i-1}.
SplitPolynomial phi(int i);

/// Midpoint-rule cubature of g(t) = 1 + phi_{2s+2}(mean(t)) / |phi_{2s+2}|_inf
/// on [0,1]^d, with cell widths x_j = 1/N_j as the tolerance parameters.
class CubatureProblem {
 public:
  CubatureProblem(std::size_t d, int s);
  /// Degenerate integrand g == value, for testing.
  static CubatureProblem constant(std::size_t d, double value);

  std::size_t dim() const noexcept { return d_; }
  int smoothness() const noexcept { return s_; }
  const SplitPolynomial& phi_table() const noexcept { return phi_; }
  double norm_inf() const noexcept { return static_cast<double>(norm_); }

  /// g at a point of [0,1]^d.
  double integrand(std::span<const double> t) const;

  /// Index set of the even-power error expansion, {2 alpha : |alpha| <= s}.
  IndexSet expansion_index_set() const;

 private:
  std::size_t d_;
  int s_;
  SplitPolynomial phi_;
  long double norm_ = 1.0L;
  std::optional<double> constant_;

  friend double cubature_truth(const CubatureProblem&);
  friend double cubature_eval(const CubatureProblem&, std::span<const double>);
};

/// Cells per axis for a width, validated to be a reciprocal integer within
/// 1e-9 relative.
long long cells_for_width(double width);

double cubature_eval(const CubatureProblem& prob, std::span<const double> widths);
double cubature_truth(const CubatureProblem& prob);

/// f(x) = 1 + x1 - 2 x2 + 3 x1^2 + 1e-4 x1^2 x2^2 eps(x) on [0,1]^2 with a
/// seeded white-noise field eps. Repeat queries return identical values.
class EdSynthetic {
 public:
  static constexpr double kAmplitude = 1e-4;

  explicit EdSynthetic(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  double noise(std::span<const double> x) const;
  double operator()(std::span<const double> x) const;
  /// {(0,0), (1,0), (0,1), (2,0)}.
  static IndexSet true_index_set();

 private:
  std::uint64_t seed_;
};

double ed_synthetic_eval(const EdSynthetic& prob, std::span<const double> x);

/// Names: "cubature-d1", "cubature-d2", "cubature-d3", "case-study-d3".
Design reference_design(std::string_view name);
std::vector<std::string> reference_design_names();

/// Base design and the scalings h applied to it.
struct ScaledDesignFamily {
  Design base;
  std::vector<double> scalings;

  /// h = (1/2)^m for each exponent m.
  static ScaledDesignFamily halving(Design base, std::span<const int> exponents);
  Design at(std::size_t k) const { return base.scaled(scalings.at(k)); }
};

}  // namespace spre
