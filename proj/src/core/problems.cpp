#include "spre/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spre/error.hpp"
#include "spre/rng.hpp"

namespace spre {

long double Polynomial::operator()(long double z) const {
  long double v = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

Polynomial Polynomial::antiderivative() const {
  Polynomial out;
  out.c.assign(c.size() + 1, 0.0L);
  for (std::size_t k = 0; k < c.size(); ++k) out.c[k + 1] = c[k] / static_cast<long double>(k + 1);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out;
  if (c.empty() || other.c.empty()) return out;
  out.c.assign(c.size() + other.c.size() - 1, 0.0L);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < other.c.size(); ++j) out.c[i + j] += c[i] * other.c[j];
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out;
  out.c.assign(std::max(c.size(), other.c.size()), 0.0L);
  for (std::size_t i = 0; i < c.size(); ++i) out.c[i] += c[i];
  for (std::size_t i = 0; i < other.c.size(); ++i) out.c[i] += other.c[i];
  return out;
}

Polynomial Polynomial::scaled(long double a) const {
  Polynomial out = *this;
  for (auto& v : out.c) v *= a;
  return out;
}

SplitPolynomial phi(int i) {
  if (i < 0) fail(ErrorCode::kInvalidArgument, "phi index must be >= 0");
  SplitPolynomial p{{{0.5L, -1.0L}}, {{-0.5L, 1.0L}}};
  for (int k = 1; k <= i; ++k) {
    SplitPolynomial next;
    next.left = p.left.antiderivative();
    const Polynomial right_anti = p.right.antiderivative();
    // Continuity at 1/2: phi_k(z) = phi_k(1/2) + int_{1/2}^z phi_{k-1}.
    const long double shift = next.left(0.5L) - right_anti(0.5L);
    next.right = right_anti + Polynomial{{shift}};
    p = std::move(next);
  }
  return p;
}

CubatureProblem::CubatureProblem(std::size_t d, int s) : d_(d), s_(s) {
  if (d_ == 0) fail(ErrorCode::kInvalidArgument, "cubature dimension must be positive");
  if (s_ < 0) fail(ErrorCode::kInvalidArgument, "smoothness level must be >= 0");
  phi_ = phi(2 * s_ + 2);
  // phi_i is non-negative and increasing on [0,1] for i >= 1, so the sup is at 1.
  norm_ = phi_(1.0L);
}

CubatureProblem CubatureProblem::constant(std::size_t d, double value) {
  CubatureProblem p(d, 0);
  p.constant_ = value;
  return p;
}

double CubatureProblem::integrand(std::span<const double> t) const {
  if (constant_) return *constant_;
  long double mean = 0.0L;
  for (double v : t) mean += v;
  mean /= static_cast<long double>(t.size());
  return static_cast<double>(1.0L + phi_(mean) / norm_);
}

IndexSet CubatureProblem::expansion_index_set() const {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= s_; ++k) {
    for (const auto& a : indices_of_order(d_, k)) {
      std::vector<int> e = a.exponents();
      for (int& v : e) v *= 2;
      out.emplace_back(std::move(e));
    }
  }
  return IndexSet(d_, std::move(out));
}

long long cells_for_width(double width) {
  if (!(width > 0.0) || !(width <= 1.0 + 1e-12)) {
    fail(ErrorCode::kNonReciprocalWidth, "cell width must lie in (0, 1], got " + std::to_string(width));
  }
  const double inv = 1.0 / width;
  const double n = std::round(inv);
  if (n < 1.0 || std::abs(inv - n) > 1e-9 * inv) {
    fail(ErrorCode::kNonReciprocalWidth, "cell width " + std::to_string(width) + " is not 1/N");
  }
  return static_cast<long long>(n);
}

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
    else carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Sum of phi(mean) over the grid, with the running coordinate sum `partial`.
double grid_sum(const CubatureProblem& prob, std::span<const long long> cells, std::size_t axis,
                long double partial) {
  const long long n = cells[axis];
  const long double inv = 1.0L / static_cast<long double>(n);
  CompensatedSum acc;
  if (axis + 1 == cells.size()) {
    const long double dd = static_cast<long double>(cells.size());
    const SplitPolynomial& phi = prob.phi_table();
    for (long long i = 0; i < n; ++i) {
      const long double t = (static_cast<long double>(i) + 0.5L) * inv;
      acc.add(static_cast<double>(phi((partial + t) / dd)));
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      const long double t = (static_cast<long double>(i) + 0.5L) * inv;
      acc.add(grid_sum(prob, cells, axis + 1, partial + t));
    }
  }
  return acc.value() / static_cast<double>(n);
}

}  // namespace

double cubature_eval(const CubatureProblem& prob, std::span<const double> widths) {
  if (widths.size() != prob.dim()) fail(ErrorCode::kDimensionMismatch, "width vector dimension mismatch");
  std::vector<long long> cells;
  for (double w : widths) cells.push_back(cells_for_width(w));
  if (prob.constant_) return *prob.constant_;
  // sum vol(C_i) g(t_i) = 1 + mean over cells of phi / norm.
  return 1.0 + grid_sum(prob, cells, 0, 0.0L) / prob.norm_inf();
}

double cubature_truth(const CubatureProblem& prob) {
  if (prob.constant_) return *prob.constant_;
  const std::size_t d = prob.d_;
  const auto dd = static_cast<long double>(d);

  // Density of the mean of d uniforms on [k/d, (k+1)/d]:
  // p(z) = d/(d-1)! sum_{j<=k} (-1)^j C(d,j) (d z - j)^{d-1}.
  auto density_piece = [&](std::size_t k) {
    Polynomial p{{0.0L}};
    long double fact = 1.0L;
    for (std::size_t i = 2; i < d; ++i) fact *= static_cast<long double>(i);
    for (std::size_t j = 0; j <= k; ++j) {
      long double binom = 1.0L;
      for (std::size_t i = 0; i < j; ++i)
        binom = binom * static_cast<long double>(d - i) / static_cast<long double>(i + 1);
      Polynomial term{{1.0L}};
      const Polynomial lin{{-static_cast<long double>(j), dd}};
      for (std::size_t e = 0; e + 1 < d; ++e) term = term * lin;
      p = p + term.scaled(((j % 2) ? -1.0L : 1.0L) * binom);
    }
    return p.scaled(dd / fact);
  };

  std::vector<long double> breaks;
  for (std::size_t k = 0; k <= d; ++k) breaks.push_back(static_cast<long double>(k) / dd);
  breaks.push_back(0.5L);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  long double integral = 0.0L;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const long double a = breaks[b];
    const long double c = breaks[b + 1];
    const long double mid = 0.5L * (a + c);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(mid * dd), d - 1);
    const Polynomial& phi_piece = mid < 0.5L ? prob.phi_.left : prob.phi_.right;
    const Polynomial anti = (phi_piece * density_piece(k)).antiderivative();
    integral += anti(c) - anti(a);
  }
  return static_cast<double>(1.0L + integral / prob.norm_);
}

double EdSynthetic::noise(std::span<const double> x) const {
  std::uint64_t h = mix64(seed_);
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  UniformStream stream(h);
  return standard_normal(stream);
}

double EdSynthetic::operator()(std::span<const double> x) const {
  if (x.size() != 2) fail(ErrorCode::kDimensionMismatch, "synthetic design function is 2-dimensional");
  const double x1 = x[0];
  const double x2 = x[1];
  const double trend = 1.0 + x1 - 2.0 * x2 + 3.0 * x1 * x1;
  const double amp = kAmplitude * x1 * x1 * x2 * x2;
  if (amp == 0.0) return trend;
  return trend + amp * noise(x);
}

IndexSet EdSynthetic::true_index_set() {
  return IndexSet(2, {MultiIndex({0, 0}), MultiIndex({1, 0}), MultiIndex({0, 1}), MultiIndex({2, 0})});
}

double ed_synthetic_eval(const EdSynthetic& prob, std::span<const double> x) { return prob(x); }

Design reference_design(std::string_view name) {
  if (name == "cubature-d1") {
    return Design(1, {{0.5}, {0.25}, {1.0 / 6.0}, {0.125}});
  }
  if (name == "cubature-d2") {
    const std::vector<Point> base{{1, 1}, {1, 0.5}, {0.5, 1}, {0.5, 0.5}, {1, 1.0 / 3.0}, {1.0 / 3.0, 1}};
    return Design(2, base).scaled(0.5);
  }
  if (name == "cubature-d3") {
    const std::vector<Point> base{{1, 1, 1},     {1, 1, 0.5},     {1, 0.5, 1},     {0.5, 1, 1},
                                  {1, 0.5, 0.5}, {0.5, 1, 0.5},   {0.5, 0.5, 1},   {0.5, 0.5, 0.5}};
    return Design(3, base).scaled(0.5);
  }
  if (name == "case-study-d3") {
    return Design(3, {{0.062, 0.812, 0.437},
                      {0.187, 0.312, 0.937},
                      {0.312, 0.937, 0.187},
                      {0.437, 0.062, 0.687},
                      {0.562, 0.687, 0.062},
                      {0.687, 0.187, 0.562},
                      {0.812, 0.562, 0.312},
                      {0.937, 0.437, 0.812}});
  }
  fail(ErrorCode::kInvalidArgument, "unknown reference design '" + std::string(name) + "'");
}

std::vector<std::string> reference_design_names() {
  return {"cubature-d1", "cubature-d2", "cubature-d3", "case-study-d3"};
}

ScaledDesignFamily ScaledDesignFamily::halving(Design base, std::span<const int> exponents) {
  std::vector<double> h;
  for (int m : exponents) {
    if (m < 0) fail(ErrorCode::kInvalidArgument, "scaling exponents must be >= 0");
    h.push_back(std::ldexp(1.0, -m));
  }
  return {std::move(base), std::move(h)};
}

}  // namespace spre
