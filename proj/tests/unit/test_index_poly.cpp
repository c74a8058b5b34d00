#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "instances.hpp"
#include "oracles.hpp"
#include "spre/error.hpp"
#include "spre/index_poly.hpp"
#include "spre/problems.hpp"

using namespace spre;

namespace {

IndexSet set1(std::initializer_list<int> exps) {
  std::vector<MultiIndex> v;
  for (int e : exps) v.emplace_back(std::vector<int>{e});
  return IndexSet(1, v);
}

IndexSet set2(std::initializer_list<std::pair<int, int>> exps) {
  std::vector<MultiIndex> v;
  for (auto [a, b] : exps) v.emplace_back(std::vector<int>{a, b});
  return IndexSet(2, v);
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("index_poly") {
  TEST_CASE("monomial evaluation") {
    const std::vector<double> x{2, 3};
    CHECK(monomial_eval(x, MultiIndex({1, 2})) == 18.0);
    CHECK(monomial_eval(std::vector<double>{0.5, 0.5}, MultiIndex({0, 0})) == 1.0);
    CHECK(monomial_eval(std::vector<double>{0, 1}, MultiIndex({0, 3})) == 1.0);
    CHECK(code_of([] { monomial_eval(std::vector<double>{1}, MultiIndex({1, 1})); }) ==
          ErrorCode::kDimensionMismatch);
  }

  TEST_CASE("index set canonical order and validation") {
    const IndexSet A = set2({{0, 2}, {1, 1}, {0, 0}, {2, 0}, {0, 1}, {1, 0}});
    std::vector<std::vector<int>> got;
    for (const auto& a : A) got.push_back(a.exponents());
    const std::vector<std::vector<int>> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(got == want);
    CHECK(A[0].is_zero());
    CHECK(code_of([] { set1({1, 2}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { set1({0, 1, 1}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { IndexSet(2, {MultiIndex({0, 0}), MultiIndex({1})}); }) == ErrorCode::kDimensionMismatch);
    CHECK(IndexSet::total_degree(2, 2).size() == 6);
    CHECK(indices_of_order(3, 2).size() == 6);
    const auto lead = set2({{0, 0}, {2, 0}, {0, 2}, {3, 0}}).lead();
    REQUIRE(lead.size() == 2);
    CHECK(lead[0] == MultiIndex({2, 0}));
    CHECK(IndexSet::constant(2).lead().empty());
  }

  TEST_CASE("vandermonde examples") {
    const Eigen::MatrixXd V = vandermonde(set1({0, 1}), Design(1, {{1}, {0.5}}));
    CHECK(V(0, 0) == 1);
    CHECK(V(0, 1) == 1);
    CHECK(V(1, 0) == 1);
    CHECK(V(1, 1) == 0.5);

    const Eigen::MatrixXd ones = vandermonde(IndexSet::constant(2), Design(2, {{0.3, 0.1}, {0.2, 0.9}, {1, 1}}));
    CHECK(ones.rows() == 3);
    CHECK(ones.cols() == 1);
    CHECK(ones.isOnes());

    const Eigen::MatrixXd W =
        vandermonde(set2({{0, 0}, {1, 0}, {0, 1}}), Design(2, {{1, 1}, {1, 0.5}, {0.5, 1}}));
    Eigen::MatrixXd want(3, 3);
    want << 1, 1, 1, 1, 1, 0.5, 1, 0.5, 1;
    CHECK(W == want);
    CHECK(code_of([] { vandermonde(set1({0}), Design(2, {{1, 1}})); }) == ErrorCode::kDimensionMismatch);
  }

  TEST_CASE("unisolvency examples") {
    CHECK(is_unisolvent(set1({0, 1}), Design(1, {{1}, {0.5}})));
    CHECK_FALSE(is_unisolvent(set1({0, 1}), Design(1, {{1}, {1}})));
    CHECK_FALSE(is_unisolvent(set1({0, 1, 2}), Design(1, {{1}, {0.5}})));

    // Expansion set for s=1 in d=2 on the 6-point cubature design, checked
    // against the elimination rank oracle.
    const IndexSet A = set2({{0, 0}, {2, 0}, {0, 2}});
    const Design X = reference_design("cubature-d2");
    oracle::Mat V;
    std::vector<std::vector<double>> pts(X.points().begin(), X.points().end());
    testing_support::vandermonde_raw({{0, 0}, {2, 0}, {0, 2}}, pts, V);
    CHECK(oracle::rank(V) == 3);
    CHECK(is_unisolvent(A, X));
  }

  TEST_CASE("lagrange weights and lebesgue constant") {
    const Eigen::VectorXd w = lagrange_at_zero(set1({0, 1}), Design(1, {{1}, {0.5}}));
    CHECK(w(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(w(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lebesgue_at_zero(set1({0, 1}), Design(1, {{1}, {0.5}})) == doctest::Approx(3.0).epsilon(1e-14));

    CHECK(lagrange_at_zero(set1({0}), Design(1, {{0.7}}))(0) == doctest::Approx(1.0));
    CHECK(lebesgue_at_zero(set1({0}), Design(1, {{0.7}})) == doctest::Approx(1.0));

    // A = {0,1,2} on {1, 1/2, 1/4}: weights solve V^T w = e1, by hand elimination.
    const Eigen::VectorXd w3 = lagrange_at_zero(set1({0, 1, 2}), Design(1, {{1}, {0.5}, {0.25}}));
    oracle::Mat Vt{{1, 1, 1}, {1, 0.5L, 0.25L}, {1, 0.25L, 0.0625L}};
    const oracle::Vec ref = oracle::solve(Vt, {1, 0, 0});
    for (int i = 0; i < 3; ++i) CHECK(w3(i) == doctest::Approx(static_cast<double>(ref[i])).epsilon(1e-12));
    const double pts[3] = {1, 0.5, 0.25};
    for (int p = 0; p < 3; ++p) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += w3(i) * std::pow(pts[i], p);
      CHECK(s == doctest::Approx(p == 0 ? 1.0 : 0.0).epsilon(1e-12));
    }

    CHECK(code_of([] { lagrange_at_zero(set1({0, 1}), Design(1, {{1}, {0.5}, {0.25}})); }) ==
          ErrorCode::kInvalidArgument);
    CHECK(code_of([] { lagrange_at_zero(set1({0, 1}), Design(1, {{1}, {1}})); }) == ErrorCode::kNotUnisolvent);
  }

  TEST_CASE("property: lagrange weights reproduce P_A at the origin") {
    oracle::Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto in = testing_support::random_instance(g, 0, 0);
      double p0 = 0;
      const auto f = testing_support::random_poly_values(g, in, &p0);
      const Eigen::VectorXd w = lagrange_at_zero(in.A, in.X);
      double s = 0;
      for (std::size_t i = 0; i < f.size(); ++i) s += w(static_cast<Eigen::Index>(i)) * f[i];
      double scale = 1.0;
      for (std::size_t i = 0; i < f.size(); ++i) scale += std::abs(w(static_cast<Eigen::Index>(i)) * f[i]);
      CHECK(std::abs(s - p0) <= 1e-9 * scale);
    }
  }

  TEST_CASE("property: lebesgue constant is scale invariant") {
    oracle::Gen g(12);
    for (int trial = 0; trial < 100; ++trial) {
      const auto in = testing_support::random_instance(g, 0, 0);
      const double base = lebesgue_at_zero(in.A, in.X);
      for (double h : {1.0, 0.5, 0.125, 1.0 / 64}) {
        CHECK(lebesgue_at_zero(in.A, in.X.scaled(h)) == doctest::Approx(base).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("property: unisolvency is permutation invariant and matches the rank oracle") {
    oracle::Gen g(13);
    for (int trial = 0; trial < 100; ++trial) {
      auto in = testing_support::random_instance(g, 0, 3);
      // Occasionally duplicate a point so some designs are degenerate.
      auto pts = in.X_raw;
      if (g.coin() && pts.size() > 1) pts[1] = pts[0];
      if (g.coin()) pts.resize(std::max<std::size_t>(1, in.A.size() - 1));
      oracle::Mat V;
      testing_support::vandermonde_raw(in.A_raw, pts, V);
      const bool expect = oracle::rank(V) == in.A.size();
      const Design X(in.X.dim(), pts);
      CHECK(is_unisolvent(in.A, X) == expect);
      std::shuffle(pts.begin(), pts.end(), g.engine());
      CHECK(is_unisolvent(in.A, Design(in.X.dim(), pts)) == expect);
    }
  }

  TEST_CASE("property: scaled vandermonde columns pick up h^|alpha|") {
    oracle::Gen g(14);
    for (int trial = 0; trial < 50; ++trial) {
      const auto in = testing_support::random_instance(g, 0, 2);
      const double h = std::ldexp(1.0, -g.integer(0, 20));
      const Eigen::MatrixXd V = vandermonde(in.A, in.X);
      const Eigen::MatrixXd Vh = vandermonde(in.A, in.X.scaled(h));
      for (Eigen::Index j = 0; j < V.cols(); ++j) {
        const double f = std::pow(h, in.A[static_cast<std::size_t>(j)].order());
        for (Eigen::Index i = 0; i < V.rows(); ++i) CHECK(Vh(i, j) == doctest::Approx(V(i, j) * f).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("design validation and editing") {
    CHECK(code_of([] { Design(1, {{-0.1}}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { Design(2, {{0.1}}); }) == ErrorCode::kDimensionMismatch);
    const Design X(2, {{1, 0.5}, {0.25, 0.75}});
    CHECK(X.max_coordinate() == 1.0);
    CHECK(X.without(0)[0] == Point{0.25, 0.75});
    CHECK(X.scaled(0.5)[0] == Point{0.5, 0.25});
    CHECK(X.shifted({1, 2}, 0.5)[1] == Point{1.125, 2.375});
    CHECK(X.appended({{0.1, 0.1}}).size() == 3);
  }
}
