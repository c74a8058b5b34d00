#include <doctest.h>

#include <cmath>

#include "instances.hpp"
#include "oracles.hpp"
#include "spre/error.hpp"
#include "spre/model_select.hpp"

using namespace spre;

namespace {

IndexSet set1(std::initializer_list<int> exps) {
  std::vector<MultiIndex> v;
  for (int e : exps) v.emplace_back(std::vector<int>{e});
  return IndexSet(1, v);
}

Dataset sample1(const std::vector<double>& xs, double (*f)(double)) {
  std::vector<Point> pts;
  std::vector<double> fs;
  for (double x : xs) {
    pts.push_back({x});
    fs.push_back(f(x));
  }
  return Dataset(Design(1, pts), fs);
}

const std::vector<double> kLadder{1, 0.75, 0.5, 0.375, 0.25, 0.1875, 0.125, 0.0625};

}  // namespace

TEST_SUITE("model_select") {
  TEST_CASE("property: LOOCV matches naive refits") {
    oracle::Gen g(41);
    for (int trial = 0; trial < 80; ++trial) {
      auto in = testing_support::random_instance(g, 2, 5);
      std::vector<double> f;
      for (std::size_t i = 0; i < in.X_raw.size(); ++i) f.push_back(g.uniform(-1, 1));
      const Dataset data(in.X, f);
      bool folds_ok = true;
      for (std::size_t i = 0; i < data.size() && folds_ok; ++i) {
        oracle::Mat V;
        auto pts = in.X_raw;
        pts.erase(pts.begin() + static_cast<long>(i));
        testing_support::vandermonde_raw(in.A_raw, pts, V);
        folds_ok = oracle::rank(V, 1e-4L) == in.A.size();
      }
      if (!folds_ok) continue;
      const auto got = loocv(in.A, in.kernel(), data);
      const double want = static_cast<double>(oracle::loocv(in.A_raw, in.oracle_kernel(), in.X_raw, f));
      const double tol = testing_support::solve_tolerance(in, 1e-9);
      INFO("trial " << trial << " family " << in.family);
      CHECK(std::abs(got.neg_log_density - want) <= tol * (1.0 + std::abs(want)));
      CHECK(got.per_point.size() == data.size());
    }
  }

  TEST_CASE("LOOCV on a five-point line") {
    const std::vector<std::vector<double>> X{{0.9}, {0.7}, {0.45}, {0.3}, {0.1}};
    const std::vector<double> f{1.2, 0.4, -0.3, 0.8, 0.05};
    const auto got = loocv(set1({0, 1}), KernelSpec::from_natural(KernelFamily::kWhiteNoise, 1.0),
                           Dataset(Design(1, X), f));
    const double want = static_cast<double>(oracle::loocv({{0}, {1}}, oracle::kernel(0, 1.0, 1.0), X, f));
    CHECK(got.neg_log_density == doctest::Approx(want).epsilon(1e-9));
    for (const auto& p : got.per_point) CHECK(p.sigma2 > 0.0);
  }

  TEST_CASE("LOOCV fold errors") {
    const Dataset two(Design(1, {{1}, {0.5}}), {1, 2});
    try {
      loocv(set1({0, 1}), KernelSpec::from_natural(KernelFamily::kWhiteNoise, 1.0), two);
      FAIL("expected a fold error");
    } catch (const FoldError& e) {
      CHECK(e.code() == ErrorCode::kFoldNotUnisolvent);
    }
    // Removing the only distinct point leaves a repeated abscissa.
    const Dataset rep(Design(1, {{1}, {0.5}, {0.5}}), {1, 2, 2});
    try {
      loocv(set1({0, 1}), KernelSpec::from_natural(KernelFamily::kMatern12, 1.0, 1.0), rep);
      FAIL("expected a fold error");
    } catch (const FoldError& e) {
      CHECK(e.fold() == 0);
    }
  }

  TEST_CASE("kernel optimisation never worsens the starting point") {
    oracle::Gen g(42);
    for (int trial = 0; trial < 20; ++trial) {
      auto in = testing_support::random_instance(g, 3, 6);
      std::vector<double> f;
      for (std::size_t i = 0; i < in.X_raw.size(); ++i) f.push_back(g.uniform(-1, 1));
      const Dataset data(in.X, f);
      const auto fam = static_cast<KernelFamily>(in.family);
      double start = 0;
      try {
        start = loocv(in.A, KernelSpec(fam, initial_theta(fam)), data).neg_log_density;
      } catch (const Error&) {
        continue;
      }
      const auto fit = optimize_kernel(in.A, fam, data);
      CHECK(fit.objective <= start);
      CHECK(loocv(in.A, fit.cov, data).neg_log_density == doctest::Approx(fit.objective).epsilon(1e-12));
    }
  }

  TEST_CASE("white-noise amplitude agrees with a grid search") {
    oracle::Gen g(43);
    for (int trial = 0; trial < 10; ++trial) {
      const double sigma = std::exp(g.uniform(-3, 1));
      std::vector<std::vector<double>> X;
      std::vector<double> f;
      for (int i = 0; i < 12; ++i) {
        X.push_back({g.uniform(0.05, 1)});
        f.push_back(0.7 + sigma * g.normal());
      }
      const Dataset data(Design(1, X), f);
      const auto fit = optimize_kernel(IndexSet::constant(1), KernelFamily::kWhiteNoise, data);
      // Coarse log grid, then a fine grid around its minimiser.
      double best_s2 = 0;
      long double best = INFINITY;
      const auto scan = [&](double lo_exp, double hi_exp, int steps) {
        for (int k = 0; k <= steps; ++k) {
          const double s2 = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * k / steps);
          const long double v = oracle::loocv({{0}}, oracle::kernel(0, s2, 1.0), X, f);
          if (v < best) {
            best = v;
            best_s2 = s2;
          }
        }
      };
      scan(-5, 5, 200);
      const double centre = std::log10(best_s2);
      scan(centre - 0.05, centre + 0.05, 200);
      const double got = fit.cov.kernel().sigma2();
      CHECK(got == doctest::Approx(best_s2).epsilon(0.1));
      CHECK(got / (sigma * sigma) <= 3.0);
      CHECK((sigma * sigma) / got <= 3.0);
    }
  }

  TEST_CASE("stepwise selection on simple data") {
    const auto constant = stepwise_select(sample1(kLadder, [](double) { return 2.0; }), KernelFamily::kWhiteNoise);
    CHECK(constant.chosen == IndexSet::constant(1));

    const auto quad = stepwise_select(sample1(kLadder, [](double x) { return 1.0 + x * x; }),
                                      KernelFamily::kWhiteNoise);
    CHECK(quad.chosen.contains(MultiIndex({0})));
    CHECK(quad.chosen.contains(MultiIndex({2})));

    // Two points cannot support LOOCV on anything larger than {0}.
    const auto tiny = stepwise_select(Dataset(Design(1, {{1}, {0.5}}), {1, 2}), KernelFamily::kWhiteNoise);
    CHECK(tiny.chosen == IndexSet::constant(1));

    // A single point cannot be scored at all.
    const auto single = stepwise_select(Dataset(Design(1, {{1}}), {1}), KernelFamily::kWhiteNoise);
    CHECK(single.chosen == IndexSet::constant(1));
    CHECK(single.history.empty());
  }

  TEST_CASE("property: stepwise history is consistent and deterministic") {
    oracle::Gen g(44);
    for (int trial = 0; trial < 8; ++trial) {
      const int d = g.integer(1, 2);
      const int n = g.integer(6, 10);
      std::vector<Point> pts;
      std::vector<double> f;
      const double c1 = g.uniform(-1, 1);
      const double c2 = g.uniform(-1, 1);
      for (int i = 0; i < n; ++i) {
        Point p(d);
        for (auto& v : p) v = g.uniform(0.05, 1);
        pts.push_back(p);
        f.push_back(1 + c1 * p[0] + c2 * p[0] * p[0] + 1e-3 * g.normal());
      }
      const Dataset data(Design(d, pts), f);
      const auto fam = static_cast<KernelFamily>(g.integer(0, 2));
      const auto a = stepwise_select(data, fam);
      const auto b = stepwise_select(data, fam);
      REQUIRE(a.history.size() == b.history.size());
      for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].candidate == b.history[i].candidate);
        CHECK(a.history[i].objective == b.history[i].objective);
      }
      CHECK(a.chosen == b.chosen);

      double prev = INFINITY;
      double last_accepted = INFINITY;
      for (const auto& step : a.history) {
        CHECK(std::isfinite(step.objective));
        if (step.merged && step.accepted) {
          CHECK(step.objective < prev);
          prev = step.objective;
          last_accepted = step.objective;
        }
      }
      CHECK(a.chosen_objective == last_accepted);
      CHECK(a.chosen.contains(MultiIndex::zero(static_cast<std::size_t>(d))));
      CHECK(is_unisolvent(a.chosen, data.X));
    }
  }
}
