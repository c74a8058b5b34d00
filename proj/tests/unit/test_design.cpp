#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spre/design.hpp"
#include "spre/error.hpp"
#include "spre/rng.hpp"

using namespace spre;

namespace {

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

const std::vector<std::vector<int>> kLinear2{{0, 0}, {1, 0}, {0, 1}};

IndexSet linear2() { return IndexSet(2, {MultiIndex({0, 0}), MultiIndex({1, 0}), MultiIndex({0, 1})}); }

const std::vector<Point> kBase{{1, 1}, {1, 0.5}, {0.5, 1}, {0.5, 0.5}};

Extrapolant base_model(double sigma2, const std::vector<double>& f) {
  return Extrapolant::fit(linear2(), KernelSpec::from_natural(KernelFamily::kWhiteNoise, sigma2),
                          Dataset(Design(2, kBase), f));
}

}  // namespace

TEST_SUITE("design") {
  TEST_CASE("cost models") {
    const auto rc = CostModel::reciprocal_product();
    CHECK(cost(rc, std::vector<double>{0.5, 0.25}) == doctest::Approx(8.0));
    CHECK(cost(rc, std::vector<double>{1, 1}) == 1.0);
    CHECK(cost(rc, std::vector<double>{0.1}) == doctest::Approx(10.0));
    CHECK(code_of([&] { cost(rc, std::vector<double>{0.0, 1.0}); }) == ErrorCode::kInvalidArgument);
    const auto tab = CostModel::table({{Point{1, 1}, 3.0}, {Point{0.5, 1}, 7.0}});
    CHECK(cost(tab, std::vector<double>{0.5, 1}) == 7.0);
    CHECK(code_of([&] { cost(tab, std::vector<double>{0.25, 1}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { CostModel::table({{Point{1}, 0.0}}); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("budget errors") {
    const auto m = base_model(1.0, {1, 2, 3, 4});
    // Reciprocal cost is at least 1 on the unit cube, so nothing fits.
    CHECK(code_of([&] { propose_design(m, CostModel::reciprocal_product(), 0.5, 50, 1); }) ==
          ErrorCode::kEmptyProposal);
    CHECK(code_of([&] { propose_design(m, CostModel::reciprocal_product(), 0.0, 50, 1); }) ==
          ErrorCode::kInvalidArgument);
  }

  TEST_CASE("candidate batches respect the budget") {
    UniformStream s(7);
    for (int k = 0; k < 200; ++k) {
      const auto b = draw_candidate(CostModel::reciprocal_product(), 6.0, 2, s);
      double total = 0;
      for (const auto& p : b.points) {
        CHECK(p.size() == 2);
        for (double c : p) CHECK((c > 0.0 && c < 1.0));
        total += 1.0 / (p[0] * p[1]);
      }
      CHECK(total == doctest::Approx(b.total_cost).epsilon(1e-12));
      CHECK(b.total_cost <= 6.0);
    }
  }

  TEST_CASE("proposals reduce variance, cost at most the budget and are reproducible") {
    const auto m = base_model(1.3, {1, 2, 3, 4});
    const double current = m.predict_at_zero().variance;
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      for (double budget : {2.0, 5.0, 20.0}) {
        const auto p = propose_design(m, CostModel::reciprocal_product(), budget, 200, seed);
        CHECK(p.predicted_variance <= current + 1e-10);
        CHECK(p.total_cost <= budget);
        CHECK(p.candidate < 200);
        CHECK_FALSE(p.points.empty());
        const auto q = propose_design(m, CostModel::reciprocal_product(), budget, 200, seed);
        CHECK(q.points == p.points);
        CHECK(q.predicted_variance == p.predicted_variance);
        CHECK(q.candidate == p.candidate);
      }
    }
  }

  TEST_CASE("scoring depends only on locations") {
    const auto a = base_model(1.0, {1, 2, 3, 4});
    const auto b = base_model(1.0, {-5, 0.1, 9, 2});
    const std::vector<Point> extra{{0.3, 0.7}, {0.2, 0.2}};
    CHECK(augmented_variance(a, extra) == augmented_variance(b, extra));
    const auto pa = propose_design(a, CostModel::reciprocal_product(), 8.0, 100, 5);
    const auto pb = propose_design(b, CostModel::reciprocal_product(), 8.0, 100, 5);
    CHECK(pa.points == pb.points);
  }

  TEST_CASE("winning batch is the argmin under an independent variance oracle") {
    const double sigma2 = 0.8;
    const auto m = base_model(sigma2, {1, 2, 3, 4});
    const std::uint64_t seed = 1234;
    const std::size_t n_cand = 150;
    const auto p = propose_design(m, CostModel::reciprocal_product(), 10.0, n_cand, seed);

    UniformStream s(seed);
    const auto k = oracle::kernel(0, sigma2, 1.0);
    const std::vector<double> zero{0, 0};
    std::vector<std::vector<double>> base(kBase.begin(), kBase.end());
    const std::vector<double> f(base.size(), 0.0);
    const long double current = oracle::gp_posterior(kLinear2, k, base, f, zero).variance;
    long double best = INFINITY;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < n_cand; ++c) {
      const auto batch = draw_candidate(CostModel::reciprocal_product(), 10.0, 2, s);
      long double v = current;
      if (!batch.points.empty()) {
        auto X = base;
        X.insert(X.end(), batch.points.begin(), batch.points.end());
        v = oracle::gp_posterior(kLinear2, k, X, std::vector<double>(X.size(), 0.0), zero).variance;
      }
      if (v < best) {
        best = v;
        arg = c;
      }
    }
    CHECK(p.candidate == arg);
    CHECK(p.predicted_variance == doctest::Approx(static_cast<double>(best)).epsilon(1e-10));
  }

  TEST_CASE("sequential loop") {
    const auto simulator = [](const Point& x) { return 1.0 + x[0] - 2.0 * x[1]; };
    std::vector<double> f;
    for (const auto& x : kBase) f.push_back(simulator(x));
    const Dataset initial(Design(2, kBase), f);

    const auto none = sequential_loop(initial, KernelFamily::kWhiteNoise, CostModel::reciprocal_product(), 4.0, 0,
                                      simulator, 3, 50);
    CHECK(none.rounds.empty());
    CHECK(none.data.size() == initial.size());

    const auto run = sequential_loop(initial, KernelFamily::kWhiteNoise, CostModel::reciprocal_product(), 4.0, 3,
                                     simulator, 3, 50);
    REQUIRE(run.rounds.size() == 3);
    std::size_t added = 0;
    for (const auto& r : run.rounds) {
      CHECK(r.proposal.total_cost <= 4.0);
      added += r.proposal.points.size();
    }
    CHECK(run.data.size() == initial.size() + added);
    for (std::size_t i = initial.size(); i < run.data.size(); ++i)
      CHECK(run.data.f[i] == simulator(run.data.X[i]));

    const auto again = sequential_loop(initial, KernelFamily::kWhiteNoise, CostModel::reciprocal_product(), 4.0, 3,
                                       simulator, 3, 50);
    CHECK(again.data.X.points() == run.data.X.points());
    CHECK(again.final_selection.chosen == run.final_selection.chosen);
    CHECK(code_of([&] {
            sequential_loop(Dataset(Design(2, {}), {}), KernelFamily::kWhiteNoise,
                            CostModel::reciprocal_product(), 4.0, 1, simulator, 0, 10);
          }) == ErrorCode::kInvalidArgument);
  }
}
