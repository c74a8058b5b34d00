#include "spre/design.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spre/error.hpp"

namespace spre {

CostModel CostModel::table(std::map<Point, double> entries) {
  for (const auto& [x, c] : entries) {
    if (!(c > 0.0)) fail(ErrorCode::kInvalidArgument, "cost table entries must be positive");
  }
  return CostModel(Kind::kTable, std::move(entries));
}

double CostModel::operator()(std::span<const double> x) const {
  if (kind_ == Kind::kReciprocalProduct) {
    double c = 1.0;
    for (double xj : x) {
      if (!(xj > 0.0)) fail(ErrorCode::kInvalidArgument, "reciprocal cost undefined at a zero coordinate");
      c /= xj;
    }
    return c;
  }
  const auto it = table_.find(Point(x.begin(), x.end()));
  if (it == table_.end()) fail(ErrorCode::kInvalidArgument, "cost table has no entry for the queried point");
  return it->second;
}

double cost(const CostModel& model, std::span<const double> x) { return model(x); }

CandidateBatch draw_candidate(const CostModel& cost, double budget, std::size_t dim,
                              UniformStream& stream) {
  CandidateBatch batch;
  for (;;) {
    Point x(dim);
    for (double& c : x) c = stream.next_positive();
    const double c = cost(x);
    if (batch.total_cost + c > budget) return batch;
    batch.total_cost += c;
    batch.points.push_back(std::move(x));
  }
}

double augmented_variance(const Extrapolant& model, const std::vector<Point>& extra) {
  const Design X = model.data().X.appended(extra);
  const Point zero(X.dim(), 0.0);
  return posterior_variance(model.index_set(), model.covariance(), X, zero);
}

DesignProposal propose_design(const Extrapolant& model, const CostModel& cost, double budget,
                              std::size_t n_candidates, std::uint64_t seed) {
  if (!(budget > 0.0)) fail(ErrorCode::kInvalidArgument, "design budget must be positive");
  UniformStream stream(seed);
  const double current = model.predict_at_zero().variance;

  DesignProposal best;
  best.predicted_variance = std::numeric_limits<double>::infinity();
  bool any_points = false;
  for (std::size_t c = 0; c < n_candidates; ++c) {
    CandidateBatch batch = draw_candidate(cost, budget, model.data().dim(), stream);
    double score = current;
    if (!batch.points.empty()) {
      any_points = true;
      score = augmented_variance(model, batch.points);
    }
    if (score < best.predicted_variance) {
      best.points = std::move(batch.points);
      best.predicted_variance = score;
      best.total_cost = batch.total_cost;
      best.candidate = c;
    }
  }
  if (!any_points) {
    fail(ErrorCode::kEmptyProposal, "no candidate design fits within budget " + std::to_string(budget));
  }
  return best;
}

LoopResult sequential_loop(const Dataset& initial, KernelFamily family, const CostModel& cost,
                           double budget_per_round, int rounds, const Simulator& simulator,
                           std::uint64_t seed, std::size_t n_candidates) {
  if (initial.size() == 0) fail(ErrorCode::kInvalidArgument, "sequential design needs initial data");
  Dataset data = initial;
  std::vector<LoopRound> history;
  for (int r = 0; r < rounds; ++r) {
    SelectionTrace sel = stepwise_select(data, family);
    const Extrapolant model = Extrapolant::fit(sel.chosen, sel.chosen_cov, data);
    DesignProposal proposal = propose_design(model, cost, budget_per_round, n_candidates,
                                             mix64(seed + static_cast<std::uint64_t>(r)));
    std::vector<double> values;
    values.reserve(proposal.points.size());
    for (const auto& x : proposal.points) values.push_back(simulator(x));
    data = data.appended(proposal.points, values);
    history.push_back({std::move(sel), std::move(proposal)});
  }
  SelectionTrace final_sel = stepwise_select(data, family);
  return {std::move(final_sel), std::move(data), std::move(history)};
}

}  // namespace spre
