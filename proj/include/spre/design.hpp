#pragma once

// Cost-constrained experimental design: pick the batch of new simulator
// configurations that most reduces posterior variance at the origin.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "spre/extrapolate.hpp"
#include "spre/model_select.hpp"
#include "spre/rng.hpp"

namespace spre {

class CostModel {
 public:
  enum class Kind { kReciprocalProduct, kTable };

  /// c(x) = prod_j 1 / x_j.
  static CostModel reciprocal_product() { return CostModel(Kind::kReciprocalProduct, {}); }
  static CostModel table(std::map<Point, double> entries);

  Kind kind() const noexcept { return kind_; }
  double operator()(std::span<const double> x) const;

 private:
  CostModel(Kind kind, std::map<Point, double> table) : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  std::map<Point, double> table_;
};

double cost(const CostModel& model, std::span<const double> x);

struct DesignProposal {
  std::vector<Point> points;
  double predicted_variance = 0.0;
  double total_cost = 0.0;
  /// Index of the winning candidate batch.
  std::size_t candidate = 0;
};

struct CandidateBatch {
  std::vector<Point> points;
  double total_cost = 0.0;
};

/// Draws one candidate batch: uniform points on (0,1]^d added while the
/// running cost stays within budget; the first draw that would overrun stops
/// the batch and is discarded.
CandidateBatch draw_candidate(const CostModel& cost, double budget, std::size_t dim,
                              UniformStream& stream);

/// Variance at the origin after augmenting the model's design with `extra`.
double augmented_variance(const Extrapolant& model, const std::vector<Point>& extra);

/// Stochastic search over `n_candidates` batches; returns the batch of least
/// augmented variance, ties broken by candidate index. Throws kEmptyProposal
/// if every batch is empty.
DesignProposal propose_design(const Extrapolant& model, const CostModel& cost, double budget,
                              std::size_t n_candidates = 1000, std::uint64_t seed = 0);

using Simulator = std::function<double(const Point&)>;

struct LoopRound {
  SelectionTrace selection;
  DesignProposal proposal;
};

struct LoopResult {
  SelectionTrace final_selection;
  Dataset data;
  std::vector<LoopRound> rounds;
};

/// Alternates stepwise selection, kernel fitting, design, and simulation.
/// Round r draws its candidates from seed mix64(seed + r).
LoopResult sequential_loop(const Dataset& initial, KernelFamily family, const CostModel& cost,
                           double budget_per_round, int rounds, const Simulator& simulator,
                           std::uint64_t seed, std::size_t n_candidates = 1000);

}  // namespace spre
