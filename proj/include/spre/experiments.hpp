#pragma once

// Experiment runner: convergence and calibration tables, sparsity traces,
// the sequential design loop, flocking runs and ad-hoc dataset fits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spre/flocking.hpp"
#include "spre/index_poly.hpp"
#include "spre/kernels.hpp"
#include "spre/serialize.hpp"

namespace spre {

enum class ProblemKind { kCubature, kEdSynthetic, kFlocking };
enum class Method { kSpre, kMre, kGre, kRaw };
enum class IndexSetMode { kFixed, kStepwise };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kCubature;
  std::size_t d = 1;  // cubature dimension
  int s = 0;          // cubature smoothness
  /// Flocking base parameters; x1, x2, x3 form the offset x0.
  FlockParams flock{.x1 = 0.1, .x2 = 1e-15, .x3 = 0.0};

  std::vector<Method> methods{Method::kRaw, Method::kMre, Method::kSpre};
  std::vector<KernelFamily> kernels{KernelFamily::kWhiteNoise};
  std::vector<int> h_exponents{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  IndexSetMode mode = IndexSetMode::kFixed;
  /// Overrides the problem's default index set in fixed mode.
  std::optional<IndexSet> index_set;
  /// Overrides the problem's default base design (a reference design name).
  std::optional<std::string> base_design;
  std::string output;
  std::uint64_t seed = 0;
  /// Record wall-clock time per row. Off by default so output is byte-stable.
  bool timing = false;

  // Sequential design.
  double budget = 2.0;
  int rounds = 7;
  std::size_t candidates = 1000;

  // Ad-hoc fits. The index set is kept unparsed until the dataset's
  // dimension is known.
  std::string data_path;
  json fit_index_set;

  /// Throws kConfig on unknown keys' values or violated invariants.
  static ExperimentConfig from_json(const json& j);
  json to_json() const;
  void validate() const;
  /// Dimension of the problem's input space.
  std::size_t dim() const;
};

struct ResultRow {
  std::string problem;
  std::string method;
  std::string kernel;
  double h = 0.0;
  std::optional<double> estimate;
  std::optional<double> variance;
  std::optional<double> abs_error;
  std::optional<double> rel_error;
  std::string chosen_A;
  std::optional<double> wall_time_ms;
  /// "ok", or the error category and message for a failed row.
  std::string status = "ok";
};

std::string problem_label(const ExperimentConfig& cfg);
/// Index set used in fixed mode when none is configured.
IndexSet default_index_set(const ExperimentConfig& cfg);
/// Unscaled design X_n the ladder is built from.
Design base_design(const ExperimentConfig& cfg);
/// Reference value f(0) (f(x0) for flocking).
double problem_truth(const ExperimentConfig& cfg);
/// Simulator output at tolerance x (offset by x0 for flocking).
double problem_eval(const ExperimentConfig& cfg, const Point& x);
/// Leading-order monomials for GRE's scaling function.
std::vector<MultiIndex> gre_lead(const ExperimentConfig& cfg);

std::vector<ResultRow> run_convergence(const ExperimentConfig& cfg);
/// run_convergence restricted to the methods that report a variance.
std::vector<ResultRow> run_calibration(const ExperimentConfig& cfg);
json run_sparsity_trace(const ExperimentConfig& cfg);
json run_design_loop(const ExperimentConfig& cfg);
/// Distance QoI for cfg.flock; fills `trajectory_csv` when non-null.
json run_flock(const ExperimentConfig& cfg, std::string* trajectory_csv = nullptr);
json run_fit(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<ResultRow>& rows);

/// Least-squares slope of log2(abs_error) against log2(h) over rows whose
/// error exceeds 100 times the floor max(min error, eps |truth|). NaN when
/// fewer than three rows remain.
double convergence_slope(const std::vector<double>& h, const std::vector<double>& abs_error,
                         double truth);

}  // namespace spre
