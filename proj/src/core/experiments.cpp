#include "spre/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "spre/design.hpp"
#include "spre/error.hpp"
#include "spre/extrapolate.hpp"
#include "spre/model_select.hpp"
#include "spre/problems.hpp"

namespace spre {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::kSpre: return "SPRE";
    case Method::kMre: return "MRE";
    case Method::kGre: return "GRE";
    case Method::kRaw: return "RAW";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string up(name);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Method m : {Method::kSpre, Method::kMre, Method::kGre, Method::kRaw}) {
    if (up == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

std::string_view problem_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::kCubature: return "cubature";
    case ProblemKind::kEdSynthetic: return "ed-synthetic";
    case ProblemKind::kFlocking: return "flocking";
  }
  return "?";
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config key \"") + key + "\": " + e.what());
  }
}

FlockParams flock_from_json(const json& j, FlockParams p) {
  static const std::set<std::string> keys{"x1", "x2", "x3", "t_final", "agent", "n_agents", "repulsion"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(ErrorCode::kConfig, "unknown flock key \"" + k + "\"");
  }
  if (j.contains("x1")) p.x1 = get_as<double>(j, "x1");
  if (j.contains("x2")) p.x2 = get_as<double>(j, "x2");
  if (j.contains("x3")) p.x3 = get_as<double>(j, "x3");
  if (j.contains("t_final")) p.t_final = get_as<double>(j, "t_final");
  if (j.contains("agent")) p.tracked_agent = get_as<int>(j, "agent");
  if (j.contains("n_agents")) p.n_agents = get_as<int>(j, "n_agents");
  if (j.contains("repulsion")) {
    const auto r = get_as<std::string>(j, "repulsion");
    if (r == "printed") p.repulsion = RepulsionMode::kPrinted;
    else if (r == "repulsive") p.repulsion = RepulsionMode::kRepulsive;
    else fail(ErrorCode::kConfig, "repulsion must be \"printed\" or \"repulsive\"");
  }
  return p;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "config must be a JSON object");
  static const std::set<std::string> keys{
      "problem", "d", "s", "seed", "methods", "kernels", "h_exponents", "index_set_mode",
      "index_set", "base_design", "output", "timing", "budget", "rounds", "candidates", "data",
      "flock"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(ErrorCode::kConfig, "unknown config key \"" + k + "\"");
  }
  ExperimentConfig c;
  if (j.contains("problem")) {
    const auto name = get_as<std::string>(j, "problem");
    if (name == "cubature") c.problem = ProblemKind::kCubature;
    else if (name == "ed-synthetic") c.problem = ProblemKind::kEdSynthetic;
    else if (name == "flocking") c.problem = ProblemKind::kFlocking;
    else fail(ErrorCode::kConfig, "unknown problem \"" + name + "\"");
  }
  if (j.contains("d")) {
    const int d = get_as<int>(j, "d");
    if (d < 1) fail(ErrorCode::kConfig, "d must be >= 1");
    c.d = static_cast<std::size_t>(d);
  }
  if (j.contains("s")) c.s = get_as<int>(j, "s");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& name : get_as<std::vector<std::string>>(j, "methods")) {
      const auto m = parse_method(name);
      if (!m) fail(ErrorCode::kConfig, "unknown method \"" + name + "\"");
      c.methods.push_back(*m);
    }
  }
  if (j.contains("kernels")) {
    c.kernels.clear();
    for (const auto& name : get_as<std::vector<std::string>>(j, "kernels")) {
      const auto k = parse_kernel_family(name);
      if (!k) fail(ErrorCode::kConfig, "unknown kernel family \"" + name + "\"");
      c.kernels.push_back(*k);
    }
  }
  if (j.contains("h_exponents")) c.h_exponents = get_as<std::vector<int>>(j, "h_exponents");
  if (j.contains("index_set_mode")) {
    const auto mode = get_as<std::string>(j, "index_set_mode");
    if (mode == "fixed") c.mode = IndexSetMode::kFixed;
    else if (mode == "stepwise") c.mode = IndexSetMode::kStepwise;
    else fail(ErrorCode::kConfig, "index_set_mode must be \"fixed\" or \"stepwise\"");
  }
  if (j.contains("base_design") && !j.at("base_design").is_null()) {
    c.base_design = get_as<std::string>(j, "base_design");
  }
  if (j.contains("output")) c.output = get_as<std::string>(j, "output");
  if (j.contains("timing")) c.timing = get_as<bool>(j, "timing");
  if (j.contains("budget")) c.budget = get_as<double>(j, "budget");
  if (j.contains("rounds")) c.rounds = get_as<int>(j, "rounds");
  if (j.contains("candidates")) {
    const auto n = get_as<long long>(j, "candidates");
    if (n < 1) fail(ErrorCode::kConfig, "candidates must be >= 1");
    c.candidates = static_cast<std::size_t>(n);
  }
  if (j.contains("data")) c.data_path = get_as<std::string>(j, "data");
  if (j.contains("flock")) c.flock = flock_from_json(j.at("flock"), c.flock);
  if (!c.data_path.empty() && j.contains("index_set")) {
    c.fit_index_set = j.at("index_set");
  } else if (j.contains("index_set") && !j.at("index_set").is_null()) {
    try {
      c.index_set = index_set_from_json(j.at("index_set"), c.dim());
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, std::string("index_set: ") + e.what());
    }
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["problem"] = std::string(problem_name(problem));
  if (problem == ProblemKind::kCubature) {
    j["d"] = d;
    j["s"] = s;
  }
  j["seed"] = seed;
  json ms = json::array();
  for (Method m : methods) ms.push_back(std::string(to_string(m)));
  j["methods"] = ms;
  json ks = json::array();
  for (KernelFamily k : kernels) ks.push_back(std::string(spre::to_string(k)));
  j["kernels"] = ks;
  j["h_exponents"] = h_exponents;
  j["index_set_mode"] = mode == IndexSetMode::kFixed ? "fixed" : "stepwise";
  if (index_set) j["index_set"] = spre::to_json(*index_set);
  if (base_design) j["base_design"] = *base_design;
  if (problem == ProblemKind::kFlocking) {
    j["flock"] = {{"x1", flock.x1},
                  {"x2", flock.x2},
                  {"x3", flock.x3},
                  {"t_final", flock.t_final},
                  {"agent", flock.tracked_agent},
                  {"n_agents", flock.n_agents},
                  {"repulsion", flock.repulsion == RepulsionMode::kPrinted ? "printed" : "repulsive"}};
  }
  return j;
}

std::size_t ExperimentConfig::dim() const {
  switch (problem) {
    case ProblemKind::kCubature: return d;
    case ProblemKind::kEdSynthetic: return 2;
    case ProblemKind::kFlocking: return 3;
  }
  return 0;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) fail(ErrorCode::kConfig, "at least one method is required");
  if (kernels.empty()) fail(ErrorCode::kConfig, "at least one kernel family is required");
  if (h_exponents.empty()) fail(ErrorCode::kConfig, "h ladder is empty");
  for (int m : h_exponents) {
    if (m < 0 || m > 1000) fail(ErrorCode::kConfig, "h exponents must lie in [0, 1000]");
  }
  if (s < 0) fail(ErrorCode::kConfig, "s must be >= 0");
  if (problem == ProblemKind::kCubature && d > 3 && !base_design) {
    fail(ErrorCode::kConfig, "no reference cubature design for d > 3; set base_design");
  }
  if (!(budget > 0.0)) fail(ErrorCode::kConfig, "budget must be positive");
  if (rounds < 0) fail(ErrorCode::kConfig, "rounds must be >= 0");
  try {
    flock.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, e.what());
  }
}

std::string problem_label(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << problem_name(cfg.problem);
  if (cfg.problem == ProblemKind::kCubature) os << "-d" << cfg.d << "-s" << cfg.s;
  else os << "-seed" << cfg.seed;
  return os.str();
}

IndexSet default_index_set(const ExperimentConfig& cfg) {
  if (cfg.index_set) return *cfg.index_set;
  switch (cfg.problem) {
    case ProblemKind::kCubature: return CubatureProblem(cfg.d, cfg.s).expansion_index_set();
    case ProblemKind::kEdSynthetic: return EdSynthetic::true_index_set();
    case ProblemKind::kFlocking: return IndexSet::total_degree(3, 1);
  }
  return IndexSet::constant(cfg.dim());
}

Design base_design(const ExperimentConfig& cfg) {
  if (cfg.base_design) {
    Design X = reference_design(*cfg.base_design);
    if (X.dim() != cfg.dim()) fail(ErrorCode::kConfig, "base design dimension does not match the problem");
    return X;
  }
  switch (cfg.problem) {
    case ProblemKind::kCubature: return reference_design("cubature-d" + std::to_string(cfg.d));
    // The unhalved two-dimensional cubature design, inside [1/3, 1]^2.
    case ProblemKind::kEdSynthetic: return reference_design("cubature-d2").scaled(2.0);
    case ProblemKind::kFlocking: return reference_design("case-study-d3");
  }
  fail(ErrorCode::kConfig, "no base design");
}

namespace {

FlockParams flock_at(const ExperimentConfig& cfg, const Point& x) {
  FlockParams p = cfg.flock;
  p.seed = cfg.seed;
  p.x1 += x[0];
  p.x2 += x[1];
  p.x3 += x[2];
  return p;
}

}  // namespace

double problem_truth(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::kCubature: return cubature_truth(CubatureProblem(cfg.d, cfg.s));
    case ProblemKind::kEdSynthetic: return 1.0;
    case ProblemKind::kFlocking: return simulate_qoi(flock_at(cfg, Point(3, 0.0)));
  }
  return 0.0;
}

double problem_eval(const ExperimentConfig& cfg, const Point& x) {
  if (x.size() != cfg.dim()) fail(ErrorCode::kDimensionMismatch, "point dimension does not match the problem");
  switch (cfg.problem) {
    case ProblemKind::kCubature: return cubature_eval(CubatureProblem(cfg.d, cfg.s), x);
    case ProblemKind::kEdSynthetic: return EdSynthetic(cfg.seed)(x);
    case ProblemKind::kFlocking: return simulate_qoi(flock_at(cfg, x));
  }
  return 0.0;
}

std::vector<MultiIndex> gre_lead(const ExperimentConfig& cfg) {
  // Midpoint cubature error starts at second order in every direction.
  if (cfg.problem == ProblemKind::kCubature) return indices_of_order(cfg.d, 2);
  const auto lead = default_index_set(cfg).lead();
  if (lead.empty()) return indices_of_order(cfg.dim(), 1);
  return lead;
}

namespace {

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return std::string(to_string(err->code())) + ": " + err->what();
  }
  return std::string("Internal: ") + e.what();
}

std::size_t nearest_to_origin(const Design& X) {
  std::size_t best = 0;
  double best_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < X.size(); ++i) {
    double s = 0.0;
    for (double v : X[i]) s += v * v;
    if (s < best_norm) {
      best_norm = s;
      best = i;
    }
  }
  return best;
}

struct Fitted {
  Extrapolant model;
  IndexSet A;
};

Fitted fit_spre(const ExperimentConfig& cfg, KernelFamily family, const Dataset& data) {
  if (cfg.mode == IndexSetMode::kStepwise) {
    SelectionTrace trace = stepwise_select(data, family);
    return {Extrapolant::fit(trace.chosen, trace.chosen_cov, data), trace.chosen};
  }
  const IndexSet A = default_index_set(cfg);
  const KernelFit fit = optimize_kernel(A, family, data);
  return {Extrapolant::fit(A, fit.cov, data), A};
}

void fill_posterior(ResultRow& row, const Posterior& post, double truth) {
  row.estimate = post.mean;
  row.variance = post.variance;
  row.abs_error = abs_error(post.mean, truth);
  if (post.variance > 0.0) row.rel_error = rel_error(post, truth);
}

using Clock = std::chrono::steady_clock;

std::vector<ResultRow> run_rows(const ExperimentConfig& cfg, const std::vector<Method>& methods) {
  const std::string label = problem_label(cfg);
  const double truth = problem_truth(cfg);
  const Design base = base_design(cfg);
  std::vector<ResultRow> rows;

  for (int m : cfg.h_exponents) {
    const double h = std::ldexp(1.0, -m);
    const Design X = base.scaled(h);
    std::optional<Dataset> data;
    std::string data_error;
    try {
      std::vector<double> f;
      f.reserve(X.size());
      for (const auto& x : X) f.push_back(problem_eval(cfg, x));
      data.emplace(X, std::move(f));
    } catch (const std::exception& e) {
      data_error = describe(e);
    }

    auto run_one = [&](Method method, const std::string& kernel, auto&& body) {
      ResultRow row;
      row.problem = label;
      row.method = std::string(to_string(method));
      row.kernel = kernel;
      row.h = h;
      const auto start = Clock::now();
      if (!data) {
        row.status = data_error;
      } else {
        try {
          body(row, *data);
        } catch (const std::exception& e) {
          row = ResultRow{label, row.method, kernel, h, {}, {}, {}, {}, row.chosen_A, {}, describe(e)};
        }
      }
      if (cfg.timing) {
        row.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      }
      rows.push_back(std::move(row));
    };

    for (Method method : methods) {
      switch (method) {
        case Method::kRaw:
          run_one(method, "", [&](ResultRow& row, const Dataset& d) {
            row.estimate = d.f[nearest_to_origin(d.X)];
            row.abs_error = abs_error(*row.estimate, truth);
          });
          break;
        case Method::kMre:
          run_one(method, "", [&](ResultRow& row, const Dataset& d) {
            const IndexSet A = default_index_set(cfg);
            row.chosen_A = compact(A);
            row.estimate = mre_extrapolate(A, mre_select_subset(A, d));
            row.abs_error = abs_error(*row.estimate, truth);
          });
          break;
        case Method::kSpre:
          for (KernelFamily family : cfg.kernels) {
            run_one(method, std::string(to_string(family)), [&](ResultRow& row, const Dataset& d) {
              const Fitted fitted = fit_spre(cfg, family, d);
              row.chosen_A = compact(fitted.A);
              fill_posterior(row, fitted.model.predict_at_zero(), truth);
            });
          }
          break;
        case Method::kGre:
          run_one(method, std::string(to_string(KernelFamily::kWhiteNoise)),
                  [&](ResultRow& row, const Dataset& d) {
                    const IndexSet A0 = IndexSet::constant(d.dim());
                    const Covariance family(KernelSpec(KernelFamily::kWhiteNoise,
                                                       initial_theta(KernelFamily::kWhiteNoise)),
                                            LeadScaling(gre_lead(cfg)));
                    row.chosen_A = compact(A0);
                    const KernelFit fit = optimize_kernel(A0, family, d);
                    fill_posterior(row, Extrapolant::fit(A0, fit.cov, d).predict_at_zero(), truth);
                  });
          break;
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_rows(cfg, cfg.methods);
}

std::vector<ResultRow> run_calibration(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Method> methods;
  for (Method m : cfg.methods) {
    if (m == Method::kSpre || m == Method::kGre) methods.push_back(m);
  }
  if (methods.empty()) fail(ErrorCode::kConfig, "calibration needs SPRE or GRE among the methods");
  return run_rows(cfg, methods);
}

json run_sparsity_trace(const ExperimentConfig& cfg) {
  cfg.validate();
  const Design base = base_design(cfg);
  json out;
  out["problem"] = problem_label(cfg);
  json traces = json::array();
  for (KernelFamily family : cfg.kernels) {
    json rows = json::array();
    for (int m : cfg.h_exponents) {
      const double h = std::ldexp(1.0, -m);
      json row;
      row["m"] = m;
      row["h"] = h;
      try {
        const Design X = base.scaled(h);
        std::vector<double> f;
        for (const auto& x : X) f.push_back(problem_eval(cfg, x));
        const SelectionTrace trace = stepwise_select(Dataset(X, std::move(f)), family);
        const json t = to_json(trace);
        for (auto& [k, v] : t.items()) row[k] = v;
      } catch (const std::exception& e) {
        row["error"] = describe(e);
      }
      rows.push_back(std::move(row));
    }
    traces.push_back({{"kernel", std::string(to_string(family))}, {"rows", std::move(rows)}});
  }
  out["traces"] = std::move(traces);
  return out;
}

json run_design_loop(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.problem == ProblemKind::kCubature) {
    fail(ErrorCode::kConfig, "the design loop needs a problem defined on (0,1]^d; cubature widths must be 1/N");
  }
  const Design X0 = base_design(cfg);
  std::vector<double> f0;
  for (const auto& x : X0) f0.push_back(problem_eval(cfg, x));
  const Dataset initial(X0, std::move(f0));
  const Simulator sim = [&cfg](const Point& x) { return problem_eval(cfg, x); };
  const KernelFamily family = cfg.kernels.front();
  const LoopResult result = sequential_loop(initial, family, CostModel::reciprocal_product(), cfg.budget,
                                            cfg.rounds, sim, cfg.seed, cfg.candidates);

  json out;
  out["problem"] = problem_label(cfg);
  out["kernel"] = std::string(to_string(family));
  out["budget"] = cfg.budget;
  out["candidates"] = cfg.candidates;
  json rounds = json::array();
  std::size_t offset = initial.size();
  for (std::size_t r = 0; r < result.rounds.size(); ++r) {
    const auto& round = result.rounds[r];
    json rec;
    rec["round"] = r;
    rec["selection"] = to_json(round.selection);
    rec["proposal"] = to_json(round.proposal);
    const std::size_t k = round.proposal.points.size();
    rec["values"] = std::vector<double>(result.data.f.begin() + static_cast<long>(offset),
                                        result.data.f.begin() + static_cast<long>(offset + k));
    offset += k;
    rounds.push_back(std::move(rec));
  }
  out["rounds"] = std::move(rounds);
  out["final"] = to_json(result.final_selection);
  if (cfg.problem == ProblemKind::kEdSynthetic) {
    out["recovered"] = result.final_selection.chosen == EdSynthetic::true_index_set();
  }
  try {
    const Posterior post =
        Extrapolant::fit(result.final_selection.chosen, result.final_selection.chosen_cov, result.data)
            .predict_at_zero();
    out["final_mean"] = post.mean;
    out["final_variance"] = post.variance;
  } catch (const Error& e) {
    out["final_error"] = describe(e);
  }
  out["n_points"] = result.data.size();
  json pts = json::array();
  for (std::size_t i = 0; i < result.data.size(); ++i) {
    pts.push_back({{"x", result.data.X[i]}, {"f", result.data.f[i]}});
  }
  out["data"] = std::move(pts);
  return out;
}

json run_flock(const ExperimentConfig& cfg, std::string* trajectory_csv) {
  FlockParams p = cfg.flock;
  p.seed = cfg.seed;
  p.validate();
  std::ostringstream traj;
  TrajectoryObserver observer;
  if (trajectory_csv) {
    traj << "t,agent,u_1,u_2\n";
    observer = [&traj](const FlockState& s) {
      for (std::size_t i = 0; i < s.positions.size(); ++i) {
        traj << format_double(s.t) << ',' << i << ',' << format_double(s.positions[i][0]) << ','
             << format_double(s.positions[i][1]) << '\n';
      }
    };
  }
  const double qoi = simulate_qoi(p, observer);
  if (trajectory_csv) *trajectory_csv = traj.str();
  json out;
  out["x1"] = p.x1;
  out["x2"] = p.x2;
  out["x3"] = p.x3;
  out["seed"] = p.seed;
  out["t_final"] = p.t_final;
  out["agent"] = p.tracked_agent;
  out["repulsion"] = p.repulsion == RepulsionMode::kPrinted ? "printed" : "repulsive";
  out["qoi"] = qoi;
  return out;
}

json run_fit(const ExperimentConfig& cfg) {
  if (cfg.data_path.empty()) fail(ErrorCode::kConfig, "fit needs a dataset path");
  const Dataset data = load_dataset_csv(cfg.data_path);
  const KernelFamily family = cfg.kernels.front();
  json out;
  out["n"] = data.size();
  out["dim"] = data.dim();
  Covariance cov = KernelSpec(family, initial_theta(family));
  IndexSet A = IndexSet::constant(data.dim());
  double objective = std::numeric_limits<double>::quiet_NaN();
  if (cfg.mode == IndexSetMode::kStepwise) {
    const SelectionTrace trace = stepwise_select(data, family);
    A = trace.chosen;
    cov = trace.chosen_cov;
    objective = trace.chosen_objective;
    out["history"] = to_json(trace)["history"];
  } else {
    if (cfg.fit_index_set.is_null()) fail(ErrorCode::kConfig, "fixed mode needs an index_set");
    try {
      A = index_set_from_json(cfg.fit_index_set, data.dim());
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, std::string("index_set: ") + e.what());
    }
    const KernelFit fit = optimize_kernel(A, cov, data);
    cov = fit.cov;
    objective = fit.objective;
  }
  const Posterior post = Extrapolant::fit(A, cov, data).predict_at_zero();
  out["chosen_A"] = to_json(A);
  out["kernel"] = to_json(cov);
  out["objective"] = finite_or_null(objective);
  out["mean"] = post.mean;
  out["variance"] = post.variance;
  out["sd"] = std::sqrt(post.variance);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "problem,method,kernel,h,estimate,variance,abs_error,rel_error,chosen_A,wall_time_ms,status\n";
  for (const auto& r : rows) {
    os << csv_field(r.problem) << ',' << csv_field(r.method) << ',' << csv_field(r.kernel) << ','
       << format_double(r.h) << ',' << opt(r.estimate) << ',' << opt(r.variance) << ','
       << opt(r.abs_error) << ',' << opt(r.rel_error) << ',' << csv_field(r.chosen_A) << ','
       << opt(r.wall_time_ms) << ',' << csv_field(r.status) << '\n';
  }
  return os.str();
}

double convergence_slope(const std::vector<double>& h, const std::vector<double>& err, double truth) {
  if (h.size() != err.size()) fail(ErrorCode::kDimensionMismatch, "h and error lists differ in length");
  double floor = std::numeric_limits<double>::epsilon() * std::abs(truth);
  double min_err = std::numeric_limits<double>::infinity();
  for (double e : err) {
    if (std::isfinite(e)) min_err = std::min(min_err, e);
  }
  if (std::isfinite(min_err)) floor = std::max(floor, min_err);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::isfinite(err[i]) && err[i] > 100.0 * floor && h[i] > 0.0) {
      xs.push_back(std::log2(h[i]));
      ys.push_back(std::log2(err[i]));
    }
  }
  if (xs.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace spre
