// Command-line experiment runner. Builds an experiment config from an
// optional JSON file plus flags and hands it to the library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spre/spre.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::string problem;
  int d = 0;
  int s = -1;
  long long seed = -1;
  std::vector<std::string> methods;
  std::vector<std::string> kernels;
  std::vector<int> h_exponents;
  std::string mode;
  std::string index_set;
  std::string base_design;
  std::string output;
  bool timing = false;
};

struct DesignFlags {
  double budget = 0.0;
  int rounds = -1;
  long long candidates = 0;
};

struct FlockFlags {
  double x1 = 0.01;
  double x2 = 0.0;
  double x3 = 0.0;
  double t_final = 5.0;
  int agent = 0;
  std::string repulsion = "printed";
  std::string trajectory;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_common(json& j, const CommonFlags& f, const CLI::App& app) {
  if (app.count("--problem")) j["problem"] = f.problem;
  if (app.count("--d")) j["d"] = f.d;
  if (app.count("--s")) j["s"] = f.s;
  if (app.count("--seed")) j["seed"] = f.seed;
  if (app.count("--methods")) j["methods"] = f.methods;
  if (app.count("--kernels")) j["kernels"] = f.kernels;
  if (app.count("--h-exponents")) j["h_exponents"] = f.h_exponents;
  if (app.count("--mode")) j["index_set_mode"] = f.mode;
  if (app.count("--base-design")) j["base_design"] = f.base_design;
  if (app.count("--output")) j["output"] = f.output;
  if (app.count("--timing")) j["timing"] = f.timing;
  if (app.count("--index-set")) {
    try {
      j["index_set"] = json::parse(f.index_set);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("--index-set: ") + e.what());
    }
  }
}

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its keys");
  sub->add_option("--problem", f.problem, "cubature | ed-synthetic | flocking");
  sub->add_option("--d", f.d, "Cubature dimension");
  sub->add_option("--s", f.s, "Cubature smoothness level");
  sub->add_option("--seed", f.seed, "Seed for noise, initial conditions and design search");
  sub->add_option("--methods", f.methods, "Subset of SPRE MRE GRE RAW");
  sub->add_option("--kernels", f.kernels, "Kernel families: WhiteNoise Matern12 Matern32 Gaussian");
  sub->add_option("--h-exponents", f.h_exponents, "Ladder exponents m, h = 2^-m");
  sub->add_option("--mode", f.mode, "Index set mode: fixed | stepwise");
  sub->add_option("--index-set", f.index_set, "Index set as JSON, e.g. [[0,0],[2,0]]");
  sub->add_option("--base-design", f.base_design, "Reference design name");
  sub->add_option("-o,--output", f.output, "Output file (default: stdout)");
  sub->add_flag("--timing", f.timing, "Record wall time per row");
}

int write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << path << '\n';
    return kExitRuntime;
  }
  return 0;
}

int exit_code_for(spre_status st) {
  return (st == SPRE_CONFIG) ? kExitConfig : kExitRuntime;
}

int run(const std::string& command, const json& config, const std::string& output) {
  char* text = nullptr;
  const spre_status st = spre_run_experiment(command.c_str(), config.dump().c_str(), &text);
  if (st != SPRE_OK) {
    std::cerr << "error: " << spre_status_name(st) << ": " << spre_last_error() << '\n';
    return exit_code_for(st);
  }
  const std::string result(text);
  spre_string_free(text);
  return write_output(output, result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse probabilistic Richardson extrapolation experiments"};
  app.require_subcommand(1);

  CommonFlags common;
  DesignFlags design;
  FlockFlags flock;
  std::string data_path;
  std::string kernel = "WhiteNoise";

  auto* converge = app.add_subcommand("converge", "Error against h for each method (CSV)");
  add_common(converge, common);
  auto* calibrate = app.add_subcommand("calibrate", "Relative errors of the probabilistic methods (CSV)");
  add_common(calibrate, common);
  auto* sparsity = app.add_subcommand("sparsity", "Stepwise index-set trace per h (JSON)");
  add_common(sparsity, common);

  auto* design_cmd = app.add_subcommand("design", "Sequential design loop (JSON per round)");
  add_common(design_cmd, common);
  design_cmd->add_option("--budget", design.budget, "Cost budget per round");
  design_cmd->add_option("--rounds", design.rounds, "Number of design rounds");
  design_cmd->add_option("--candidates", design.candidates, "Candidate batches per round (default 1000)");

  auto* flock_cmd = app.add_subcommand("flock", "Run the flocking simulator once");
  flock_cmd->add_option("--x1", flock.x1, "Time step")->capture_default_str();
  flock_cmd->add_option("--x2", flock.x2, "Repulsion softening")->capture_default_str();
  flock_cmd->add_option("--x3", flock.x3, "Cutoff width")->capture_default_str();
  flock_cmd->add_option("--seed", common.seed, "Initial-condition seed");
  flock_cmd->add_option("--t-final", flock.t_final, "Final time")->capture_default_str();
  flock_cmd->add_option("--agent", flock.agent, "Tracked agent index")->capture_default_str();
  flock_cmd->add_option("--repulsion", flock.repulsion, "printed | repulsive")->capture_default_str();
  flock_cmd->add_option("--trajectory", flock.trajectory, "Write a trajectory CSV to this path");
  flock_cmd->add_option("-o,--output", common.output, "Output file (default: stdout)");

  auto* fit_cmd = app.add_subcommand("fit", "Fit a CSV dataset and report the posterior at 0");
  fit_cmd->add_option("data", data_path, "CSV with header x_1,...,x_d,f")->required();
  fit_cmd->add_option("--kernel", kernel, "Kernel family")->capture_default_str();
  fit_cmd->add_option("--mode", common.mode, "fixed | stepwise (default stepwise)");
  fit_cmd->add_option("--index-set", common.index_set, "Index set for fixed mode, as JSON");
  fit_cmd->add_option("-o,--output", common.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    json cfg;

    if (name == "flock") {
      cfg = json::object();
      cfg["problem"] = "flocking";
      if (sub->count("--seed")) cfg["seed"] = common.seed;
      cfg["flock"] = {{"x1", flock.x1}, {"x2", flock.x2},       {"x3", flock.x3},
                      {"t_final", flock.t_final}, {"agent", flock.agent}, {"repulsion", flock.repulsion}};
      const int rc = run("flock", cfg, common.output);
      if (rc != 0 || flock.trajectory.empty()) return rc;
      spre_flock_params p;
      spre_flock_params_default(&p);
      p.x1 = flock.x1;
      p.x2 = flock.x2;
      p.x3 = flock.x3;
      p.t_final = flock.t_final;
      p.tracked_agent = flock.agent;
      p.seed = sub->count("--seed") ? static_cast<uint64_t>(common.seed) : 0;
      p.repulsion = flock.repulsion == "repulsive" ? SPRE_REPULSION_REPULSIVE : SPRE_REPULSION_PRINTED;
      char* csv = nullptr;
      const spre_status st = spre_flock_trajectory_csv(&p, &csv);
      if (st != SPRE_OK) {
        std::cerr << "error: " << spre_status_name(st) << ": " << spre_last_error() << '\n';
        return exit_code_for(st);
      }
      const std::string text(csv);
      spre_string_free(csv);
      return write_output(flock.trajectory, text);
    }

    if (name == "fit") {
      cfg = json::object();
      cfg["data"] = data_path;
      cfg["kernels"] = {kernel};
      cfg["index_set_mode"] = sub->count("--mode") ? common.mode : std::string("stepwise");
      if (sub->count("--index-set")) {
        try {
          cfg["index_set"] = json::parse(common.index_set);
        } catch (const json::exception& e) {
          throw ConfigError(std::string("--index-set: ") + e.what());
        }
      }
      return run("fit", cfg, common.output);
    }

    cfg = load_config(common.config_path);
    apply_common(cfg, common, *sub);
    if (name == "design") {
      if (sub->count("--budget")) cfg["budget"] = design.budget;
      if (sub->count("--rounds")) cfg["rounds"] = design.rounds;
      if (sub->count("--candidates")) cfg["candidates"] = design.candidates;
      if (!cfg.contains("problem")) cfg["problem"] = "ed-synthetic";
    }
    const std::string output = cfg.contains("output") ? cfg["output"].get<std::string>() : std::string();
    return run(name, cfg, output);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
