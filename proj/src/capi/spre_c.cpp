#include "spre/spre.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "spre/design.hpp"
#include "spre/error.hpp"
#include "spre/experiments.hpp"
#include "spre/extrapolate.hpp"
#include "spre/flocking.hpp"
#include "spre/index_poly.hpp"
#include "spre/kernels.hpp"
#include "spre/model_select.hpp"
#include "spre/problems.hpp"
#include "spre/serialize.hpp"

struct spre_index_set {
  spre::IndexSet set;
};

struct spre_dataset {
  spre::Dataset data;
};

struct spre_model {
  spre::Extrapolant model;
};

namespace {

thread_local std::string g_last_error;

spre_status set_error(spre_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs `body`, translating library exceptions into status codes.
template <typename F>
spre_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SPRE_OK;
  } catch (const spre::Error& e) {
    return set_error(static_cast<spre_status>(e.code()), e.what());
  } catch (const spre::json::exception& e) {
    return set_error(SPRE_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SPRE_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SPRE_INTERNAL, e.what());
  } catch (...) {
    return set_error(SPRE_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) spre::fail(spre::ErrorCode::kInvalidArgument, what);
}

spre::KernelFamily family_of(spre_kernel_family f) {
  switch (f) {
    case SPRE_KERNEL_WHITE_NOISE: return spre::KernelFamily::kWhiteNoise;
    case SPRE_KERNEL_MATERN12: return spre::KernelFamily::kMatern12;
    case SPRE_KERNEL_MATERN32: return spre::KernelFamily::kMatern32;
    case SPRE_KERNEL_GAUSSIAN: return spre::KernelFamily::kGaussian;
  }
  spre::fail(spre::ErrorCode::kInvalidArgument, "unknown kernel family");
}

spre::KernelSpec kernel_of(spre_kernel_family f, const double* theta, size_t n_theta) {
  const spre::KernelFamily family = family_of(f);
  if (!theta) return spre::KernelSpec(family, spre::initial_theta(family));
  return spre::KernelSpec(family, std::vector<double>(theta, theta + n_theta));
}

spre::Design design_of(size_t dim, size_t n, const double* points) {
  require(n == 0 || points, "points must not be null");
  std::vector<spre::Point> pts(n);
  for (size_t i = 0; i < n; ++i) pts[i].assign(points + i * dim, points + (i + 1) * dim);
  return spre::Design(dim, std::move(pts));
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spre::FlockParams flock_of(const spre_flock_params* p) {
  require(p, "flock params must not be null");
  spre::FlockParams out;
  out.n_agents = p->n_agents;
  out.domain = p->domain;
  out.repulsion_radius = p->repulsion_radius;
  out.interaction_radius = p->interaction_radius;
  out.x1 = p->x1;
  out.x2 = p->x2;
  out.x3 = p->x3;
  out.seed = p->seed;
  out.t_final = p->t_final;
  out.tracked_agent = p->tracked_agent;
  out.repulsion = p->repulsion == SPRE_REPULSION_REPULSIVE ? spre::RepulsionMode::kRepulsive
                                                           : spre::RepulsionMode::kPrinted;
  return out;
}

}  // namespace

extern "C" {

const char* spre_version(void) { return "0.1.0"; }

const char* spre_status_name(spre_status status) {
  switch (status) {
    case SPRE_OK: return "OK";
    case SPRE_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= 12) return spre::to_string(static_cast<spre::ErrorCode>(code));
  return "Unknown";
}

const char* spre_last_error(void) { return g_last_error.c_str(); }

void spre_string_free(char* s) { std::free(s); }

// ---- index sets

spre_status spre_index_set_create(size_t dim, size_t count, const int* exponents, spre_index_set** out) {
  return guarded([&] {
    require(out && (count == 0 || exponents), "null argument");
    std::vector<spre::MultiIndex> idx;
    for (size_t i = 0; i < count; ++i) {
      idx.emplace_back(std::vector<int>(exponents + i * dim, exponents + (i + 1) * dim));
    }
    *out = new spre_index_set{spre::IndexSet(dim, std::move(idx))};
  });
}

spre_status spre_index_set_total_degree(size_t dim, int degree, spre_index_set** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new spre_index_set{spre::IndexSet::total_degree(dim, degree)};
  });
}

spre_status spre_index_set_from_json(size_t dim, const char* text, spre_index_set** out) {
  return guarded([&] {
    require(out && text, "null argument");
    *out = new spre_index_set{spre::index_set_from_json(spre::json::parse(text), dim)};
  });
}

void spre_index_set_free(spre_index_set* set) { delete set; }

size_t spre_index_set_size(const spre_index_set* set) { return set ? set->set.size() : 0; }

size_t spre_index_set_dim(const spre_index_set* set) { return set ? set->set.dim() : 0; }

spre_status spre_index_set_exponents(const spre_index_set* set, int* out) {
  return guarded([&] {
    require(set && out, "null argument");
    size_t k = 0;
    for (const auto& alpha : set->set) {
      for (int e : alpha.exponents()) out[k++] = e;
    }
  });
}

// ---- datasets

spre_status spre_dataset_create(size_t dim, size_t n, const double* points, const double* values,
                                spre_dataset** out) {
  return guarded([&] {
    require(out && (n == 0 || values), "null argument");
    *out = new spre_dataset{spre::Dataset(design_of(dim, n, points), std::vector<double>(values, values + n))};
  });
}

spre_status spre_dataset_load_csv(const char* path, spre_dataset** out) {
  return guarded([&] {
    require(out && path, "null argument");
    *out = new spre_dataset{spre::load_dataset_csv(path)};
  });
}

void spre_dataset_free(spre_dataset* data) { delete data; }

size_t spre_dataset_size(const spre_dataset* data) { return data ? data->data.size() : 0; }

size_t spre_dataset_dim(const spre_dataset* data) { return data ? data->data.dim() : 0; }

// ---- polynomial machinery

spre_status spre_vandermonde(const spre_index_set* A, size_t n, const double* points, double* out) {
  return guarded([&] {
    require(A && out, "null argument");
    const Eigen::MatrixXd V = spre::vandermonde(A->set, design_of(A->set.dim(), n, points));
    for (Eigen::Index i = 0; i < V.rows(); ++i)
      for (Eigen::Index j = 0; j < V.cols(); ++j) out[i * V.cols() + j] = V(i, j);
  });
}

spre_status spre_is_unisolvent(const spre_index_set* A, size_t n, const double* points, int* out) {
  return guarded([&] {
    require(A && out, "null argument");
    *out = spre::is_unisolvent(A->set, design_of(A->set.dim(), n, points)) ? 1 : 0;
  });
}

spre_status spre_lagrange_at_zero(const spre_index_set* A, size_t n, const double* points, double* out) {
  return guarded([&] {
    require(A && out, "null argument");
    const Eigen::VectorXd w = spre::lagrange_at_zero(A->set, design_of(A->set.dim(), n, points));
    for (Eigen::Index i = 0; i < w.size(); ++i) out[i] = w(i);
  });
}

spre_status spre_lebesgue_at_zero(const spre_index_set* A, size_t n, const double* points, double* out) {
  return guarded([&] {
    require(A && out, "null argument");
    *out = spre::lebesgue_at_zero(A->set, design_of(A->set.dim(), n, points));
  });
}

// ---- kernels

size_t spre_kernel_parameter_count(spre_kernel_family family) {
  switch (family) {
    case SPRE_KERNEL_WHITE_NOISE: return spre::parameter_count(spre::KernelFamily::kWhiteNoise);
    case SPRE_KERNEL_MATERN12: return spre::parameter_count(spre::KernelFamily::kMatern12);
    case SPRE_KERNEL_MATERN32: return spre::parameter_count(spre::KernelFamily::kMatern32);
    case SPRE_KERNEL_GAUSSIAN: return spre::parameter_count(spre::KernelFamily::kGaussian);
  }
  return 0;
}

double spre_softplus(double z) { return spre::softplus(z); }

spre_status spre_kernel_eval(spre_kernel_family family, const double* theta, size_t n_theta, size_t dim,
                             const double* x, const double* y, double* out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    *out = kernel_of(family, theta, n_theta)(std::span<const double>(x, dim), std::span<const double>(y, dim));
  });
}

// ---- extrapolation

spre_status spre_model_fit(const spre_index_set* A, spre_kernel_family family, const double* theta,
                           size_t n_theta, const spre_dataset* data, spre_model** out) {
  return guarded([&] {
    require(A && data && out, "null argument");
    *out = new spre_model{spre::Extrapolant::fit(A->set, kernel_of(family, theta, n_theta), data->data)};
  });
}

spre_status spre_model_fit_optimized(const spre_index_set* A, spre_kernel_family family,
                                     const spre_dataset* data, spre_model** out) {
  return guarded([&] {
    require(A && data && out, "null argument");
    const spre::KernelFit fit = spre::optimize_kernel(A->set, family_of(family), data->data);
    *out = new spre_model{spre::Extrapolant::fit(A->set, fit.cov, data->data)};
  });
}

spre_status spre_model_fit_stepwise(const spre_dataset* data, spre_kernel_family family, spre_model** out) {
  return guarded([&] {
    require(data && out, "null argument");
    const spre::SelectionTrace trace = spre::stepwise_select(data->data, family_of(family));
    *out = new spre_model{spre::Extrapolant::fit(trace.chosen, trace.chosen_cov, data->data)};
  });
}

void spre_model_free(spre_model* model) { delete model; }

spre_status spre_model_predict(const spre_model* model, const double* x_star, double* mean, double* variance) {
  return guarded([&] {
    require(model && x_star && mean && variance, "null argument");
    const spre::Posterior p =
        model->model.predict(std::span<const double>(x_star, model->model.data().dim()));
    *mean = p.mean;
    *variance = p.variance;
  });
}

spre_status spre_model_beta(const spre_model* model, double* out) {
  return guarded([&] {
    require(model && out, "null argument");
    const Eigen::VectorXd b = model->model.beta();
    for (Eigen::Index i = 0; i < b.size(); ++i) out[i] = b(i);
  });
}

spre_status spre_model_theta(const spre_model* model, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(model && count && (capacity == 0 || out), "null argument");
    const auto& theta = model->model.covariance().kernel().theta();
    *count = theta.size();
    for (size_t i = 0; i < theta.size() && i < capacity; ++i) out[i] = theta[i];
  });
}

spre_status spre_model_index_set(const spre_model* model, spre_index_set** out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = new spre_index_set{model->model.index_set()};
  });
}

spre_status spre_mre_extrapolate(const spre_index_set* A, const spre_dataset* data, double* out) {
  return guarded([&] {
    require(A && data && out, "null argument");
    *out = spre::mre_extrapolate(A->set, data->data);
  });
}

spre_status spre_mre_nearest(const spre_index_set* A, const spre_dataset* data, double* out) {
  return guarded([&] {
    require(A && data && out, "null argument");
    *out = spre::mre_extrapolate(A->set, spre::mre_select_subset(A->set, data->data));
  });
}

spre_status spre_gre_predict(const spre_dataset* data, size_t n_lead, const int* lead, double sigma2_theta,
                             const double* x_star, double* mean, double* variance) {
  return guarded([&] {
    require(data && x_star && mean && variance && (n_lead == 0 || lead), "null argument");
    const size_t d = data->data.dim();
    std::vector<spre::MultiIndex> idx;
    for (size_t i = 0; i < n_lead; ++i) idx.emplace_back(std::vector<int>(lead + i * d, lead + (i + 1) * d));
    const spre::Posterior p = spre::gre_fit_predict(spre::LeadScaling(std::move(idx)), sigma2_theta,
                                                    data->data, std::span<const double>(x_star, d));
    *mean = p.mean;
    *variance = p.variance;
  });
}

spre_status spre_block_mean(const spre_index_set* A, spre_kernel_family family, const double* theta,
                            size_t n_theta, const spre_dataset* data, const double* x_star, double* out) {
  return guarded([&] {
    require(A && data && x_star && out, "null argument");
    *out = spre::spre_mean_via_block_system(A->set, kernel_of(family, theta, n_theta), data->data,
                                            std::span<const double>(x_star, data->data.dim()));
  });
}

spre_status spre_power_function_sq(const spre_index_set* A, spre_kernel_family family, const double* theta,
                                   size_t n_theta, size_t n, const double* points, const double* x,
                                   double* out) {
  return guarded([&] {
    require(A && x && out, "null argument");
    const size_t d = A->set.dim();
    *out = spre::power_function_sq(A->set, kernel_of(family, theta, n_theta), design_of(d, n, points),
                                   std::span<const double>(x, d));
  });
}

// ---- model selection

spre_status spre_loocv(const spre_index_set* A, spre_kernel_family family, const double* theta, size_t n_theta,
                       const spre_dataset* data, double* out) {
  return guarded([&] {
    require(A && data && out, "null argument");
    *out = spre::loocv(A->set, kernel_of(family, theta, n_theta), data->data).neg_log_density;
  });
}

spre_status spre_optimize_kernel(const spre_index_set* A, spre_kernel_family family, const spre_dataset* data,
                                 double* theta_out, double* objective) {
  return guarded([&] {
    require(A && data && theta_out && objective, "null argument");
    const spre::KernelFit fit = spre::optimize_kernel(A->set, family_of(family), data->data);
    const auto& theta = fit.cov.kernel().theta();
    for (size_t i = 0; i < theta.size(); ++i) theta_out[i] = theta[i];
    *objective = fit.objective;
  });
}

spre_status spre_stepwise_select_json(const spre_dataset* data, spre_kernel_family family, char** json_out) {
  return guarded([&] {
    require(data && json_out, "null argument");
    *json_out = dup_string(spre::to_json(spre::stepwise_select(data->data, family_of(family))).dump());
  });
}

// ---- experimental design

spre_status spre_propose_design_json(const spre_model* model, double budget, size_t n_candidates,
                                     uint64_t seed, char** json_out) {
  return guarded([&] {
    require(model && json_out, "null argument");
    const spre::DesignProposal p = spre::propose_design(model->model, spre::CostModel::reciprocal_product(),
                                                        budget, n_candidates, seed);
    *json_out = dup_string(spre::to_json(p).dump());
  });
}

// ---- problems

spre_status spre_cubature_eval(size_t d, int s, const double* widths, double* out) {
  return guarded([&] {
    require(widths && out, "null argument");
    *out = spre::cubature_eval(spre::CubatureProblem(d, s), std::span<const double>(widths, d));
  });
}

spre_status spre_cubature_truth(size_t d, int s, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = spre::cubature_truth(spre::CubatureProblem(d, s));
  });
}

spre_status spre_ed_synthetic_eval(uint64_t seed, const double* x, double* out) {
  return guarded([&] {
    require(x && out, "null argument");
    *out = spre::EdSynthetic(seed)(std::span<const double>(x, 2));
  });
}

spre_status spre_reference_design(const char* name, double* out, size_t capacity, size_t* n, size_t* dim) {
  return guarded([&] {
    require(name && n && dim && (capacity == 0 || out), "null argument");
    const spre::Design X = spre::reference_design(name);
    *n = X.size();
    *dim = X.dim();
    size_t k = 0;
    for (const auto& x : X) {
      for (double v : x) {
        if (k < capacity) out[k] = v;
        ++k;
      }
    }
  });
}

void spre_flock_params_default(spre_flock_params* p) {
  if (!p) return;
  const spre::FlockParams d;
  p->n_agents = d.n_agents;
  p->domain = d.domain;
  p->repulsion_radius = d.repulsion_radius;
  p->interaction_radius = d.interaction_radius;
  p->x1 = d.x1;
  p->x2 = d.x2;
  p->x3 = d.x3;
  p->seed = d.seed;
  p->t_final = d.t_final;
  p->tracked_agent = d.tracked_agent;
  p->repulsion = SPRE_REPULSION_PRINTED;
}

spre_status spre_flock_qoi(const spre_flock_params* p, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = spre::simulate_qoi(flock_of(p));
  });
}

spre_status spre_flock_trajectory_csv(const spre_flock_params* p, char** csv_out) {
  return guarded([&] {
    require(csv_out, "null argument");
    spre::ExperimentConfig cfg;
    cfg.flock = flock_of(p);
    cfg.seed = p->seed;
    std::string csv;
    spre::run_flock(cfg, &csv);
    *csv_out = dup_string(csv);
  });
}

// ---- experiment runner

spre_status spre_run_experiment(const char* command, const char* config_json, char** out) {
  return guarded([&] {
    require(command && config_json && out, "null argument");
    spre::json j;
    try {
      j = spre::json::parse(config_json);
    } catch (const spre::json::exception& e) {
      spre::fail(spre::ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
    }
    const spre::ExperimentConfig cfg = spre::ExperimentConfig::from_json(j);
    const std::string cmd = command;
    std::string text;
    if (cmd == "converge") text = spre::rows_to_csv(spre::run_convergence(cfg));
    else if (cmd == "calibrate") text = spre::rows_to_csv(spre::run_calibration(cfg));
    else if (cmd == "sparsity") text = spre::run_sparsity_trace(cfg).dump(2) + "\n";
    else if (cmd == "design") text = spre::run_design_loop(cfg).dump(2) + "\n";
    else if (cmd == "flock") text = spre::run_flock(cfg).dump(2) + "\n";
    else if (cmd == "fit") text = spre::run_fit(cfg).dump(2) + "\n";
    else spre::fail(spre::ErrorCode::kConfig, "unknown command \"" + cmd + "\"");
    *out = dup_string(text);
  });
}

double spre_convergence_slope(size_t n, const double* h, const double* abs_error, double truth) {
  if (n == 0 || !h || !abs_error) return std::nan("");
  try {
    return spre::convergence_slope(std::vector<double>(h, h + n), std::vector<double>(abs_error, abs_error + n),
                                   truth);
  } catch (...) {
    return std::nan("");
  }
}

}  // extern "C"
