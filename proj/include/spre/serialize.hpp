#pragma once

// JSON and CSV conversions for index sets, kernels, selection traces and
// datasets.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "spre/design.hpp"
#include "spre/extrapolate.hpp"
#include "spre/index_poly.hpp"
#include "spre/kernels.hpp"
#include "spre/model_select.hpp"

namespace spre {

using json = nlohmann::ordered_json;

/// [[a_1, ..., a_d], ...] in canonical order.
json to_json(const IndexSet& A);
IndexSet index_set_from_json(const json& j, std::size_t dim);

/// {"family": name, "theta": [...], "sigma2": ..., "lengthscale": ...};
/// "sigma2" and "lengthscale" are informational and ignored on input.
json to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const json& j);

json to_json(const Covariance& c);
json to_json(const SelectionTrace& trace);
json to_json(const DesignProposal& proposal);

/// Non-finite values become null.
json finite_or_null(double v);

/// Compact one-line rendering used inside CSV fields, e.g. "[[0,0],[2,0]]".
std::string compact(const IndexSet& A);

/// Dataset CSV: header "x_1,...,x_d,f[,cost]" then one row per point.
Dataset read_dataset_csv(std::istream& in);
Dataset load_dataset_csv(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// "%.17g".
std::string format_double(double v);

}  // namespace spre
