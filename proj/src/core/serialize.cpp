#include "spre/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spre/error.hpp"

namespace spre {

json to_json(const IndexSet& A) {
  json out = json::array();
  for (const auto& alpha : A) out.push_back(alpha.exponents());
  return out;
}

IndexSet index_set_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) fail(ErrorCode::kConfig, "index set must be a list of exponent lists");
  std::vector<MultiIndex> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != dim) {
      fail(ErrorCode::kConfig, "index set entry " + e.dump() + " does not have " + std::to_string(dim) +
                                   " exponents");
    }
    std::vector<int> exps;
    for (const auto& v : e) {
      if (!v.is_number_integer()) fail(ErrorCode::kConfig, "exponents must be integers");
      exps.push_back(v.get<int>());
    }
    try {
      out.emplace_back(std::move(exps));
    } catch (const Error& err) {
      fail(ErrorCode::kConfig, err.what());
    }
  }
  try {
    return IndexSet(dim, std::move(out));
  } catch (const Error& err) {
    fail(ErrorCode::kConfig, err.what());
  }
}

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json to_json(const KernelSpec& k) {
  json out;
  out["family"] = std::string(to_string(k.family()));
  out["theta"] = k.theta();
  out["sigma2"] = k.sigma2();
  if (k.family() != KernelFamily::kWhiteNoise) out["lengthscale"] = k.lengthscale();
  return out;
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) fail(ErrorCode::kConfig, "kernel needs a \"family\"");
  const auto family = parse_kernel_family(j.at("family").get<std::string>());
  if (!family) fail(ErrorCode::kConfig, "unknown kernel family " + j.at("family").dump());
  std::vector<double> theta = initial_theta(*family);
  if (j.contains("theta")) theta = j.at("theta").get<std::vector<double>>();
  return KernelSpec(*family, std::move(theta));
}

json to_json(const Covariance& c) {
  json out = to_json(c.kernel());
  if (c.scaling()) {
    json lead = json::array();
    for (const auto& a : c.scaling()->lead()) lead.push_back(a.exponents());
    out["lead"] = std::move(lead);
  }
  return out;
}

json to_json(const SelectionTrace& trace) {
  json out;
  out["chosen_A"] = to_json(trace.chosen);
  out["kernel"] = to_json(trace.chosen_cov);
  out["theta"] = trace.chosen_cov.kernel().theta();
  out["objective"] = finite_or_null(trace.chosen_objective);
  json hist = json::array();
  for (const auto& s : trace.history) {
    json step;
    step["candidate"] = to_json(s.candidate);
    step["objective"] = finite_or_null(s.objective);
    step["order"] = s.order;
    step["merged"] = s.merged;
    step["accepted"] = s.accepted;
    hist.push_back(std::move(step));
  }
  out["history"] = std::move(hist);
  return out;
}

json to_json(const DesignProposal& p) {
  json out;
  out["points"] = p.points;
  out["predicted_variance"] = p.predicted_variance;
  out["total_cost"] = p.total_cost;
  out["candidate"] = p.candidate;
  return out;
}

std::string compact(const IndexSet& A) { return to_json(A).dump(); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    fail(ErrorCode::kIo, "line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kIo, "dataset CSV is empty");
  const auto header = split_csv_line(line);
  std::size_t d = 0;
  while (d < header.size() && header[d] == "x_" + std::to_string(d + 1)) ++d;
  if (d == 0 || d >= header.size() || header[d] != "f") {
    fail(ErrorCode::kIo, "dataset CSV header must be x_1,...,x_d,f[,cost]");
  }
  const bool has_cost = header.size() == d + 2 && header[d + 1] == "cost";
  if (header.size() != d + 1 && !has_cost) fail(ErrorCode::kIo, "unexpected columns in dataset CSV header");

  std::vector<Point> pts;
  std::vector<double> f;
  std::vector<double> cost;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(ErrorCode::kIo, "line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " columns");
    }
    Point x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = parse_number(cells[j], line_no);
    pts.push_back(std::move(x));
    f.push_back(parse_number(cells[d], line_no));
    if (has_cost) cost.push_back(parse_number(cells[d + 1], line_no));
  }
  if (pts.empty()) fail(ErrorCode::kIo, "dataset CSV has no rows");
  std::optional<std::vector<double>> c;
  if (has_cost) c = std::move(cost);
  return Dataset(Design(d, std::move(pts)), std::move(f), std::move(c));
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.dim(); ++j) out << "x_" << j + 1 << ',';
  out << 'f' << (data.cost ? ",cost" : "") << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.X[i]) out << format_double(v) << ',';
    out << format_double(data.f[i]);
    if (data.cost) out << ',' << format_double((*data.cost)[i]);
    out << '\n';
  }
}

}  // namespace spre
