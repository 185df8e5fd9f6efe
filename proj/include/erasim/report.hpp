// Copyright 2026 The erasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "erasim/qstate.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdlib>

namespace erasim {

using ojson = nlohmann::ordered_json;

/// Runner configuration. `trials = -1` means "use the scenario default".
struct ExperimentConfig {
  std::string scenario;
  double g = 0.5;
  double delta = 1.0;
  std::string meter_kind = "gaussian";
  int trials = -1;
  std::uint64_t seed = 12345;
  bool seed_given = false;
  double tolerance = 1e-9;
  ojson custom;  // optional states/operators, complex entries as [re, im]
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "hardy",       "pi11", "pauli-product", "nonlocal-product", "ccu",
      "causality",   "weak-value", "modular-value", "prop1"};
  return names;
}

/// Default tolerance, overridable through the ERASIM_TOL environment variable.
inline double env_tolerance() {
  if (const char* s = std::getenv("ERASIM_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && v > 0.0) return v;
    throw std::invalid_argument("ERASIM_TOL: not a positive number");
  }
  return 1e-9;
}

inline void validate_config(const ExperimentConfig& cfg) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), cfg.scenario) == names.end())
    throw std::invalid_argument("scenario: unknown name '" + cfg.scenario + "'");
  if (!std::isfinite(cfg.g)) throw std::invalid_argument("g: must be finite");
  if (cfg.meter_kind != "gaussian" && cfg.meter_kind != "discrete")
    throw std::invalid_argument("meter: must be 'gaussian' or 'discrete'");
  if (cfg.meter_kind == "gaussian" && !(cfg.delta > 0.0))
    throw std::invalid_argument("delta: must be positive for a gaussian meter");
  if (cfg.trials > 0 && !cfg.seed_given)
    throw std::invalid_argument("seed: required whenever trials > 0");
}

/// Merges a config file (JSON object) into cfg; unknown keys are rejected.
inline void merge_config_json(ExperimentConfig& cfg, const ojson& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") cfg.scenario = value.get<std::string>();
    else if (key == "g") cfg.g = value.get<double>();
    else if (key == "delta") cfg.delta = value.get<double>();
    else if (key == "meter") cfg.meter_kind = value.get<std::string>();
    else if (key == "trials") cfg.trials = value.get<int>();
    else if (key == "seed") { cfg.seed = value.get<std::uint64_t>(); cfg.seed_given = true; }
    else if (key == "custom") cfg.custom = value;
    else throw std::invalid_argument("config: unknown field '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// JSON encoding: complex numbers as [re, im], matrices as row-major arrays

inline ojson to_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

inline ojson to_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (long r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline cplx complex_from_json(const ojson& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("custom: complex entries must be [re, im]");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline Vector vector_from_json(const ojson& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("custom: expected an amplitude array");
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = complex_from_json(j[i]);
  return v;
}

inline Matrix matrix_from_json(const ojson& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("custom: expected a matrix");
  long rows = static_cast<long>(j.size());
  long cols = static_cast<long>(j[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(j[r].size()) != cols)
      throw std::invalid_argument("custom: ragged matrix rows");
    for (long c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// report assembly

/// Collects check rows and tracks the worst deviation; the serialized report
/// is deterministic (insertion-ordered keys, no timing data).
class ReportBuilder {
 public:
  ReportBuilder(const ExperimentConfig& cfg) : tol_(cfg.tolerance) {
    j_["scenario"] = cfg.scenario;
    j_["status"] = "ok";
    ojson in;
    in["g"] = cfg.g;
    in["delta"] = cfg.delta;
    in["meter"] = cfg.meter_kind;
    in["trials"] = cfg.trials;
    in["seed"] = cfg.seed;
    if (!cfg.custom.is_null()) in["custom"] = cfg.custom;
    j_["inputs"] = std::move(in);
    j_["tolerance"] = tol_;
  }

  void check(const std::string& name, double expected, double actual) {
    double dev = std::abs(expected - actual);
    add_row(name, expected, actual, dev);
  }

  void check(const std::string& name, cplx expected, cplx actual) {
    double dev = std::abs(expected - actual);
    add_row(name, to_json(expected), to_json(actual), dev);
  }

  /// One-sided check: actual must not fall below `lower` by more than tol.
  void check_at_least(const std::string& name, double lower, double actual) {
    double dev = std::max(0.0, lower - actual);
    add_row(name, lower, actual, dev);
  }

  void note(const std::string& key, ojson value) { extras_[key] = std::move(value); }

  ojson& section(const std::string& key) { return extras_[key]; }

  bool all_pass() const { return all_pass_; }

  ojson finish() {
    for (auto& [k, v] : extras_.items()) j_[k] = v;
    j_["checks"] = checks_;
    j_["max_abs_deviation"] = max_dev_;
    j_["pass"] = all_pass_;
    return j_;
  }

 private:
  void add_row(const std::string& name, ojson expected, ojson actual, double dev) {
    bool ok = dev <= tol_;
    ojson row;
    row["name"] = name;
    row["expected"] = std::move(expected);
    row["actual"] = std::move(actual);
    row["deviation"] = dev;
    row["pass"] = ok;
    checks_.push_back(std::move(row));
    max_dev_ = std::max(max_dev_, dev);
    all_pass_ = all_pass_ && ok;
  }

  ojson j_ = ojson::object();
  ojson extras_ = ojson::object();
  ojson checks_ = ojson::array();
  double tol_;
  double max_dev_ = 0.0;
  bool all_pass_ = true;
};

}  // namespace erasim
