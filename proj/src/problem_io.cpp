#include "bwmean/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bwmean/errors.hpp"
#include "bwmean/json_writer.hpp"

namespace bwm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& why) {
  throw InputError(where.empty() ? why : where + ": " + why);
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "non-finite number");
  return d;
}

SpdMatrix matrix_at(const json& grid, const std::string& where) {
  if (!grid.is_array() || grid.empty()) fail(where, "expected a non-empty square grid of numbers");
  const std::size_t n = grid.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    const json& row = grid[i];
    if (!row.is_array()) fail(row_where, "expected a row array");
    if (row.size() != n)
      fail(row_where, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) entries.push_back(number_at(row[j], row_where + "[" + std::to_string(j) + "]"));
  }
  Matrix m(n, std::move(entries));
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        fail(where, "not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  try {
    return SpdMatrix(std::move(m));
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("", "top level must be an object");

  int version = kProblemSchemaVersion;
  if (doc.contains("schema_version")) {
    const json& v = doc["schema_version"];
    if (!v.is_number_integer()) fail("schema_version", "expected an integer");
    version = v.get<int>();
    if (version != kProblemSchemaVersion) fail("schema_version", "unsupported version " + std::to_string(version));
  } else {
    fail("schema_version", "missing");
  }

  if (!doc.contains("matrices") || !doc["matrices"].is_array()) fail("matrices", "missing or not an array");
  const json& mats = doc["matrices"];
  if (mats.empty()) fail("matrices", "n >= 1 required");
  std::vector<SpdMatrix> matrices;
  for (std::size_t j = 0; j < mats.size(); ++j) {
    matrices.push_back(matrix_at(mats[j], "matrices[" + std::to_string(j) + "]"));
    if (matrices.back().dim() != matrices.front().dim()) {
      fail("matrices[" + std::to_string(j) + "]", "dimension " + std::to_string(matrices.back().dim()) +
                                                      " differs from matrices[0] dimension " +
                                                      std::to_string(matrices.front().dim()));
    }
  }

  if (!doc.contains("weights") || !doc["weights"].is_array()) fail("weights", "missing or not an array");
  const json& ws = doc["weights"];
  if (ws.size() != mats.size())
    fail("weights", std::to_string(ws.size()) + " weights for " + std::to_string(mats.size()) + " matrices");
  std::vector<double> weights;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const std::string where = "weights[" + std::to_string(j) + "]";
    const double w = number_at(ws[j], where);
    if (!(w > 0.0)) fail(where, "weights must be positive");
    weights.push_back(w);
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& ls = doc["labels"];
    if (!ls.is_array() || ls.size() != mats.size()) fail("labels", "expected one string per matrix");
    for (std::size_t j = 0; j < ls.size(); ++j) {
      if (!ls[j].is_string()) fail("labels[" + std::to_string(j) + "]", "expected a string");
      labels.push_back(ls[j].get<std::string>());
    }
  }

  return {version, MeanProblem(std::move(matrices), WeightVector(std::move(weights))), std::move(labels)};
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string serialize_problem(const MeanProblem& p, const std::vector<std::string>& labels) {
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kProblemSchemaVersion);
  w.key("weights").numbers(p.weights().values());
  w.key("matrices").begin_array();
  for (const auto& m : p.matrices()) w.matrix(m.matrix());
  w.end_array();
  if (!labels.empty()) {
    w.key("labels").begin_array();
    for (const auto& l : labels) w.value(l);
    w.end_array();
  }
  w.end_object();
  return w.str();
}

}  // namespace bwm
