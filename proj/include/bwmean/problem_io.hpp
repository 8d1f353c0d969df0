#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bwmean/barycenter.hpp"

namespace bwm {

inline constexpr int kProblemSchemaVersion = 1;

/// On-disk problem description:
///
///   {
///     "schema_version": 1,
///     "weights": [0.5, 0.5],
///     "matrices": [[[1, 2], [2, 5]], [[4, 4], [4, 5]]],
///     "labels": ["A", "B"]          // optional
///   }
struct ProblemFile {
  int schema_version = kProblemSchemaVersion;
  MeanProblem problem;
  std::vector<std::string> labels;
};

/// Throws InputError naming the offending field and index.
ProblemFile parse_problem(std::string_view text);
ProblemFile read_problem_file(const std::string& path);

/// Full-precision (17 significant digit) text form.
std::string serialize_problem(const MeanProblem& p, const std::vector<std::string>& labels = {});

}  // namespace bwm
