#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bwm {

enum class SuiteKind { kMetric, kGeomean, kFixedPoint, kTwoPoint, kBounds, kDet, kInvariance, kLieTrotter };

std::string_view suite_name(SuiteKind k) noexcept;
const std::vector<SuiteKind>& all_suites();

/// "all", a single suite name, or a comma-separated list. Throws InputError.
std::vector<SuiteKind> parse_suite_selector(std::string_view selector);

struct IntRange {
  int lo;
  int hi;
};

/// Seeded description of a random ensemble. The same spec always yields the
/// same instances, bit for bit.
struct EnsembleSpec {
  std::uint64_t seed = 42;
  int count = 200;
  IntRange n_range{1, 5};
  IntRange dim_range{2, 8};
  double condition_max = 100.0;

  /// Throws InputError on empty ranges, count < 0 or condition_max < 1.
  void validate() const;
};

struct CheckRecord {
  std::string check_id;
  std::size_t instance_index = 0;
  std::uint64_t instance_seed = 0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> witness;
  std::string note;  // exception text when the check could not be evaluated
};

struct SuiteReport {
  EnsembleSpec spec;
  std::vector<SuiteKind> suites;
  std::vector<CheckRecord> records;

  std::size_t total() const noexcept { return records.size(); }
  std::size_t passed() const noexcept;
  std::size_t failed() const noexcept { return total() - passed(); }
  bool all_passed() const noexcept { return failed() == 0; }

  /// One JSON document; witnesses at 17 significant digits.
  std::string to_json(bool failures_only = false) const;
  /// One line per suite with pass counts, 6 significant digits.
  std::string summary_text() const;
};

/// Runs every selected suite on every instance. Per-check failures, including
/// exceptions thrown while evaluating a check, are recorded rather than thrown.
SuiteReport run_suite(const EnsembleSpec& spec, const std::vector<SuiteKind>& suites);

/// Re-runs one suite on a single instance, identified by its seed.
std::vector<CheckRecord> run_instance(SuiteKind suite, const EnsembleSpec& spec, std::uint64_t instance_seed,
                                      std::size_t instance_index = 0);

}  // namespace bwm
