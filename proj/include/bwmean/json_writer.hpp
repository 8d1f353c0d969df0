#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bwmean/matrix.hpp"

namespace bwm {

/// Formats a double with the given number of significant digits; non-finite
/// values become null.
std::string format_number(double v, int digits = 17);

/// Minimal streaming JSON emitter with fixed two-space indentation. Numbers are
/// written with a fixed significant-digit count so reports are byte-stable.
class JsonWriter {
 public:
  explicit JsonWriter(int digits = 17) : digits_(digits) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();

  /// Row-major grid, one row per line.
  JsonWriter& matrix(const Matrix& m);
  JsonWriter& numbers(const std::vector<double>& v);

  const std::string& str() const noexcept { return out_; }

 private:
  void before_value();
  void newline();
  void raw(std::string_view s) { out_.append(s); }
  void write_string(std::string_view v);

  struct Frame {
    bool is_object;
    bool empty = true;
  };
  std::string out_;
  std::vector<Frame> stack_;
  bool after_key_ = false;
  int digits_;
};

}  // namespace bwm
