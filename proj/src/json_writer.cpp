#include "bwmean/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bwm {

std::string format_number(double v, int digits) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void JsonWriter::newline() {
  out_.push_back('\n');
  out_.append(2 * stack_.size(), ' ');
}

void JsonWriter::before_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (stack_.empty()) return;
  if (stack_.back().is_object) throw std::logic_error("JsonWriter: value inside object needs a key");
  if (!stack_.back().empty) out_.push_back(',');
  stack_.back().empty = false;
  newline();
}

JsonWriter& JsonWriter::begin_object() {
  before_value();
  raw("{");
  stack_.push_back({true});
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool empty = stack_.back().empty;
  stack_.pop_back();
  if (!empty) newline();
  raw("}");
  if (stack_.empty()) out_.push_back('\n');
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  before_value();
  raw("[");
  stack_.push_back({false});
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool empty = stack_.back().empty;
  stack_.pop_back();
  if (!empty) newline();
  raw("]");
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  if (stack_.empty() || !stack_.back().is_object || after_key_)
    throw std::logic_error("JsonWriter: key outside an object");
  auto& top = stack_.back();
  if (!top.empty) out_.push_back(',');
  top.empty = false;
  newline();
  write_string(k);
  raw(": ");
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  before_value();
  raw(format_number(v, digits_));
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  before_value();
  raw(std::to_string(v));
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  before_value();
  raw(std::to_string(v));
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  before_value();
  raw(v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  before_value();
  write_string(v);
  return *this;
}

void JsonWriter::write_string(std::string_view v) {
  out_.push_back('"');
  for (char c : v) {
    switch (c) {
      case '"': raw("\\\""); break;
      case '\\': raw("\\\\"); break;
      case '\n': raw("\\n"); break;
      case '\t': raw("\\t"); break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          raw(buf);
        } else {
          out_.push_back(c);
        }
    }
  }
  out_.push_back('"');
}

JsonWriter& JsonWriter::null() {
  before_value();
  raw("null");
  return *this;
}

JsonWriter& JsonWriter::numbers(const std::vector<double>& v) {
  before_value();
  raw("[");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) raw(", ");
    raw(format_number(v[k], digits_));
  }
  raw("]");
  return *this;
}

JsonWriter& JsonWriter::matrix(const Matrix& m) {
  begin_array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    std::vector<double> row(m.dim());
    for (std::size_t j = 0; j < m.dim(); ++j) row[j] = m(i, j);
    numbers(row);
  }
  return end_array();
}

}  // namespace bwm
