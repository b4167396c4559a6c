#include "psq/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "psq/common.hpp"

namespace psq::report {

const char* format_name(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
  }
  return "?";
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw std::invalid_argument("unknown format: " + name);
}

std::string json_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

std::string csv_cell(double v) {
  if (!std::isfinite(v)) return "";
  return format_double(v);
}

// ---- JsonWriter -------------------------------------------------------------

JsonWriter::JsonWriter() {
  out_ = "{";
  scopes_.push_back(true);
  counts_.push_back(0);
}

void JsonWriter::item_prefix() {
  if (finished_) throw std::logic_error("json writer already finished");
  if (counts_.back() > 0) out_ += ',';
  ++counts_.back();
  out_ += '\n';
  out_.append(2 * scopes_.size(), ' ');
}

void JsonWriter::key_prefix(const std::string& key) {
  if (scopes_.empty() || !scopes_.back())
    throw std::logic_error("json key outside an object scope");
  item_prefix();
  out_ += json_string(key);
  out_ += ": ";
}

void JsonWriter::field(const std::string& key, double v) {
  key_prefix(key);
  out_ += json_number(v);
}

void JsonWriter::field(const std::string& key, std::uint64_t v) {
  key_prefix(key);
  out_ += std::to_string(v);
}

void JsonWriter::field(const std::string& key, std::int64_t v) {
  key_prefix(key);
  out_ += std::to_string(v);
}

void JsonWriter::field(const std::string& key, int v) {
  field(key, static_cast<std::int64_t>(v));
}

void JsonWriter::field(const std::string& key, bool v) {
  key_prefix(key);
  out_ += v ? "true" : "false";
}

void JsonWriter::field(const std::string& key, const std::string& v) {
  key_prefix(key);
  out_ += json_string(v);
}

void JsonWriter::field(const std::string& key, const char* v) {
  field(key, std::string(v));
}

void JsonWriter::begin_object(const std::string& key) {
  key_prefix(key);
  out_ += '{';
  scopes_.push_back(true);
  counts_.push_back(0);
}

void JsonWriter::begin_array(const std::string& key) {
  key_prefix(key);
  out_ += '[';
  scopes_.push_back(false);
  counts_.push_back(0);
}

void JsonWriter::begin_record() {
  if (scopes_.empty() || scopes_.back())
    throw std::logic_error("json record outside an array scope");
  item_prefix();
  out_ += '{';
  scopes_.push_back(true);
  counts_.push_back(0);
}

void JsonWriter::push(double v) {
  if (scopes_.empty() || scopes_.back())
    throw std::logic_error("json push outside an array scope");
  item_prefix();
  out_ += json_number(v);
}

void JsonWriter::push(std::uint64_t v) {
  if (scopes_.empty() || scopes_.back())
    throw std::logic_error("json push outside an array scope");
  item_prefix();
  out_ += std::to_string(v);
}

void JsonWriter::end() {
  if (finished_ || scopes_.size() <= 1)
    throw std::logic_error("json end without an open scope");
  const bool object = scopes_.back();
  const bool empty = counts_.back() == 0;
  scopes_.pop_back();
  counts_.pop_back();
  if (!empty) {
    out_ += '\n';
    out_.append(2 * scopes_.size(), ' ');
  }
  out_ += object ? '}' : ']';
}

std::string JsonWriter::finish() {
  while (scopes_.size() > 1) end();
  if (counts_.back() > 0) out_ += '\n';
  out_ += "}\n";
  finished_ = true;
  return std::move(out_);
}

// ---- CsvWriter --------------------------------------------------------------

void CsvWriter::comment(const std::string& key, const std::string& value) {
  if (columns_set_) throw std::logic_error("csv comment after columns");
  head_ += "# " + key + " = " + value + "\n";
}

void CsvWriter::comment(const std::string& key, double value) {
  comment(key, csv_cell(value));
}

void CsvWriter::comment(const std::string& key, std::uint64_t value) {
  comment(key, std::to_string(value));
}

void CsvWriter::comment(const std::string& key, std::int64_t value) {
  comment(key, std::to_string(value));
}

void CsvWriter::comment(const std::string& key, int value) {
  comment(key, std::to_string(value));
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  if (columns_set_) throw std::logic_error("csv columns set twice");
  if (names.empty()) throw std::logic_error("csv needs at least one column");
  columns_set_ = true;
  n_columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) body_ += ',';
    body_ += names[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (!columns_set_) throw std::logic_error("csv row before columns");
  if (cells.size() != n_columns_)
    throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvWriter::finish() {
  if (!columns_set_) throw std::logic_error("csv finished without columns");
  return head_ + body_;
}

}  // namespace psq::report
