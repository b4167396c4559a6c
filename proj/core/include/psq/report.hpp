#pragma once
// Deterministic report serialization.  Reports must be byte-identical across
// reruns with the same parameters, so this is a small in-repo writer with a
// pinned contract instead of a third-party serializer:
//   - JSON: insertion-ordered keys, two-space indent, doubles at 17
//     significant digits, NaN/inf rendered as null.
//   - CSV: '#'-prefixed "key = value" header lines, then a column row, then
//     data rows; '.' decimal point always; NaN renders as an empty cell.

#include <cstdint>
#include <string>
#include <vector>

namespace psq::report {

enum class Format { json, csv };

const char* format_name(Format f);
Format parse_format(const std::string& name);

// JSON fragments for one value (no surrounding whitespace).
std::string json_string(const std::string& s);  // quoted + escaped
std::string json_number(double v);              // null when not finite

// CSV cell for one value ('.' decimal point, empty when not finite).
std::string csv_cell(double v);

// Streaming JSON document writer.  The document is one top-level object;
// begin/end pairs nest objects and arrays, and fields appear exactly in
// insertion order.  Keys are the caller's responsibility (ASCII, unique
// within their object).
class JsonWriter {
 public:
  JsonWriter();

  void field(const std::string& key, double v);
  void field(const std::string& key, std::uint64_t v);
  void field(const std::string& key, std::int64_t v);
  void field(const std::string& key, int v);
  void field(const std::string& key, bool v);
  void field(const std::string& key, const std::string& v);
  void field(const std::string& key, const char* v);

  void begin_object(const std::string& key);
  void begin_array(const std::string& key);
  void begin_record();  // object element inside the open array
  void push(double v);  // scalar element inside the open array
  void push(std::uint64_t v);
  void end();  // closes the innermost object/array

  // Closes every open scope and returns the document (ends with '\n').
  // The writer is spent afterwards.
  std::string finish();

 private:
  void item_prefix();
  void key_prefix(const std::string& key);

  std::string out_;
  // true = object scope (needs keys), false = array scope (bare items)
  std::vector<bool> scopes_;
  std::vector<int> counts_;
  bool finished_ = false;
};

// CSV writer: comment header block, one column-name row, data rows.
class CsvWriter {
 public:
  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value);
  void comment(const std::string& key, std::uint64_t value);
  void comment(const std::string& key, std::int64_t value);
  void comment(const std::string& key, int value);

  void columns(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);

  std::string finish();

 private:
  std::string head_;
  std::string body_;
  std::size_t n_columns_ = 0;
  bool columns_set_ = false;
};

}  // namespace psq::report
