#pragma once

// Line-oriented key-value documents used for configs, schedules and reports.
//
//   # comment                   (also after a value: key = 1  # note)
//   [section]                   dotted names nest: [interval.2]
//   key = value                 the key is stored as "section.key"
//
// Keys are [A-Za-z0-9_.-]+; values run to the end of the line (or a '#') with
// surrounding whitespace trimmed. Duplicate keys are an error.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace holo {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::string_view text, std::string source = "<input>");
  static KeyValueDocument load(const std::string& path);

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view key) const;
  const std::string& source() const { return source_; }
  // Throws ParseError at the line of `key` (or line 0 when absent).
  [[noreturn]] void fail(std::string_view key, const std::string& message) const;

 private:
  std::string source_;
  std::vector<Entry> entries_;
};

// 12 significant digits, no negative zero, "inf"/"nan" spelled out.
std::string format_number(double v);

// Accumulates a document in insertion order.
class DocumentWriter {
 public:
  void comment(std::string_view text);
  void section(std::string_view name);
  void blank();
  void put(std::string_view key, std::string_view value);
  void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }
  void put(std::string_view key, double value);
  void put(std::string_view key, long long value);
  void put(std::string_view key, std::size_t value) { put(key, static_cast<long long>(value)); }
  void put(std::string_view key, int value) { put(key, static_cast<long long>(value)); }
  void put(std::string_view key, bool value) { put(key, std::string_view(value ? "true" : "false")); }
  // Copies raw text verbatim (must end with a newline or be empty).
  void raw(std::string_view text);

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

// Prefixes every line with "# ".
std::string as_comment_block(std::string_view text);

// Git blob hash: SHA-1 over "blob <len>\0<content>", lowercase hex.
std::string git_blob_hash(std::string_view content);

void write_file(const std::string& path, std::string_view content);

}  // namespace holo
