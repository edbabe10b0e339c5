#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "termxform/term.hpp"

namespace termxform {

/// XML syntax error with a 1-based source position.
class XmlParseError : public Error {
 public:
  XmlParseError(std::string origin, int line, int column, std::string expected, std::string found);

  const std::string& origin() const { return origin_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string origin_;
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

/// A term that is not a serializable node tree. `path` holds child indexes
/// (0-based) from the root to the offending subterm.
class ValidationError : public Error {
 public:
  ValidationError(std::vector<std::size_t> path, std::string message);

  const std::vector<std::size_t>& path() const { return path_; }
  const std::string& message() const { return message_; }
  std::string path_string() const;

 private:
  std::vector<std::size_t> path_;
  std::string message_;
};

struct XmlReadOptions {
  /// Keep text nodes that consist only of whitespace.
  bool keep_whitespace = false;
};

struct XmlWriteOptions {
  /// Two-space indentation. Elements with text children stay on one line.
  bool pretty = false;
};

struct SourceDocument {
  std::string text;
  std::string origin = "<memory>";
};

Term parse_document(const SourceDocument& src, const XmlReadOptions& opts = {});
Term parse_document(std::string_view text, const XmlReadOptions& opts = {});
SourceDocument read_source(const std::string& path);

/// First problem preventing serialization, or nullopt.
std::optional<ValidationError> check_serializable(const Term& t);

/// Serializes a node term. Throws ValidationError if check_serializable fails.
std::string serialize_document(const Term& t, const XmlWriteOptions& opts = {});

/// Serializes a sequence of nodes back to back (a fragment, no single root).
std::string serialize_fragment(const std::vector<Term>& nodes, const XmlWriteOptions& opts = {});

std::string escape_text(std::string_view s);
std::string escape_attribute(std::string_view s);
/// Decodes the five predefined entities; throws Error on any other `&`.
std::string unescape(std::string_view s);

/// Path of the first position where two node terms differ, or nullopt if
/// they are identical.
std::optional<std::vector<std::size_t>> first_difference(const Term& a, const Term& b);

}  // namespace termxform
