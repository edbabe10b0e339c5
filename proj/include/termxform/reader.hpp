#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termxform/operators.hpp"
#include "termxform/term.hpp"

namespace termxform {

/// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

/// One term read from source. Variables are numbered 0..var_count-1 in order
/// of first appearance; every `_` gets its own number.
struct ReadTerm {
  Term term;
  std::vector<std::pair<std::string, Term>> variables;  // named ones only
  std::size_t var_count = 0;
  int line = 0;
};

/// Reads `.`-terminated terms from text. `:- op(P,T,N)` directives update the
/// operator table as they are met and are not returned; other directives are
/// skipped.
class TermReader {
 public:
  TermReader(std::string_view text, OperatorTable& ops);

  /// Next clause term, or false at end of input.
  bool next(ReadTerm& out);

  /// Reads every remaining clause term.
  std::vector<ReadTerm> read_all();

  /// Reads one term terminated by `.` or end of input; used for queries.
  ReadTerm read_single(bool allow_missing_end);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Parses a single term (a trailing `.` is optional).
Term parse_term(std::string_view text, const OperatorTable& ops = default_operator_table());

}  // namespace termxform
