#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termxform/term.hpp"

namespace termxform {

/// Counts that do not yield meaningful metrics: no operators and operands,
/// a zero-length program, or a vocabulary of one.
class MetricsError : public Error {
 public:
  using Error::Error;
};

struct HalsteadCounts {
  std::int64_t eta1 = 0;  ///< distinct operators
  std::int64_t eta2 = 0;  ///< distinct operands
  std::int64_t n1 = 0;    ///< operator occurrences
  std::int64_t n2 = 0;    ///< operand occurrences
  std::int64_t loc = 0;
  std::int64_t bytes = 0;
};

struct HalsteadReport {
  HalsteadCounts counts;
  std::int64_t length = 0;      ///< N = N1 + N2
  std::int64_t vocabulary = 0;  ///< eta = eta1 + eta2
  double volume = 0;            ///< V = N log2 eta
  double estimated_length = 0;  ///< N_T
  double length_deviation = 0;  ///< Delta_N in percent
  double level = 0;             ///< L = V*/V with V* = 8
  double lambda = 0;            ///< V* L
  double bugs = 0;              ///< B = V/300
  std::optional<double> ratio;  ///< N1/N2, absent when N2 = 0
};

/// Volume of the ideal two-operator, two-operand program.
inline constexpr double kIdealVolume = 8.0;

HalsteadReport halstead(const HalsteadCounts& counts);

/// How tokens of a rule program are classified. Read from key=value lines:
///   functor_as = operator | operand   (functors of compound terms)
///   head_as    = operand | operator   (clause head names)
///   var_scope  = clause | program     (when two variables count as the same operand)
struct ClassifierConfig {
  bool functor_is_operator = true;
  bool head_is_operand = true;
  bool vars_per_clause = true;

  static ClassifierConfig parse(std::string_view text);
};

/// Token-level counts for a rule program.
///
/// Operators: the clause terminator `.`, parentheses and commas of
/// functional notation, list brackets and `|`, and every functor of a
/// compound term. An operator functor written infix or prefix counts once,
/// without parentheses. Goal atoms such as `!` or `nl` count as operators.
/// Operands: clause head names, atoms and numbers in argument positions,
/// and variables. Each anonymous `_` is a distinct operand.
/// LOC counts lines that hold something besides layout and comments.
HalsteadCounts tokenize_classify(std::string_view source, const ClassifierConfig& config = {});

/// CSV with the header
/// `label,LOC,Bytes,eta1,eta2,N1,N2,N1/N2,N_T,Delta_N,lambda,B`.
std::string report_csv(const std::vector<std::pair<std::string, HalsteadReport>>& reports);

/// Multi-line human-readable rendering.
std::string format_report(const HalsteadReport& report);

}  // namespace termxform
