#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termxform/bindings.hpp"
#include "termxform/program.hpp"
#include "termxform/term.hpp"

namespace termxform {

/// Raised when a query exceeds its resolution-step budget. Distinct from
/// ordinary failure.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Raised by arithmetic and functor evaluation, and by builtins given
/// arguments of the wrong type.
class EvalError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultStepLimit = 1'000'000;

struct SolverOptions {
  bool occurs_check = false;
  /// Resolution steps allowed per top-level query; nullopt uses the default.
  std::optional<std::uint64_t> depth_limit;
  /// Writes each called goal to the diagnostic sink.
  bool trace = false;
  /// What the in-rule traverse/2 does with text nodes no template matched.
  bool copy_unmatched_text = false;
};

using DiagnosticSink = std::function<void(std::string_view)>;

class Solver;

namespace detail {
class Machine;
}

/// Lazily enumerated answers of one query. Bindings made by the query are
/// undone when the stream is destroyed.
class SolutionStream {
 public:
  SolutionStream(SolutionStream&&) noexcept;
  SolutionStream& operator=(SolutionStream&&) noexcept;
  ~SolutionStream();

  /// Advances to the next answer; false once exhausted.
  bool next();

  /// `t` with the current answer's bindings substituted.
  Term resolve(const Term& t) const;

  /// Named query variables with their current values.
  std::vector<std::pair<std::string, Term>> answer() const;

  const Term& goal() const { return goal_; }
  std::uint64_t steps() const;

 private:
  friend class Solver;
  SolutionStream(Solver& solver, Term goal, std::vector<std::pair<std::string, Term>> vars);

  Solver* solver_;
  Term goal_;
  std::vector<std::pair<std::string, Term>> vars_;
  std::unique_ptr<detail::Machine> machine_;
  Bindings::Mark start_{};
};

class Solver {
 public:
  explicit Solver(const Program& program, SolverOptions options = {});

  /// Solves a goal whose variables already live in bindings().
  SolutionStream solve(const Term& goal);

  /// Solves a freshly read query: its variables (numbered from 0) are renamed
  /// into this solver first.
  SolutionStream query(const Term& goal, const std::vector<std::pair<std::string, Term>>& vars,
                       std::size_t var_count);

  /// Parses and solves query text against this solver's operators.
  SolutionStream query(std::string_view text);

  Bindings& bindings() { return bindings_; }
  const Bindings& bindings() const { return bindings_; }
  const Program& program() const { return *program_; }
  const SolverOptions& options() const { return options_; }

  void set_diagnostic_sink(DiagnosticSink sink) { sink_ = std::move(sink); }
  void diagnostic(std::string_view message) const;

  /// Warns once per unknown predicate.
  void warn_unknown(const std::string& name, std::size_t arity);

  std::uint64_t step_limit() const { return options_.depth_limit.value_or(kDefaultStepLimit); }

 private:
  const Program* program_;
  SolverOptions options_;
  Bindings bindings_;
  DiagnosticSink sink_;
  std::set<std::pair<std::string, std::size_t>> warned_;
};

/// All solutions of `goal` as resolved instances of `templ`.
std::vector<Term> find_all(Solver& solver, const Term& templ, const Term& goal);

/// Evaluates the right-hand side of `is/2`.
Term eval_is(const Term& expr, const Bindings& bindings);

/// Names of every builtin predicate, as name/arity.
std::vector<std::pair<std::string, std::size_t>> builtin_predicates();
bool is_builtin(std::string_view name, std::size_t arity);

}  // namespace termxform
