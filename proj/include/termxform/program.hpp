#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termxform/operators.hpp"
#include "termxform/reader.hpp"
#include "termxform/term.hpp"

namespace termxform {

/// Summary of a clause head's first argument, used to skip clauses that
/// cannot match before renaming them.
struct ArgKey {
  enum class Kind : std::uint8_t { Any, Atom, Int, Float, Functor };
  Kind kind = Kind::Any;
  std::string name;
  std::size_t arity = 0;
  std::int64_t ival = 0;
  double fval = 0.0;

  static ArgKey of(const Term& t);
  /// False only if no instance of the two terms can unify.
  bool compatible(const ArgKey& other) const;
};

struct Clause {
  Term head;
  std::vector<Term> body;
  /// Clause variables are numbered 0..var_count-1.
  std::size_t var_count = 0;
  int line = 0;
  ArgKey first_arg;
};

/// Ordered clause store keyed by functor/arity, plus the operator table that
/// governs reading further source into it.
class Program {
 public:
  Program();

  using Key = std::pair<std::string, std::size_t>;

  /// Appends a read clause term (`H :- B` or a fact) after existing clauses
  /// of the same predicate.
  void add_clause(const ReadTerm& rt);
  /// Appends an already built clause.
  void add(Clause c);

  /// Reads `text` and appends every clause; op directives update operators().
  void consult(std::string_view text);

  const std::vector<Clause>* clauses(std::string_view name, std::size_t arity) const;
  bool defines(std::string_view name, std::size_t arity) const;

  /// Marks a predicate as known even without clauses, so calls to it fail
  /// silently instead of warning.
  void declare(std::string_view name, std::size_t arity);
  bool is_declared(std::string_view name, std::size_t arity) const;
  const std::set<Key, std::less<>>& declared() const { return declared_; }

  /// Predicates in order of first definition.
  const std::vector<Key>& predicates() const { return order_; }
  std::size_t clause_count() const;

  OperatorTable& operators() { return ops_; }
  const OperatorTable& operators() const { return ops_; }

 private:
  std::map<Key, std::vector<Clause>, std::less<>> procs_;
  std::vector<Key> order_;
  std::set<Key, std::less<>> declared_;
  OperatorTable ops_;
};

/// Reads a rule program (without prelude) using the default operator table.
Program parse_program(std::string_view text);

/// Reads a query goal; a leading `?-` and the final `.` are optional.
/// `variables` receives the named query variables in order of appearance.
Term parse_query(std::string_view text, const OperatorTable& ops,
                 std::vector<std::pair<std::string, Term>>* variables = nullptr,
                 std::size_t* var_count = nullptr);

/// Splits a `,`-conjunction into its goals.
std::vector<Term> flatten_conjunction(const Term& body);

}  // namespace termxform
