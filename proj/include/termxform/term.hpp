#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace termxform {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by node constructors when a name or attribute id is malformed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

enum class TermKind : std::uint8_t { Atom, Int, Float, Var, Compound };

using VarId = std::uint64_t;

namespace detail {
struct TermNode;
}

/// Immutable logic term. Copies share structure; safe to pass between threads.
class Term {
 public:
  /// The empty list atom `[]`.
  Term();

  static Term atom(std::string_view name);
  static Term integer(std::int64_t value);
  static Term real(double value);
  static Term variable(VarId id, std::string_view name = {});
  /// A compound with zero arguments collapses to an atom.
  static Term compound(std::string_view functor, std::vector<Term> args);
  static Term nil();
  static Term cons(Term head, Term tail);
  static Term list(std::span<const Term> items, Term tail = nil());
  static Term list(std::initializer_list<Term> items) {
    return list(std::span<const Term>(items.begin(), items.size()));
  }

  TermKind kind() const;
  bool is_atom() const { return kind() == TermKind::Atom; }
  bool is_int() const { return kind() == TermKind::Int; }
  bool is_float() const { return kind() == TermKind::Float; }
  bool is_number() const { return is_int() || is_float(); }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_compound() const { return kind() == TermKind::Compound; }
  bool is_atomic() const { return is_atom() || is_number(); }
  bool is_callable() const { return is_atom() || is_compound(); }
  bool is_nil() const;
  bool is_cons() const;

  /// Atom text or compound functor; empty for numbers and variables.
  const std::string& name() const;
  std::int64_t int_value() const;
  double float_value() const;
  /// Numeric value as a double (valid for Int and Float).
  double as_double() const;
  VarId var_id() const;
  /// Source name of a variable; may be empty for generated ones.
  const std::string& var_name() const;

  std::size_t arity() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }

  bool has_functor(std::string_view functor, std::size_t arity) const;

  /// Identity of the shared node; equal pointers imply equal terms.
  const void* identity() const { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

inline constexpr std::string_view kConsFunctor = ".";
inline constexpr std::string_view kNilAtom = "[]";

/// Syntactic identity, including variable ids.
bool term_equal(const Term& a, const Term& b);

/// True iff `t` is a cons chain ending in `[]`.
bool is_list(const Term& t);

/// Elements of a proper list; std::nullopt for partial or improper lists.
std::optional<std::vector<Term>> list_items(const Term& t);

bool is_ground(const Term& t);

/// Canonical text readable back by the rule reader. Atoms that need it are
/// single-quoted with quotes doubled.
std::string render_term(const Term& t);

/// Like render_term but atoms are printed bare (the `write/1` form).
std::string write_term(const Term& t);

std::string quote_atom_if_needed(std::string_view atom);

/// Shortest round-tripping text for a float, always with a decimal point.
std::string format_float(double value);

// ---------------------------------------------------------------------------
// XML node conventions on top of Term.

/// Renders one attribute entry in its single-atom surface form `id="value"`.
Term attribute_atom(std::string_view id, std::string_view value);

struct AttributeEntry {
  std::string id;
  std::string value;
};

/// Splits an `id="value"` atom. Returns std::nullopt if the text has no `="`
/// separator, does not end with `"`, or has an empty id.
std::optional<AttributeEntry> split_attribute(std::string_view text);

Term mk_element(std::string_view name,
                const std::vector<std::pair<std::string, std::string>>& attrs,
                std::vector<Term> children);
Term mk_text(std::string_view text);
Term mk_comment(std::string_view text);
Term mk_pi(std::string_view text);

bool is_element(const Term& t);
bool is_text(const Term& t);
bool is_comment(const Term& t);
bool is_pi(const Term& t);

}  // namespace termxform
