#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "machine.hpp"
#include "termxform/prelude.hpp"
#include "termxform/xml.hpp"
#include "text_util.hpp"

namespace termxform {

namespace detail {

namespace {

Term deref(Machine& m, const Term& t) { return m.bindings().deref(t); }

// ---------------------------------------------------------------------------
// Standard order of terms: variables < numbers < atoms < compounds.

int type_rank(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return 0;
    case TermKind::Int:
    case TermKind::Float: return 1;
    case TermKind::Atom: return 3;
    case TermKind::Compound: return 4;
  }
  return 5;
}

int compare_terms(const Bindings& b, const Term& x0, const Term& y0) {
  const Term x = b.deref(x0);
  const Term y = b.deref(y0);
  const int rx = type_rank(x);
  const int ry = type_rank(y);
  if (rx != ry) return rx < ry ? -1 : 1;
  switch (x.kind()) {
    case TermKind::Var:
      return x.var_id() == y.var_id() ? 0 : (x.var_id() < y.var_id() ? -1 : 1);
    case TermKind::Int:
    case TermKind::Float: {
      const double a = x.as_double();
      const double c = y.as_double();
      if (a != c) return a < c ? -1 : 1;
      if (x.kind() != y.kind()) return x.is_float() ? -1 : 1;
      if (x.is_int() && x.int_value() != y.int_value()) return x.int_value() < y.int_value() ? -1 : 1;
      return 0;
    }
    case TermKind::Atom: {
      const int c = x.name().compare(y.name());
      return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case TermKind::Compound: {
      if (x.arity() != y.arity()) return x.arity() < y.arity() ? -1 : 1;
      if (const int c = x.name().compare(y.name()); c != 0) return c < 0 ? -1 : 1;
      for (std::size_t i = 0; i < x.arity(); ++i) {
        if (const int c = compare_terms(b, x.arg(i), y.arg(i)); c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

// Proper list items after dereferencing each spine cell; nullopt if partial
// or improper. `tail` receives the final non-cons cell.
std::optional<std::vector<Term>> walk_list(Machine& m, const Term& t, Term* tail = nullptr) {
  std::vector<Term> items;
  Term cur = deref(m, t);
  while (cur.is_cons()) {
    items.push_back(cur.arg(0));
    cur = deref(m, cur.arg(1));
  }
  if (tail != nullptr) *tail = cur;
  if (!cur.is_nil()) return std::nullopt;
  return items;
}

std::optional<std::vector<Term>> prefix_items(Machine& m, const Term& t, Term& tail) {
  std::vector<Term> items;
  Term cur = deref(m, t);
  while (cur.is_cons()) {
    items.push_back(cur.arg(0));
    cur = deref(m, cur.arg(1));
  }
  tail = cur;
  return items;
}

std::string text_of(Machine& m, const Term& t0) {
  const Term t = deref(m, t0);
  if (t.is_var()) throw InstantiationError("instantiation error: text argument unbound");
  if (t.is_atomic()) return atomic_text(t);
  const Term r = m.bindings().resolve(t);
  if (is_text(r) || is_element(r)) return node_text(r);
  throw EvalError("type error: text expected, got " + render_term(r));
}

Term codes_list(std::string_view s) {
  std::vector<Term> codes;
  for (char32_t c : decode_utf8(s)) codes.push_back(Term::integer(static_cast<std::int64_t>(c)));
  return Term::list(codes);
}

Term chars_list(std::string_view s) {
  std::vector<Term> chars;
  for (char32_t c : decode_utf8(s)) chars.push_back(Term::atom(encode_code_point(c)));
  return Term::list(chars);
}

// Text spelled by a list of codes or one-char atoms; nullopt if not fully bound.
std::optional<std::string> list_text(Machine& m, const Term& l, bool codes) {
  auto items = walk_list(m, l);
  if (!items) return std::nullopt;
  std::u32string s;
  for (const auto& i0 : *items) {
    const Term i = deref(m, i0);
    if (codes) {
      if (!i.is_int() || i.int_value() < 0 || i.int_value() > 0x10FFFF) {
        if (i.is_var()) return std::nullopt;
        throw EvalError("type error: character code expected, got " + render_term(i));
      }
      s.push_back(static_cast<char32_t>(i.int_value()));
    } else {
      if (!i.is_atom()) {
        if (i.is_var()) return std::nullopt;
        throw EvalError("type error: character expected, got " + render_term(i));
      }
      auto cs = decode_utf8(i.name());
      if (cs.size() != 1) throw EvalError("type error: character expected, got " + render_term(i));
      s += cs;
    }
  }
  return encode_utf8(s);
}

// ---------------------------------------------------------------------------
// Type checks.

bool b_var(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_var(); }
bool b_nonvar(Machine& m, std::span<const Term> a) { return !deref(m, a[0]).is_var(); }
bool b_atom(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_atom(); }
bool b_number(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_number(); }
bool b_integer(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_int(); }
bool b_float(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_float(); }
bool b_compound(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_compound(); }
bool b_atomic(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_atomic(); }
bool b_callable(Machine& m, std::span<const Term> a) { return deref(m, a[0]).is_callable(); }
bool b_is_list(Machine& m, std::span<const Term> a) { return walk_list(m, a[0]).has_value(); }
bool b_ground(Machine& m, std::span<const Term> a) { return is_ground(m.bindings().resolve(a[0])); }

// ---------------------------------------------------------------------------
// Unification and comparison.

bool b_unify(Machine& m, std::span<const Term> a) { return m.unify(a[0], a[1]); }

bool b_not_unify(Machine& m, std::span<const Term> a) {
  const auto mark = m.bindings().mark();
  const bool ok = m.unify(a[0], a[1]);
  m.bindings().undo_to(mark);
  return !ok;
}

bool b_unify_oc(Machine& m, std::span<const Term> a) {
  return termxform::unify(a[0], a[1], m.bindings(), true);
}

bool b_identical(Machine& m, std::span<const Term> a) { return compare_terms(m.bindings(), a[0], a[1]) == 0; }
bool b_not_identical(Machine& m, std::span<const Term> a) { return !b_identical(m, a); }
bool b_term_lt(Machine& m, std::span<const Term> a) { return compare_terms(m.bindings(), a[0], a[1]) < 0; }
bool b_term_gt(Machine& m, std::span<const Term> a) { return compare_terms(m.bindings(), a[0], a[1]) > 0; }
bool b_term_le(Machine& m, std::span<const Term> a) { return compare_terms(m.bindings(), a[0], a[1]) <= 0; }
bool b_term_ge(Machine& m, std::span<const Term> a) { return compare_terms(m.bindings(), a[0], a[1]) >= 0; }

bool b_compare(Machine& m, std::span<const Term> a) {
  const int c = compare_terms(m.bindings(), a[1], a[2]);
  return m.unify(a[0], Term::atom(c < 0 ? "<" : (c > 0 ? ">" : "=")));
}

std::optional<int> numeric_compare(Machine& m, std::span<const Term> a) {
  try {
    const Term x = eval_is(a[0], m.bindings());
    const Term y = eval_is(a[1], m.bindings());
    if (!x.is_number() || !y.is_number()) {
      throw EvalError("type error: comparison needs numbers, got " + render_term(x) + " and " +
                      render_term(y));
    }
    if (x.is_int() && y.is_int()) {
      return x.int_value() < y.int_value() ? -1 : (x.int_value() > y.int_value() ? 1 : 0);
    }
    const double dx = x.as_double();
    const double dy = y.as_double();
    return dx < dy ? -1 : (dx > dy ? 1 : 0);
  } catch (const InstantiationError&) {
    return std::nullopt;
  }
}

bool b_lt(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c < 0; }
bool b_gt(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c > 0; }
bool b_le(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c <= 0; }
bool b_ge(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c >= 0; }
bool b_num_eq(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c == 0; }
bool b_num_ne(Machine& m, std::span<const Term> a) { auto c = numeric_compare(m, a); return c && *c != 0; }

bool b_is(Machine& m, std::span<const Term> a) {
  try {
    return m.unify(a[0], eval_is(a[1], m.bindings()));
  } catch (const InstantiationError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Lists.

bool b_length(Machine& m, std::span<const Term> a) {
  Term tail;
  auto prefix = prefix_items(m, a[0], tail);
  const Term n = deref(m, a[1]);
  if (!n.is_var() && !n.is_int()) throw EvalError("type error: length/2 expects an integer");
  if (tail.is_nil()) return m.unify(n, Term::integer(static_cast<std::int64_t>(prefix->size())));
  if (!tail.is_var()) return false;
  const std::size_t known = prefix->size();
  if (n.is_int()) {
    if (n.int_value() < static_cast<std::int64_t>(known)) return false;
    std::vector<Term> fresh;
    for (std::int64_t i = static_cast<std::int64_t>(known); i < n.int_value(); ++i) {
      fresh.push_back(m.bindings().fresh());
    }
    return m.unify(tail, Term::list(fresh));
  }
  // Both open: enumerate lengths upwards.
  auto k = std::make_shared<std::size_t>(known);
  Bindings* b = &m.bindings();
  const Term target = Term::compound("-", {tail, n});
  return m.generate(target, [k, known, b]() -> std::optional<Term> {
    std::vector<Term> fresh;
    for (std::size_t i = known; i < *k; ++i) fresh.push_back(b->fresh());
    Term t = Term::compound("-", {Term::list(fresh), Term::integer(static_cast<std::int64_t>(*k))});
    ++*k;
    return t;
  });
}

bool b_reverse(Machine& m, std::span<const Term> a) {
  if (auto items = walk_list(m, a[0])) {
    std::reverse(items->begin(), items->end());
    return m.unify(a[1], Term::list(*items));
  }
  if (auto items = walk_list(m, a[1])) {
    std::reverse(items->begin(), items->end());
    return m.unify(a[0], Term::list(*items));
  }
  return false;
}

// delete(Elem, List, Rest): Rest is List without every element that unifies
// with Elem. The test leaves no bindings behind.
bool b_delete(Machine& m, std::span<const Term> a) {
  auto items = walk_list(m, a[1]);
  if (!items) return false;
  std::vector<Term> kept;
  for (const auto& item : *items) {
    const auto mark = m.bindings().mark();
    const bool match = m.unify(a[0], item);
    m.bindings().undo_to(mark);
    if (!match) kept.push_back(item);
  }
  return m.unify(a[2], Term::list(kept));
}

bool b_msort(Machine& m, std::span<const Term> a) {
  auto items = walk_list(m, a[0]);
  if (!items) throw InstantiationError("instantiation error: msort/2");
  const Bindings& b = m.bindings();
  std::stable_sort(items->begin(), items->end(),
                   [&](const Term& x, const Term& y) { return compare_terms(b, x, y) < 0; });
  return m.unify(a[1], Term::list(*items));
}

bool b_between(Machine& m, std::span<const Term> a) {
  const Term lo = deref(m, a[0]);
  const Term hi = deref(m, a[1]);
  const Term x = deref(m, a[2]);
  if (!lo.is_int() || !(hi.is_int() || (hi.is_atom() && hi.name() == "inf"))) {
    throw EvalError("type error: between/3 expects integer bounds");
  }
  const std::int64_t top = hi.is_int() ? hi.int_value() : INT64_MAX;
  if (x.is_int()) return x.int_value() >= lo.int_value() && x.int_value() <= top;
  if (!x.is_var()) throw EvalError("type error: between/3 expects an integer");
  auto cur = std::make_shared<std::int64_t>(lo.int_value());
  return m.generate(x, [cur, top]() -> std::optional<Term> {
    if (*cur > top) return std::nullopt;
    return Term::integer((*cur)++);
  });
}

// ---------------------------------------------------------------------------
// Atoms and text.

bool b_atom_codes(Machine& m, std::span<const Term> a) {
  const Term x = deref(m, a[0]);
  if (x.is_atomic()) return m.unify(a[1], codes_list(atomic_text(x)));
  if (!x.is_var()) throw EvalError("type error: atom_codes/2 expects an atom");
  auto s = list_text(m, a[1], true);
  if (!s) throw InstantiationError("instantiation error: atom_codes/2");
  return m.unify(x, Term::atom(*s));
}

bool b_atom_chars(Machine& m, std::span<const Term> a) {
  const Term x = deref(m, a[0]);
  if (x.is_atomic()) return m.unify(a[1], chars_list(atomic_text(x)));
  if (!x.is_var()) throw EvalError("type error: atom_chars/2 expects an atom");
  auto s = list_text(m, a[1], false);
  if (!s) throw InstantiationError("instantiation error: atom_chars/2");
  return m.unify(x, Term::atom(*s));
}

bool b_number_codes(Machine& m, std::span<const Term> a) {
  const Term x = deref(m, a[0]);
  if (x.is_number()) return m.unify(a[1], codes_list(atomic_text(x)));
  auto s = list_text(m, a[1], true);
  if (!s) throw InstantiationError("instantiation error: number_codes/2");
  auto n = parse_number(*s);
  if (!n) throw EvalError("syntax error: not a number: " + *s);
  return m.unify(x, *n);
}

bool b_atom_length(Machine& m, std::span<const Term> a) {
  const Term x = deref(m, a[0]);
  if (!x.is_atomic()) throw InstantiationError("instantiation error: atom_length/2");
  return m.unify(a[1], Term::integer(static_cast<std::int64_t>(decode_utf8(atomic_text(x)).size())));
}

bool b_atom_number(Machine& m, std::span<const Term> a) {
  const Term x = deref(m, a[0]);
  if (x.is_atom()) {
    auto n = parse_number(x.name());
    return n && m.unify(a[1], *n);
  }
  const Term n = deref(m, a[1]);
  if (x.is_var() && n.is_number()) return m.unify(x, Term::atom(atomic_text(n)));
  return false;
}

bool b_char_code(Machine& m, std::span<const Term> a) {
  const Term c = deref(m, a[0]);
  if (c.is_atom()) {
    auto cs = decode_utf8(c.name());
    if (cs.size() != 1) throw EvalError("type error: character expected");
    return m.unify(a[1], Term::integer(static_cast<std::int64_t>(cs[0])));
  }
  const Term n = deref(m, a[1]);
  if (!n.is_int()) throw InstantiationError("instantiation error: char_code/2");
  return m.unify(c, Term::atom(encode_code_point(static_cast<char32_t>(n.int_value()))));
}

char32_t ascii_lower(char32_t c) { return (c >= 'A' && c <= 'Z') ? c + 32 : c; }
char32_t ascii_upper(char32_t c) { return (c >= 'a' && c <= 'z') ? c - 32 : c; }
bool is_upper(char32_t c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char32_t c) { return c >= 'a' && c <= 'z'; }

// Case-insensitive order; ties broken at the first case difference, with
// uppercase first when `upper_wins`.
bool case_order_le(const std::u32string& x, const std::u32string& y, bool upper_wins) {
  std::u32string lx;
  std::u32string ly;
  for (char32_t c : x) lx += ascii_lower(c);
  for (char32_t c : y) ly += ascii_lower(c);
  if (lx != ly) return lx < ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return upper_wins ? is_upper(x[i]) : is_lower(x[i]);
  }
  return true;
}

bool b_upper_first(Machine& m, std::span<const Term> a) {
  return case_order_le(decode_utf8(text_of(m, a[0])), decode_utf8(text_of(m, a[1])), true);
}

bool b_lower_first(Machine& m, std::span<const Term> a) {
  return case_order_le(decode_utf8(text_of(m, a[0])), decode_utf8(text_of(m, a[1])), false);
}

// Words whose initial is in the preferred case class come first; within a
// class plain code point order applies.
bool initial_class_le(const std::u32string& x, const std::u32string& y, bool upper_first) {
  auto cls = [&](const std::u32string& s) {
    if (s.empty()) return 0;
    const bool preferred = upper_first ? is_upper(s[0]) : is_lower(s[0]);
    return preferred ? 0 : 1;
  };
  const int cx = cls(x);
  const int cy = cls(y);
  if (cx != cy) return cx < cy;
  return x <= y;
}

bool b_first_upper(Machine& m, std::span<const Term> a) {
  return initial_class_le(decode_utf8(text_of(m, a[0])), decode_utf8(text_of(m, a[1])), true);
}

bool b_first_lower(Machine& m, std::span<const Term> a) {
  return initial_class_le(decode_utf8(text_of(m, a[0])), decode_utf8(text_of(m, a[1])), false);
}

bool b_contains(Machine& m, std::span<const Term> a) {
  return text_of(m, a[0]).find(text_of(m, a[1])) != std::string::npos;
}

bool b_starts_with(Machine& m, std::span<const Term> a) {
  return text_of(m, a[0]).starts_with(text_of(m, a[1]));
}

// upcase(Upper, Word): the second argument is the input.
bool b_upcase(Machine& m, std::span<const Term> a) {
  const Term in = deref(m, a[1]);
  if (in.is_var()) return false;
  std::u32string s = decode_utf8(text_of(m, in));
  for (auto& c : s) c = ascii_upper(c);
  return m.unify(a[0], Term::atom(encode_utf8(s)));
}

std::optional<Term> numeric_value(Machine& m, const Term& t0) {
  const Term t = deref(m, t0);
  if (t.is_number()) return t;
  if (t.is_atom()) return parse_number(t.name());
  const Term r = m.bindings().resolve(t);
  if (is_text(r)) return parse_number(node_text(r));
  return std::nullopt;
}

bool b_isnumber(Machine& m, std::span<const Term> a) { return numeric_value(m, a[0]).has_value(); }

bool b_fnumber(Machine& m, std::span<const Term> a) {
  auto v = numeric_value(m, a[0]);
  return v && v->is_float();
}

bool b_inumber(Machine& m, std::span<const Term> a) {
  auto v = numeric_value(m, a[0]);
  return v && v->is_int();
}

// ---------------------------------------------------------------------------
// Term construction.

bool b_functor(Machine& m, std::span<const Term> a) {
  const Term t = deref(m, a[0]);
  if (!t.is_var()) {
    if (t.is_compound()) {
      return m.unify(a[1], Term::atom(t.name())) &&
             m.unify(a[2], Term::integer(static_cast<std::int64_t>(t.arity())));
    }
    return m.unify(a[1], t) && m.unify(a[2], Term::integer(0));
  }
  const Term name = deref(m, a[1]);
  const Term n = deref(m, a[2]);
  if (!n.is_int() || name.is_var()) throw InstantiationError("instantiation error: functor/3");
  if (n.int_value() == 0) return m.unify(t, name);
  if (!name.is_atom()) throw EvalError("type error: functor name must be an atom");
  std::vector<Term> args;
  for (std::int64_t i = 0; i < n.int_value(); ++i) args.push_back(m.bindings().fresh());
  return m.unify(t, Term::compound(name.name(), std::move(args)));
}

bool b_arg(Machine& m, std::span<const Term> a) {
  const Term n = deref(m, a[0]);
  const Term t = deref(m, a[1]);
  if (!n.is_int() || !t.is_compound()) throw InstantiationError("instantiation error: arg/3");
  if (n.int_value() < 1 || static_cast<std::size_t>(n.int_value()) > t.arity()) return false;
  return m.unify(a[2], t.arg(static_cast<std::size_t>(n.int_value() - 1)));
}

bool b_univ(Machine& m, std::span<const Term> a) {
  const Term t = deref(m, a[0]);
  if (!t.is_var()) {
    std::vector<Term> items;
    if (t.is_compound()) {
      items.push_back(Term::atom(t.name()));
      items.insert(items.end(), t.args().begin(), t.args().end());
    } else {
      items.push_back(t);
    }
    return m.unify(a[1], Term::list(items));
  }
  auto items = walk_list(m, a[1]);
  if (!items || items->empty()) throw InstantiationError("instantiation error: =../2");
  const Term head = deref(m, (*items)[0]);
  if (items->size() == 1) return m.unify(t, head);
  if (!head.is_atom()) throw EvalError("type error: =../2 needs an atom functor");
  return m.unify(t, Term::compound(head.name(), std::vector<Term>(items->begin() + 1, items->end())));
}

bool b_copy_term(Machine& m, std::span<const Term> a) {
  return m.unify(a[1], copy_fresh(m.bindings().resolve(a[0]), m.bindings()));
}

// ---------------------------------------------------------------------------
// Output and control helpers.

bool b_write(Machine& m, std::span<const Term> a) {
  m.solver().diagnostic(write_term(m.bindings().resolve(a[0])));
  return true;
}

bool b_writeq(Machine& m, std::span<const Term> a) {
  m.solver().diagnostic(render_term(m.bindings().resolve(a[0])));
  return true;
}

bool b_nl(Machine& m, std::span<const Term>) {
  m.solver().diagnostic("\n");
  return true;
}

bool b_once(Machine& m, std::span<const Term> a) {
  m.push_goal(Term::compound("->", {a[0], Term::atom("true")}), m.height());
  return true;
}

bool b_ignore(Machine& m, std::span<const Term> a) {
  m.push_goal(Term::compound(";", {Term::compound("->", {a[0], Term::atom("true")}), Term::atom("true")}),
              m.height());
  return true;
}

bool b_forall(Machine& m, std::span<const Term> a) {
  const Term inner = Term::compound(",", {a[0], Term::compound("\\+", {a[1]})});
  m.push_goal(Term::compound("\\+", {inner}), m.height());
  return true;
}

bool b_unmatched_text(Machine& m, std::span<const Term> a) {
  if (!m.solver().options().copy_unmatched_text) return m.unify(a[1], Term::nil());
  return m.unify(a[1], Term::list({Term::compound("text", {a[0]})}));
}

// ---------------------------------------------------------------------------
// Document helpers implemented natively.

bool b_canon(Machine& m, std::span<const Term> a) {
  const Term l = m.bindings().resolve(a[0]);
  if (!is_list(l)) throw InstantiationError("instantiation error: canon/2 needs a proper list");
  return m.unify(a[1], canon_list(l));
}

bool b_equals(Machine& m, std::span<const Term> a) {
  return equals(m.bindings().resolve(a[0]), m.bindings().resolve(a[1]));
}

bool b_tree_to_relation(Machine& m, std::span<const Term> a) {
  return m.unify(a[1], Term::list(tree_to_relation(m.bindings().resolve(a[0]))));
}

bool b_check_document(Machine& m, std::span<const Term> a) {
  return !check_serializable(m.bindings().resolve(a[0])).has_value();
}

using Table = std::unordered_map<std::string, BuiltinFn>;

std::string key(std::string_view name, std::size_t arity) {
  return std::string(name) + "/" + std::to_string(arity);
}

const Table& table() {
  static const Table t = [] {
    Table t;
    auto add = [&](std::string_view n, std::size_t ar, BuiltinFn f) { t.emplace(key(n, ar), f); };
    add("var", 1, b_var);
    add("nonvar", 1, b_nonvar);
    add("atom", 1, b_atom);
    add("number", 1, b_number);
    add("integer", 1, b_integer);
    add("float", 1, b_float);
    add("compound", 1, b_compound);
    add("atomic", 1, b_atomic);
    add("callable", 1, b_callable);
    add("list", 1, b_is_list);
    add("is_list", 1, b_is_list);
    add("ground", 1, b_ground);
    add("=", 2, b_unify);
    add("\\=", 2, b_not_unify);
    add("unify_with_occurs_check", 2, b_unify_oc);
    add("==", 2, b_identical);
    add("\\==", 2, b_not_identical);
    add("@<", 2, b_term_lt);
    add("@>", 2, b_term_gt);
    add("@=<", 2, b_term_le);
    add("@>=", 2, b_term_ge);
    add("compare", 3, b_compare);
    add("<", 2, b_lt);
    add(">", 2, b_gt);
    add("=<", 2, b_le);
    add(">=", 2, b_ge);
    add("=:=", 2, b_num_eq);
    add("=\\=", 2, b_num_ne);
    add("is", 2, b_is);
    add("length", 2, b_length);
    add("reverse", 2, b_reverse);
    add("delete", 3, b_delete);
    add("msort", 2, b_msort);
    add("between", 3, b_between);
    add("atom_codes", 2, b_atom_codes);
    add("atom_chars", 2, b_atom_chars);
    add("number_codes", 2, b_number_codes);
    add("atom_length", 2, b_atom_length);
    add("atom_number", 2, b_atom_number);
    add("char_code", 2, b_char_code);
    add("upper_first", 2, b_upper_first);
    add("lower_first", 2, b_lower_first);
    add("first_upper", 2, b_first_upper);
    add("first_lower", 2, b_first_lower);
    add("contains", 2, b_contains);
    add("starts_with", 2, b_starts_with);
    add("upcase", 2, b_upcase);
    add("isnumber", 1, b_isnumber);
    add("fnumber", 1, b_fnumber);
    add("inumber", 1, b_inumber);
    add("functor", 3, b_functor);
    add("arg", 3, b_arg);
    add("=..", 2, b_univ);
    add("copy_term", 2, b_copy_term);
    add("write", 1, b_write);
    add("print", 1, b_write);
    add("writeq", 1, b_writeq);
    add("nl", 0, b_nl);
    add("once", 1, b_once);
    add("ignore", 1, b_ignore);
    add("forall", 2, b_forall);
    add("$unmatched_text", 2, b_unmatched_text);
    add("canon", 2, b_canon);
    add("equals", 2, b_equals);
    add("tree_to_relation", 2, b_tree_to_relation);
    add("serializable", 1, b_check_document);
    return t;
  }();
  return t;
}

}  // namespace

BuiltinFn find_builtin(std::string_view name, std::size_t arity) {
  const auto& t = table();
  auto it = t.find(key(name, arity));
  return it == t.end() ? nullptr : it->second;
}

}  // namespace detail

std::vector<std::pair<std::string, std::size_t>> builtin_predicates() {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [k, fn] : detail::table()) {
    const auto slash = k.rfind('/');
    out.emplace_back(k.substr(0, slash), std::stoul(k.substr(slash + 1)));
  }
  for (const char* c : {"true", "fail", "false", "!"}) out.emplace_back(c, 0);
  for (const char* c : {"not", "\\+"}) out.emplace_back(c, 1);
  for (const char* c : {",", ";", "->", "$call_clause"}) out.emplace_back(c, 2);
  out.emplace_back("findall", 3);
  for (std::size_t n = 1; n <= 8; ++n) out.emplace_back("call", n);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_builtin(std::string_view name, std::size_t arity) {
  if (detail::find_builtin(name, arity) != nullptr) return true;
  if (name == "call" && arity >= 1) return true;
  const auto all = builtin_predicates();
  return std::find(all.begin(), all.end(), std::make_pair(std::string(name), arity)) != all.end();
}

}  // namespace termxform
