#include "termxform/program.hpp"

#include <algorithm>

namespace termxform {

ArgKey ArgKey::of(const Term& t) {
  ArgKey k;
  switch (t.kind()) {
    case TermKind::Var:
      k.kind = Kind::Any;
      break;
    case TermKind::Atom:
      k.kind = Kind::Atom;
      k.name = t.name();
      break;
    case TermKind::Int:
      k.kind = Kind::Int;
      k.ival = t.int_value();
      break;
    case TermKind::Float:
      k.kind = Kind::Float;
      k.fval = t.float_value();
      break;
    case TermKind::Compound:
      k.kind = Kind::Functor;
      k.name = t.name();
      k.arity = t.arity();
      break;
  }
  return k;
}

bool ArgKey::compatible(const ArgKey& o) const {
  if (kind == Kind::Any || o.kind == Kind::Any) return true;
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Atom: return name == o.name;
    case Kind::Int: return ival == o.ival;
    case Kind::Float: return term_equal(Term::real(fval), Term::real(o.fval));
    case Kind::Functor: return arity == o.arity && name == o.name;
    case Kind::Any: return true;
  }
  return true;
}

std::vector<Term> flatten_conjunction(const Term& body) {
  std::vector<Term> goals;
  Term cur = body;
  while (cur.has_functor(",", 2)) {
    auto left = flatten_conjunction(cur.arg(0));
    goals.insert(goals.end(), left.begin(), left.end());
    cur = cur.arg(1);
  }
  goals.push_back(cur);
  return goals;
}

Program::Program() : ops_(default_operator_table()) {}

void Program::add_clause(const ReadTerm& rt) {
  Clause c;
  c.var_count = rt.var_count;
  c.line = rt.line;
  if (rt.term.has_functor(":-", 2)) {
    c.head = rt.term.arg(0);
    for (auto& g : flatten_conjunction(rt.term.arg(1))) {
      if (g.is_number()) throw ParseError(rt.line, 1, "a callable goal", render_term(g));
      c.body.push_back(g.is_var() ? Term::compound("call", {g}) : g);
    }
    if (c.body.size() == 1 && c.body[0].has_functor("true", 0)) c.body.clear();
  } else {
    c.head = rt.term;
  }
  if (!c.head.is_callable()) {
    throw ParseError(rt.line, 1, "a clause head", render_term(c.head));
  }
  add(std::move(c));
}

void Program::add(Clause c) {
  if (c.head.is_compound()) c.first_arg = ArgKey::of(c.head.arg(0));
  Key key{c.head.name(), c.head.arity()};
  auto [it, inserted] = procs_.try_emplace(key);
  if (inserted) order_.push_back(key);
  it->second.push_back(std::move(c));
}

void Program::consult(std::string_view text) {
  TermReader reader(text, ops_);
  ReadTerm rt;
  while (reader.next(rt)) add_clause(rt);
}

const std::vector<Clause>* Program::clauses(std::string_view name, std::size_t arity) const {
  auto it = procs_.find(Key{std::string(name), arity});
  return it == procs_.end() ? nullptr : &it->second;
}

bool Program::defines(std::string_view name, std::size_t arity) const {
  return clauses(name, arity) != nullptr;
}

void Program::declare(std::string_view name, std::size_t arity) {
  declared_.emplace(std::string(name), arity);
}

bool Program::is_declared(std::string_view name, std::size_t arity) const {
  return declared_.contains(Key{std::string(name), arity});
}

std::size_t Program::clause_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : procs_) n += v.size();
  return n;
}

Program parse_program(std::string_view text) {
  Program p;
  p.consult(text);
  return p;
}

Term parse_query(std::string_view text, const OperatorTable& ops,
                 std::vector<std::pair<std::string, Term>>* variables, std::size_t* var_count) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  if (body.starts_with("?-")) body.remove_prefix(2);
  const bool blank = std::all_of(body.begin(), body.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) throw ParseError(1, 1, "a query", "empty query");
  OperatorTable copy = ops;
  TermReader reader(body, copy);
  ReadTerm rt = reader.read_single(true);
  ReadTerm extra;
  if (reader.next(extra)) throw ParseError(extra.line, 1, "end of query", render_term(extra.term));
  if (!rt.term.is_callable() && !rt.term.is_var()) {
    throw ParseError(1, 1, "a callable goal", render_term(rt.term));
  }
  if (variables != nullptr) *variables = rt.variables;
  if (var_count != nullptr) *var_count = rt.var_count;
  return rt.term;
}

}  // namespace termxform
