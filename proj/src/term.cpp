#include "termxform/term.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace termxform {

namespace detail {
struct TermNode {
  TermKind kind = TermKind::Atom;
  std::int64_t ival = 0;
  double fval = 0.0;
  VarId var = 0;
  std::string text;
  std::vector<Term> args;
};
}  // namespace detail

namespace {

const std::shared_ptr<const detail::TermNode>& nil_node() {
  static const auto node = [] {
    auto n = std::make_shared<detail::TermNode>();
    n->kind = TermKind::Atom;
    n->text = std::string(kNilAtom);
    return std::shared_ptr<const detail::TermNode>(std::move(n));
  }();
  return node;
}

const std::string& empty_string() {
  static const std::string s;
  return s;
}

bool is_symbol_char(char c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '\\': case '^': case '<':
    case '>': case '=': case '~': case ':': case '.': case '?': case '@':
    case '#': case '&': case '$':
      return true;
    default:
      return false;
  }
}

bool is_alnum_ascii(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

Term::Term() : node_(nil_node()) {}

Term Term::atom(std::string_view name) {
  if (name == kNilAtom) return Term(nil_node());
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Atom;
  n->text = std::string(name);
  return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Int;
  n->ival = value;
  return Term(std::move(n));
}

Term Term::real(double value) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Float;
  n->fval = value;
  return Term(std::move(n));
}

Term Term::variable(VarId id, std::string_view name) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Var;
  n->var = id;
  n->text = std::string(name);
  return Term(std::move(n));
}

Term Term::compound(std::string_view functor, std::vector<Term> args) {
  if (args.empty()) return atom(functor);
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Compound;
  n->text = std::string(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::nil() { return Term(nil_node()); }

Term Term::cons(Term head, Term tail) {
  return compound(kConsFunctor, {std::move(head), std::move(tail)});
}

Term Term::list(std::span<const Term> items, Term tail) {
  Term result = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) result = cons(*it, std::move(result));
  return result;
}

TermKind Term::kind() const { return node_->kind; }

bool Term::is_nil() const { return node_->kind == TermKind::Atom && node_->text == kNilAtom; }

bool Term::is_cons() const {
  return node_->kind == TermKind::Compound && node_->args.size() == 2 && node_->text == kConsFunctor;
}

const std::string& Term::name() const {
  if (node_->kind == TermKind::Atom || node_->kind == TermKind::Compound) return node_->text;
  return empty_string();
}

std::int64_t Term::int_value() const { return node_->ival; }
double Term::float_value() const { return node_->fval; }

double Term::as_double() const {
  return node_->kind == TermKind::Int ? static_cast<double>(node_->ival) : node_->fval;
}

VarId Term::var_id() const { return node_->var; }

const std::string& Term::var_name() const {
  return node_->kind == TermKind::Var ? node_->text : empty_string();
}

std::size_t Term::arity() const { return node_->args.size(); }

std::span<const Term> Term::args() const { return node_->args; }

bool Term::has_functor(std::string_view functor, std::size_t n) const {
  if (n == 0) return node_->kind == TermKind::Atom && node_->text == functor;
  return node_->kind == TermKind::Compound && node_->args.size() == n && node_->text == functor;
}

bool term_equal(const Term& a0, const Term& b0) {
  const Term* a = &a0;
  const Term* b = &b0;
  while (true) {
    if (a->identity() == b->identity()) return true;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
      case TermKind::Atom:
        return a->name() == b->name();
      case TermKind::Int:
        return a->int_value() == b->int_value();
      case TermKind::Float:
        // Bitwise so that -0.0 and 0.0 stay distinct; NaN equals itself.
        return std::bit_cast<std::uint64_t>(a->float_value()) ==
               std::bit_cast<std::uint64_t>(b->float_value());
      case TermKind::Var:
        return a->var_id() == b->var_id();
      case TermKind::Compound: {
        if (a->arity() != b->arity() || a->name() != b->name()) return false;
        const std::size_t n = a->arity();
        for (std::size_t i = 0; i + 1 < n; ++i) {
          if (!term_equal(a->arg(i), b->arg(i))) return false;
        }
        a = &a->arg(n - 1);
        b = &b->arg(n - 1);
        break;
      }
    }
  }
}

bool is_list(const Term& t) {
  const Term* cur = &t;
  while (cur->is_cons()) cur = &cur->arg(1);
  return cur->is_nil();
}

std::optional<std::vector<Term>> list_items(const Term& t) {
  std::vector<Term> items;
  const Term* cur = &t;
  while (cur->is_cons()) {
    items.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) return std::nullopt;
  return items;
}

bool is_ground(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return false;
    case TermKind::Compound:
      for (const auto& a : t.args()) {
        if (!is_ground(a)) return false;
      }
      return true;
    default:
      return true;
  }
}

std::string format_float(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string s(buf.data(), end);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  } else if (s.find('.') == std::string::npos && s.find('e') != std::string::npos) {
    s.insert(s.find('e'), ".0");
  }
  return s;
}

std::string quote_atom_if_needed(std::string_view atom) {
  if (atom == "[]" || atom == "!" || atom == ";" || atom == "{}") return std::string(atom);
  bool bare = false;
  if (!atom.empty() && atom[0] >= 'a' && atom[0] <= 'z') {
    bare = true;
    for (char c : atom) bare = bare && is_alnum_ascii(c);
  } else if (!atom.empty() && atom != ".") {
    bare = true;
    for (char c : atom) bare = bare && is_symbol_char(c);
  }
  if (bare) return std::string(atom);

  std::string out = "'";
  for (char c : atom) {
    switch (c) {
      case '\'': out += "''"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          char hex[8];
          std::snprintf(hex, sizeof hex, "\\x%X\\", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += hex;
        } else {
          out += c;
        }
    }
  }
  out += '\'';
  return out;
}

namespace {

std::string render_functor(std::string_view name) {
  if (name == "[]" || name == "!" || name == ";" || name == "{}") {
    return "'" + std::string(name) + "'";
  }
  return quote_atom_if_needed(name);
}

void render(const Term& t, bool quoted, std::string& out) {
  switch (t.kind()) {
    case TermKind::Atom:
      out += quoted ? quote_atom_if_needed(t.name()) : t.name();
      return;
    case TermKind::Int:
      out += std::to_string(t.int_value());
      return;
    case TermKind::Float:
      out += format_float(t.float_value());
      return;
    case TermKind::Var:
      if (!t.var_name().empty() && t.var_name() != "_") {
        out += t.var_name();
      } else {
        out += "_G" + std::to_string(t.var_id());
      }
      return;
    case TermKind::Compound:
      break;
  }
  if (t.is_cons()) {
    out += '[';
    const Term* cur = &t;
    bool first = true;
    while (cur->is_cons()) {
      if (!first) out += ',';
      first = false;
      render(cur->arg(0), quoted, out);
      cur = &cur->arg(1);
    }
    if (!cur->is_nil()) {
      out += '|';
      render(*cur, quoted, out);
    }
    out += ']';
    return;
  }
  out += quoted ? render_functor(t.name()) : t.name();
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i > 0) out += ',';
    render(t.arg(i), quoted, out);
  }
  out += ')';
}

}  // namespace

std::string render_term(const Term& t) {
  std::string out;
  render(t, true, out);
  return out;
}

std::string write_term(const Term& t) {
  std::string out;
  render(t, false, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool valid_xml_name(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(first) || first == '_' || first == ':' || first >= 0x80)) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == ':' || u >= 0x80)) return false;
  }
  return true;
}

}  // namespace

Term attribute_atom(std::string_view id, std::string_view value) {
  std::string text;
  text.reserve(id.size() + value.size() + 3);
  text.append(id);
  text += "=\"";
  text.append(value);
  text += '"';
  return Term::atom(text);
}

std::optional<AttributeEntry> split_attribute(std::string_view text) {
  const auto sep = text.find("=\"");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  if (text.size() < sep + 3 || text.back() != '"') return std::nullopt;
  return AttributeEntry{std::string(text.substr(0, sep)),
                        std::string(text.substr(sep + 2, text.size() - sep - 3))};
}

Term mk_element(std::string_view name,
                const std::vector<std::pair<std::string, std::string>>& attrs,
                std::vector<Term> children) {
  if (!valid_xml_name(name)) {
    throw ConstructionError("invalid element name '" + std::string(name) + "'");
  }
  std::vector<Term> atts;
  atts.reserve(attrs.size());
  for (const auto& [id, value] : attrs) {
    if (!valid_xml_name(id)) throw ConstructionError("invalid attribute id '" + id + "'");
    atts.push_back(attribute_atom(id, value));
  }
  return Term::compound("element", {Term::atom(name), Term::list(atts), Term::list(children)});
}

Term mk_text(std::string_view text) { return Term::compound("text", {Term::atom(text)}); }
Term mk_comment(std::string_view text) { return Term::compound("comment", {Term::atom(text)}); }
Term mk_pi(std::string_view text) { return Term::compound("pi", {Term::atom(text)}); }

bool is_element(const Term& t) { return t.has_functor("element", 3); }
bool is_text(const Term& t) { return t.has_functor("text", 1); }
bool is_comment(const Term& t) { return t.has_functor("comment", 1); }
bool is_pi(const Term& t) { return t.has_functor("pi", 1); }

}  // namespace termxform
