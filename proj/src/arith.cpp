// Right-hand side evaluation for is/2: arithmetic plus the string and node
// functors.

#include <cmath>
#include <limits>

#include "machine.hpp"
#include "text_util.hpp"

namespace termxform {

namespace {

using detail::InstantiationError;

struct Evaluator {
  const Bindings& b;

  Term deref(const Term& t) const { return b.deref(t); }

  [[noreturn]] void type_error(const std::string& what, const Term& t) const {
    throw EvalError("evaluation error: " + what + ", got " + render_term(b.resolve(t)));
  }

  Term number(const Term& t0) {
    Term v = eval(t0);
    if (!v.is_number()) type_error("number expected", v);
    return v;
  }

  std::int64_t integer(const Term& t0) {
    Term v = eval(t0);
    if (!v.is_int()) type_error("integer expected", v);
    return v.int_value();
  }

  // Text of an operand to a string functor.
  std::string text(const Term& t0) {
    Term t = deref(t0);
    if (t.is_var()) throw InstantiationError("instantiation error in string function");
    if (t.is_atomic()) return detail::atomic_text(t);
    if (t.is_cons()) {
      std::string out;
      Term cur = t;
      while (true) {
        cur = deref(cur);
        if (!cur.is_cons()) break;
        out += text(cur.arg(0));
        cur = cur.arg(1);
      }
      if (cur.is_var()) throw InstantiationError("instantiation error: partial list");
      if (!cur.is_nil()) type_error("proper list expected", t);
      return out;
    }
    Term r = b.resolve(t);
    if (is_text(r) || is_element(r)) return detail::node_text(r);
    if (is_comment(r) || is_pi(r)) return {};
    return text(eval(r));
  }

  // Numeric value of a text-node style operand (plus/minus/mult/div).
  Term node_number(const Term& t0) {
    Term t = b.resolve(t0);
    if (t.is_var()) throw InstantiationError("instantiation error in node arithmetic");
    if (t.is_number()) return t;
    std::string s;
    if (t.is_atom()) {
      s = t.name();
    } else if (is_text(t)) {
      s = detail::node_text(t);
    } else if (is_element(t)) {
      auto kids = list_items(t.arg(2));
      if (!kids || kids->size() != 1 || !is_text((*kids)[0])) {
        type_error("element with a single text child expected", t);
      }
      s = detail::node_text((*kids)[0]);
    } else {
      return number(t);
    }
    auto n = detail::parse_number(s);
    if (!n) type_error("numeric text expected", t);
    return *n;
  }

  static Term arith(char op, const Term& x, const Term& y) {
    if (x.is_int() && y.is_int()) {
      const std::int64_t a = x.int_value();
      const std::int64_t c = y.int_value();
      std::int64_t r = 0;
      bool overflow = false;
      switch (op) {
        case '+': overflow = __builtin_add_overflow(a, c, &r); break;
        case '-': overflow = __builtin_sub_overflow(a, c, &r); break;
        case '*': overflow = __builtin_mul_overflow(a, c, &r); break;
        default: break;
      }
      if (overflow) throw EvalError("evaluation error: integer overflow");
      return Term::integer(r);
    }
    const double a = x.as_double();
    const double c = y.as_double();
    switch (op) {
      case '+': return Term::real(a + c);
      case '-': return Term::real(a - c);
      default: return Term::real(a * c);
    }
  }

  static Term divide(const Term& x, const Term& y, bool always_float) {
    if (y.as_double() == 0.0) throw EvalError("evaluation error: division by zero");
    if (!always_float && x.is_int() && y.is_int() && x.int_value() % y.int_value() == 0) {
      return Term::integer(x.int_value() / y.int_value());
    }
    return Term::real(x.as_double() / y.as_double());
  }

  std::u32string chars(const Term& t) { return detail::decode_utf8(text(t)); }

  Term eval(const Term& t0) {
    Term t = deref(t0);
    switch (t.kind()) {
      case TermKind::Var:
        throw InstantiationError("instantiation error in arithmetic");
      case TermKind::Int:
      case TermKind::Float:
      case TermKind::Atom:
        return t;
      case TermKind::Compound:
        break;
    }
    const std::string& f = t.name();
    const std::size_t n = t.arity();
    auto a = [&](std::size_t i) { return t.arg(i); };

    if (t.is_cons()) return Term::atom(text(t));
    if (is_text(t)) return Term::atom(text(t));

    if (n == 1) {
      if (f == "-") {
        Term x = number(a(0));
        if (x.is_int()) return Term::integer(-x.int_value());
        return Term::real(-x.float_value());
      }
      if (f == "+") return number(a(0));
      if (f == "abs") {
        Term x = number(a(0));
        return x.is_int() ? Term::integer(std::llabs(x.int_value())) : Term::real(std::fabs(x.float_value()));
      }
      if (f == "string") return Term::atom(text(a(0)));
      if (f == "normalize_space") return Term::atom(detail::trim(text(a(0))));
      if (f == "float") return Term::real(number(a(0)).as_double());
      if (f == "integer") return Term::integer(static_cast<std::int64_t>(std::llround(number(a(0)).as_double())));
      if (f == "cat") return Term::atom(text(a(0)));
    }
    if (n == 2) {
      if (f == "+" || f == "-" || f == "*") return arith(f[0], number(a(0)), number(a(1)));
      if (f == "/") return divide(number(a(0)), number(a(1)), false);
      if (f == "//" || f == "mod") {
        const std::int64_t x = integer(a(0));
        const std::int64_t y = integer(a(1));
        if (y == 0) throw EvalError("evaluation error: division by zero");
        if (f == "//") return Term::integer(x / y);
        std::int64_t m = x % y;
        if (m != 0 && ((m < 0) != (y < 0))) m += y;
        return Term::integer(m);
      }
      if (f == "min" || f == "max") {
        Term x = number(a(0));
        Term y = number(a(1));
        const bool first = f == "min" ? x.as_double() <= y.as_double() : x.as_double() >= y.as_double();
        return first ? x : y;
      }
      if (f == "plus") return arith('+', node_number(a(0)), node_number(a(1)));
      if (f == "minus") return arith('-', node_number(a(0)), node_number(a(1)));
      if (f == "mult") return arith('*', node_number(a(0)), node_number(a(1)));
      if (f == "div") return divide(node_number(a(0)), node_number(a(1)), true);
      if (f == "substring_after" || f == "substring_before") {
        const std::string s = text(a(0));
        const std::string sub = text(a(1));
        const auto pos = s.find(sub);
        if (pos == std::string::npos) return Term::atom("");
        return Term::atom(f == "substring_after" ? s.substr(pos + sub.size()) : s.substr(0, pos));
      }
    }
    if (n == 3) {
      if (f == "substring") {
        const std::u32string s = chars(a(0));
        const std::int64_t start = integer(a(1));
        const std::int64_t len = integer(a(2));
        if (start < 1 || len < 0 || static_cast<std::uint64_t>(start - 1 + len) > s.size()) {
          throw EvalError("evaluation error: substring(" + render_term(b.resolve(a(0))) + "," +
                          std::to_string(start) + "," + std::to_string(len) + ") out of range");
        }
        return Term::atom(detail::encode_utf8(s.substr(static_cast<std::size_t>(start - 1),
                                                       static_cast<std::size_t>(len))));
      }
      if (f == "translate") {
        const std::u32string s = chars(a(0));
        const std::u32string from = chars(a(1));
        const std::u32string to = chars(a(2));
        std::u32string out;
        for (char32_t c : s) {
          const auto pos = from.find(c);
          if (pos == std::u32string::npos) {
            out += c;
          } else if (pos < to.size()) {
            out += to[pos];
          }
        }
        return Term::atom(detail::encode_utf8(out));
      }
    }
    if (f == "cat" && n >= 2 && n <= 8) {
      std::string out;
      for (const auto& x : t.args()) out += text(x);
      return Term::atom(out);
    }
    throw EvalError("evaluation error: unknown function " + quote_atom_if_needed(f) + "/" +
                    std::to_string(n));
  }
};

}  // namespace

Term eval_is(const Term& expr, const Bindings& bindings) {
  Evaluator ev{bindings};
  return ev.eval(expr);
}

}  // namespace termxform
