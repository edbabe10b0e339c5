#include "termxform/reader.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

namespace termxform {

ParseError::ParseError(int line, int column, std::string expected, std::string found)
    : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
            ": expected " + expected + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Name, Quoted, Var, Int, Float, Punct, End, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::int64_t ival = 0;
  double fval = 0.0;
  int line = 1;
  int col = 1;
  bool layout_before = false;
};

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

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    Token t;
    t.layout_before = skip_layout();
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::Eof;
      t.text = "end of input";
      return t;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      read_number(t);
    } else if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      t.kind = Tok::Var;
      t.text = take_while(is_alnum);
    } else if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::Name;
      t.text = take_while(is_alnum);
    } else if (c == '\'' || c == '"') {
      t.kind = Tok::Quoted;
      t.text = read_quoted(c, t);
    } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' ||
               c == '|') {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance();
    } else if (c == '!' || c == ';') {
      t.kind = Tok::Name;
      t.text = std::string(1, c);
      advance();
    } else if (is_symbol_char(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_symbol_char(src_[pos_])) advance();
      std::string run(src_.substr(start, pos_ - start));
      if (run.back() == '.' && run != "=.." && at_end_boundary()) {
        if (run.size() == 1) {
          t.kind = Tok::End;
          t.text = ".";
          return t;
        }
        // A symbol atom glued to the clause end: give the dot back.
        pos_--;
        col_--;
        run.pop_back();
      }
      t.kind = Tok::Name;
      t.text = std::move(run);
    } else {
      throw ParseError(line_, col_, "a token", std::string("'") + c + "'");
    }
    return t;
  }

 private:
  bool at_end_boundary() const {
    if (pos_ >= src_.size()) return true;
    const char n = src_[pos_];
    return std::isspace(static_cast<unsigned char>(n)) != 0 || n == '%';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool skip_layout() {
    bool any = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        any = true;
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        any = true;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        const int line = line_, col = col_;
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= src_.size()) throw ParseError(line, col, "'*/'", "end of input");
        advance();
        advance();
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  template <typename Pred>
  std::string take_while(Pred p) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && p(src_[pos_])) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  void read_number(Token& t) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    bool is_float = false;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      is_float = true;
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        is_float = true;
        while (pos_ < look) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    t.text = std::string(text);
    if (is_float) {
      t.kind = Tok::Float;
      t.fval = std::strtod(t.text.c_str(), nullptr);
    } else {
      t.kind = Tok::Int;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.ival);
      if (ec != std::errc()) throw ParseError(t.line, t.col, "an integer in range", t.text);
    }
  }

  std::string read_quoted(char q, const Token& t) {
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError(t.line, t.col, "closing quote", "end of input");
      const char c = src_[pos_];
      if (c == q) {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == q) {
          out += q;
          advance();
          advance();
          continue;
        }
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw ParseError(t.line, t.col, "closing quote", "end of input");
        const char e = src_[pos_];
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'a': out += '\a'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'v': out += '\v'; break;
          case '0': out += '\0'; break;
          case '\n': break;  // line continuation
          case 'x': {
            std::string hex;
            while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
              hex += src_[pos_];
              advance();
            }
            if (hex.empty() || pos_ >= src_.size() || src_[pos_] != '\\') {
              throw ParseError(line_, col_, "\\xHH\\ escape", "malformed escape");
            }
            advance();
            out += static_cast<char>(std::strtoul(hex.c_str(), nullptr, 16));
            break;
          }
          default:
            // \\ \' \" \` and an escaped space stand for themselves.
            out += e;
        }
        continue;
      }
      out += c;
      advance();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Eof: return "end of input";
    case Tok::End: return "'.'";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  Parser(std::string_view text, const OperatorTable& ops) : lex_(text), ops_(&ops) { shift(); }

  void set_ops(const OperatorTable& ops) { ops_ = &ops; }

  bool at_eof() const { return cur_.kind == Tok::Eof; }

  // Reads one term up to the End token. Variable bookkeeping is reset first.
  ReadTerm read(bool allow_missing_end) {
    vars_.clear();
    named_.clear();
    var_count_ = 0;
    ReadTerm out;
    out.line = cur_.line;
    out.term = parse(1200);
    if (cur_.kind == Tok::End) {
      shift();
    } else if (!(allow_missing_end && cur_.kind == Tok::Eof)) {
      fail("operator or '.'");
    }
    out.variables = named_;
    out.var_count = var_count_;
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(cur_.line, cur_.col, expected, describe(cur_));
  }

  void shift() {
    cur_ = peeked_ ? std::move(*peeked_) : lex_.next();
    peeked_.reset();
  }

  const Token& peek() {
    if (!peeked_) peeked_ = lex_.next();
    return *peeked_;
  }

  bool is_punct(const Token& t, char c) const {
    return t.kind == Tok::Punct && t.text.size() == 1 && t.text[0] == c;
  }

  void expect(char c) {
    if (!is_punct(cur_, c)) fail(std::string("'") + c + "'");
    shift();
  }

  // True if `t` cannot begin a term, so a preceding prefix operator is an atom.
  bool ends_operand(const Token& t) const {
    if (t.kind == Tok::End || t.kind == Tok::Eof) return true;
    if (t.kind == Tok::Punct) return t.text != "(" && t.text != "[" && t.text != "{";
    if (t.kind == Tok::Name) return ops_->infix(t.text).has_value() && !ops_->prefix(t.text);
    return false;
  }

  Term make_var(const std::string& name) {
    if (name == "_") return Term::variable(var_count_++, "_");
    auto it = vars_.find(name);
    if (it != vars_.end()) return it->second;
    Term v = Term::variable(var_count_++, name);
    vars_.emplace(name, v);
    named_.emplace_back(name, v);
    return v;
  }

  std::vector<Term> parse_arglist() {
    // Current token is '(' right after a functor.
    shift();
    std::vector<Term> args;
    args.push_back(parse(999));
    while (is_punct(cur_, ',')) {
      shift();
      args.push_back(parse(999));
    }
    expect(')');
    return args;
  }

  Term parse_list() {
    shift();  // '['
    if (is_punct(cur_, ']')) {
      shift();
      return Term::nil();
    }
    std::vector<Term> items;
    items.push_back(parse(999));
    while (is_punct(cur_, ',')) {
      shift();
      items.push_back(parse(999));
    }
    Term tail = Term::nil();
    if (is_punct(cur_, '|')) {
      shift();
      tail = parse(999);
    }
    expect(']');
    return Term::list(items, tail);
  }

  // Returns the primary term and writes its priority.
  Term parse_primary(int max_prec, int& prec) {
    prec = 0;
    Token t = cur_;
    switch (t.kind) {
      case Tok::Int:
        shift();
        return Term::integer(t.ival);
      case Tok::Float:
        shift();
        return Term::real(t.fval);
      case Tok::Var:
        shift();
        return make_var(t.text);
      case Tok::Punct:
        if (t.text == "(") {
          shift();
          Term inner = parse(1200);
          expect(')');
          return inner;
        }
        if (t.text == "[") {
          Term l = parse_list();
          if (l.is_nil() && is_punct(cur_, '(') && !cur_.layout_before) {
            return Term::compound("[]", parse_arglist());
          }
          return l;
        }
        if (t.text == "{") {
          shift();
          if (is_punct(cur_, '}')) {
            shift();
            return Term::atom("{}");
          }
          Term inner = parse(1200);
          expect('}');
          return Term::compound("{}", {inner});
        }
        fail("a term");
      case Tok::Quoted:
        shift();
        if (is_punct(cur_, '(') && !cur_.layout_before) {
          return Term::compound(t.text, parse_arglist());
        }
        return Term::atom(t.text);
      case Tok::Name:
        break;
      default:
        fail("a term");
    }

    shift();
    if (is_punct(cur_, '(') && !cur_.layout_before) {
      return Term::compound(t.text, parse_arglist());
    }
    if (t.text == "-" && !cur_.layout_before && (cur_.kind == Tok::Int || cur_.kind == Tok::Float)) {
      Token n = cur_;
      shift();
      return n.kind == Tok::Int ? Term::integer(-n.ival) : Term::real(-n.fval);
    }
    if (auto op = ops_->prefix(t.text); op && !ends_operand(cur_)) {
      int p = op->precedence;
      if (p > max_prec) p = max_prec < 999 ? max_prec : 999;
      const int arg_max = op->fixity == Fixity::FY ? p : p - 1;
      Term arg = parse(arg_max);
      prec = p;
      return Term::compound(t.text, {arg});
    }
    return Term::atom(t.text);
  }

  Term parse(int max_prec) {
    int left_prec = 0;
    Term left = parse_primary(max_prec, left_prec);
    while (true) {
      std::string name;
      if (cur_.kind == Tok::Name || cur_.kind == Tok::Quoted) {
        name = cur_.text;
      } else if (is_punct(cur_, ',')) {
        name = ",";
      } else if (is_punct(cur_, '|')) {
        name = ";";
      } else {
        break;
      }
      if (auto op = ops_->infix(name)) {
        const int p = op->precedence;
        const int lmax = op->fixity == Fixity::YFX ? p : p - 1;
        const int rmax = op->fixity == Fixity::XFY ? p : p - 1;
        if (p <= max_prec && left_prec <= lmax) {
          shift();
          Term right = parse(rmax);
          left = Term::compound(name, {left, right});
          left_prec = p;
          continue;
        }
      }
      if (auto op = ops_->postfix(name)) {
        const int p = op->precedence;
        const int lmax = op->fixity == Fixity::YF ? p : p - 1;
        if (p <= max_prec && left_prec <= lmax) {
          shift();
          left = Term::compound(name, {left});
          left_prec = p;
          continue;
        }
      }
      break;
    }
    return left;
  }

  Lexer lex_;
  const OperatorTable* ops_;
  Token cur_;
  std::optional<Token> peeked_;
  std::map<std::string, Term> vars_;
  std::vector<std::pair<std::string, Term>> named_;
  std::size_t var_count_ = 0;
};

std::vector<std::string> op_names(const Term& t) {
  if (t.is_atom() && !t.is_nil()) return {t.name()};
  if (auto items = list_items(t)) {
    std::vector<std::string> out;
    for (const auto& i : *items) {
      if (!i.is_atom()) return {};
      out.push_back(i.name());
    }
    return out;
  }
  return {};
}

}  // namespace

struct TermReader::Impl {
  Impl(std::string_view text, OperatorTable& table) : ops(&table), parser(text, table) {}
  OperatorTable* ops;
  Parser parser;

  void apply_directive(const ReadTerm& rt) {
    const Term& d = rt.term.arg(0);
    if (!d.has_functor("op", 3)) return;
    const Term& p = d.arg(0);
    const Term& f = d.arg(1);
    if (!p.is_int() || !f.is_atom() || p.int_value() < 0 || p.int_value() > 1200) {
      throw ParseError(rt.line, 1, "op(Precedence, Type, Names)", render_term(d));
    }
    auto fix = parse_fixity(f.name());
    if (!fix) throw ParseError(rt.line, 1, "an operator type", f.name());
    for (const auto& n : op_names(d.arg(2))) {
      ops->add({n, static_cast<int>(p.int_value()), *fix});
    }
  }
};

TermReader::TermReader(std::string_view text, OperatorTable& ops)
    : impl_(std::make_shared<Impl>(text, ops)) {}

bool TermReader::next(ReadTerm& out) {
  while (!impl_->parser.at_eof()) {
    ReadTerm rt = impl_->parser.read(false);
    if (rt.term.has_functor(":-", 1)) {
      impl_->apply_directive(rt);
      continue;
    }
    out = std::move(rt);
    return true;
  }
  return false;
}

std::vector<ReadTerm> TermReader::read_all() {
  std::vector<ReadTerm> out;
  ReadTerm rt;
  while (next(rt)) out.push_back(rt);
  return out;
}

ReadTerm TermReader::read_single(bool allow_missing_end) {
  if (impl_->parser.at_eof()) throw ParseError(1, 1, "a term", "end of input");
  return impl_->parser.read(allow_missing_end);
}

Term parse_term(std::string_view text, const OperatorTable& ops) {
  OperatorTable copy = ops;
  TermReader reader(text, copy);
  return reader.read_single(true).term;
}

}  // namespace termxform
