#include "termxform/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "termxform/operators.hpp"
#include "termxform/reader.hpp"

namespace termxform {

namespace {

double xlog2x(std::int64_t n) {
  return n > 0 ? static_cast<double>(n) * std::log2(static_cast<double>(n)) : 0.0;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Classifier {
 public:
  Classifier(const ClassifierConfig& cfg, const OperatorTable& ops) : cfg_(cfg), ops_(ops) {}

  void clause(const Term& t, std::size_t index) {
    clause_ = index;
    if (t.has_functor(":-", 2)) {
      op(":-");
      head(t.arg(0));
      goal(t.arg(1));
    } else {
      head(t);
    }
    op(".");
  }

  HalsteadCounts counts() const {
    HalsteadCounts c;
    c.eta1 = static_cast<std::int64_t>(ops_seen_.size());
    c.eta2 = static_cast<std::int64_t>(operands_seen_.size());
    for (const auto& [k, n] : ops_seen_) c.n1 += n;
    for (const auto& [k, n] : operands_seen_) c.n2 += n;
    return c;
  }

 private:
  void op(const std::string& s) { ++ops_seen_[s]; }
  void operand(const std::string& s) { ++operands_seen_[s]; }

  void head(const Term& h) {
    if (!h.is_callable()) {
      arg(h);
      return;
    }
    if (cfg_.head_is_operand) operand("a:" + h.name());
    else op(h.name());
    if (h.is_compound()) {
      functional_punctuation(h.arity());
      for (const auto& a : h.args()) arg(a);
    }
  }

  void goal(const Term& g) {
    if (g.is_atom()) {
      op(g.name());
      return;
    }
    if (!g.is_compound()) {
      arg(g);
      return;
    }
    const bool control = g.has_functor(",", 2) || g.has_functor(";", 2) ||
                         g.has_functor("->", 2) || g.has_functor("\\+", 1);
    if (!control) {
      structure(g);
      return;
    }
    op(g.name());
    for (const auto& a : g.args()) goal(a);
  }

  void arg(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        if (t.var_name() == "_" || t.var_name().empty()) {
          operand("v:" + std::to_string(clause_) + ":" + std::to_string(t.var_id()) + ":" +
                  std::to_string(anon_++));
        } else if (cfg_.vars_per_clause) {
          operand("v:" + std::to_string(clause_) + ":" + t.var_name());
        } else {
          operand("v:" + t.var_name());
        }
        break;
      }
      case TermKind::Int:
      case TermKind::Float:
        operand("n:" + render_term(t));
        break;
      case TermKind::Atom:
        operand("a:" + t.name());
        break;
      case TermKind::Compound:
        structure(t);
        break;
    }
  }

  void structure(const Term& t) {
    if (t.is_cons()) {
      op("[");
      Term cur = t;
      bool first = true;
      while (cur.is_cons()) {
        if (!first) op(",");
        first = false;
        arg(cur.arg(0));
        cur = cur.arg(1);
      }
      if (!cur.is_nil()) {
        op("|");
        arg(cur);
      }
      op("]");
      return;
    }
    if (cfg_.functor_is_operator) op(t.name());
    else operand("a:" + t.name());
    const bool operator_notation = (t.arity() == 2 && ops_.infix(t.name())) ||
                                   (t.arity() == 1 && (ops_.prefix(t.name()) || ops_.postfix(t.name())));
    if (!operator_notation) functional_punctuation(t.arity());
    for (const auto& a : t.args()) arg(a);
  }

  void functional_punctuation(std::size_t arity) {
    op("(");
    op(")");
    for (std::size_t i = 1; i < arity; ++i) op(",");
  }

  const ClassifierConfig& cfg_;
  const OperatorTable& ops_;
  std::map<std::string, std::int64_t> ops_seen_;
  std::map<std::string, std::int64_t> operands_seen_;
  std::size_t clause_ = 0;
  std::size_t anon_ = 0;
};

std::int64_t count_loc(std::string_view src) {
  std::int64_t loc = 0;
  bool in_block = false;
  std::istringstream in{std::string(src)};
  std::string line;
  while (std::getline(in, line)) {
    bool content = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_block) {
        if (c == '*' && i + 1 < line.size() && line[i + 1] == '/') {
          in_block = false;
          ++i;
        }
        continue;
      }
      if (quote != 0) {
        if (c == quote) quote = 0;
        continue;
      }
      if (c == '%') break;
      if (c == '/' && i + 1 < line.size() && line[i + 1] == '*') {
        in_block = true;
        ++i;
        continue;
      }
      if (c == '\'' || c == '"') {
        quote = c;
        content = true;
        continue;
      }
      if (c != ' ' && c != '\t' && c != '\r') content = true;
    }
    if (content) ++loc;
  }
  return loc;
}

}  // namespace

HalsteadReport halstead(const HalsteadCounts& c) {
  if (c.eta1 < 0 || c.eta2 < 0 || c.n1 < 0 || c.n2 < 0) {
    throw MetricsError("counts must not be negative");
  }
  HalsteadReport r;
  r.counts = c;
  r.vocabulary = c.eta1 + c.eta2;
  r.length = c.n1 + c.n2;
  if (r.vocabulary == 0 || r.length == 0) {
    throw MetricsError("degenerate counts: vocabulary and length must be positive");
  }
  r.volume = static_cast<double>(r.length) * std::log2(static_cast<double>(r.vocabulary));
  if (r.volume <= 0) throw MetricsError("degenerate counts: volume is zero");
  r.estimated_length = xlog2x(c.eta1) + xlog2x(c.eta2);
  const double n = static_cast<double>(r.length);
  const double hi = std::max(r.estimated_length, n);
  r.length_deviation = 100.0 * std::fabs(r.estimated_length - n) / hi;
  r.level = kIdealVolume / r.volume;
  r.lambda = kIdealVolume * r.level;
  r.bugs = r.volume / 300.0;
  if (c.n2 > 0) r.ratio = static_cast<double>(c.n1) / static_cast<double>(c.n2);
  return r;
}

ClassifierConfig ClassifierConfig::parse(std::string_view text) {
  ClassifierConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error("classifier config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    auto bad = [&] {
      return Error("classifier config line " + std::to_string(lineno) + ": bad value '" + value +
                   "' for " + key);
    };
    if (key == "functor_as") {
      if (value != "operator" && value != "operand") throw bad();
      cfg.functor_is_operator = value == "operator";
    } else if (key == "head_as") {
      if (value != "operator" && value != "operand") throw bad();
      cfg.head_is_operand = value == "operand";
    } else if (key == "var_scope") {
      if (value != "clause" && value != "program") throw bad();
      cfg.vars_per_clause = value == "clause";
    } else {
      throw Error("classifier config line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  return cfg;
}

HalsteadCounts tokenize_classify(std::string_view source, const ClassifierConfig& config) {
  OperatorTable ops = default_operator_table();
  TermReader reader(source, ops);
  Classifier cls(config, ops);
  ReadTerm rt;
  std::size_t index = 0;
  while (reader.next(rt)) cls.clause(rt.term, index++);
  HalsteadCounts c = cls.counts();
  c.loc = count_loc(source);
  c.bytes = static_cast<std::int64_t>(source.size());
  if (c.eta1 + c.eta2 == 0) throw MetricsError("degenerate input: no clauses");
  return c;
}

std::string report_csv(const std::vector<std::pair<std::string, HalsteadReport>>& reports) {
  std::string out = "label,LOC,Bytes,eta1,eta2,N1,N2,N1/N2,N_T,Delta_N,lambda,B\n";
  for (const auto& [label, r] : reports) {
    const auto& c = r.counts;
    out += label + "," + std::to_string(c.loc) + "," + std::to_string(c.bytes) + "," +
           std::to_string(c.eta1) + "," + std::to_string(c.eta2) + "," + std::to_string(c.n1) + "," +
           std::to_string(c.n2) + "," + (r.ratio ? fixed(*r.ratio, 2) : std::string()) + "," +
           fixed(r.estimated_length, 1) + "," + fixed(r.length_deviation, 1) + "," +
           fixed(r.lambda, 2) + "," + fixed(r.bugs, 2) + "\n";
  }
  return out;
}

std::string format_report(const HalsteadReport& r) {
  const auto& c = r.counts;
  std::string out;
  out += "LOC     " + std::to_string(c.loc) + "\n";
  out += "Bytes   " + std::to_string(c.bytes) + "\n";
  out += "eta1    " + std::to_string(c.eta1) + "\n";
  out += "eta2    " + std::to_string(c.eta2) + "\n";
  out += "N1      " + std::to_string(c.n1) + "\n";
  out += "N2      " + std::to_string(c.n2) + "\n";
  out += "N1/N2   " + (r.ratio ? fixed(*r.ratio, 2) : std::string("n/a")) + "\n";
  out += "N       " + std::to_string(r.length) + "\n";
  out += "V       " + fixed(r.volume, 2) + "\n";
  out += "N_T     " + fixed(r.estimated_length, 2) + "\n";
  out += "Delta_N " + fixed(r.length_deviation, 2) + "\n";
  out += "L       " + fixed(r.level, 4) + "\n";
  out += "lambda  " + fixed(r.lambda, 4) + "\n";
  out += "B       " + fixed(r.bugs, 4) + "\n";
  return out;
}

}  // namespace termxform
