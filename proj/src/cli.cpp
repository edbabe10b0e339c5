#include "termxform/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "termxform/metrics.hpp"
#include "termxform/prelude.hpp"
#include "termxform/reader.hpp"
#include "termxform/solver.hpp"
#include "termxform/template.hpp"
#include "termxform/xml.hpp"

namespace termxform {

namespace {

constexpr std::string_view kPreludeOnly = "prelude-only";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rules_text(const std::string& rules) {
  if (rules.empty() || rules == kPreludeOnly) return {};
  return slurp(rules);
}

std::optional<std::uint64_t> depth_limit(std::optional<std::uint64_t> flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("TERMXFORM_DEPTH"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw Error(std::string("TERMXFORM_DEPTH is not a positive integer: ") + env);
    return v;
  }
  return std::nullopt;
}

Term substitute_named(const Term& t, const std::string& name, const Term& value) {
  if (t.is_var()) return t.var_name() == name ? value : t;
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(substitute_named(a, name, value));
  return Term::compound(t.name(), std::move(args));
}

bool is_node_pattern(const Term& t) {
  return t.is_var() || t.has_functor("element", 3) || t.has_functor("text", 1) ||
         t.has_functor("comment", 1) || t.has_functor("pi", 1);
}

class Linter {
 public:
  explicit Linter(const Program& all) : all_(all) {}

  void clause(const Clause& c) {
    line_ = c.line;
    if (c.head.has_functor("template", 2) && !is_node_pattern(c.head.arg(0))) {
      add("Warning: template at line " + std::to_string(c.line) + " can never match a node: " +
          render_term(c.head.arg(0)));
    }
    for (const auto& g : c.body) goal(g);
  }

  std::vector<std::string> take() { return std::move(warnings_); }

 private:
  void add(std::string w) {
    if (seen_.insert(w).second) warnings_.push_back(std::move(w));
  }

  void goal(const Term& g) {
    if (!g.is_callable()) return;
    const std::string& n = g.name();
    const std::size_t a = g.arity();
    if ((n == "," || n == ";" || n == "->") && a == 2) {
      goal(g.arg(0));
      goal(g.arg(1));
      return;
    }
    if ((n == "not" || n == "\\+" || n == "once" || n == "ignore" || n == "call") && a == 1) {
      goal(g.arg(0));
      return;
    }
    if (n == "findall" && a == 3) {
      goal(g.arg(1));
      return;
    }
    if (n == "forall" && a == 2) {
      goal(g.arg(0));
      goal(g.arg(1));
      return;
    }
    if (is_builtin(n, a) || all_.defines(n, a) || all_.is_declared(n, a)) return;
    add("Warning: unknown predicate " + n + "/" + std::to_string(a) + " called at line " +
        std::to_string(line_));
  }

  const Program& all_;
  int line_ = 0;
  std::set<std::string> seen_;
  std::vector<std::string> warnings_;
};

struct Common {
  std::string rules;
  std::optional<std::uint64_t> depth;
  bool occurs_check = false;
};

int cmd_transform(const Common& c, const std::string& in, const std::string& outp, bool all,
                  bool no_wrap, bool keep_ws, bool pretty, const std::string& default_text,
                  std::optional<std::size_t> max_results, std::ostream& err) {
  TransformOptions o;
  o.all = all;
  o.wrap = !no_wrap;
  o.read.keep_whitespace = keep_ws;
  o.write.pretty = pretty;
  o.traversal.unmatched_text = default_text == "copy" ? UnmatchedText::Copy : UnmatchedText::Drop;
  o.traversal.max_results = max_results;
  o.solver.depth_limit = depth_limit(c.depth);
  o.solver.occurs_check = c.occurs_check;
  const TransformReport r = transform_file(in, c.rules, outp, o);
  err << r.summary();
  return r.no_solution() ? kExitNoSolution : kExitOk;
}

int cmd_query(const Common& c, const std::string& in, const std::string& text, std::size_t max,
              std::ostream& out) {
  Program program = make_program(rules_text(c.rules));
  SolverOptions so;
  so.depth_limit = depth_limit(c.depth);
  so.occurs_check = c.occurs_check;
  std::vector<std::pair<std::string, Term>> vars;
  std::size_t var_count = 0;
  Term goal = parse_query(text, program.operators(), &vars, &var_count);
  const bool bind_doc = !in.empty();
  if (bind_doc) goal = substitute_named(goal, "Doc", parse_document(read_source(in)));

  Solver solver(program, so);
  solver.set_diagnostic_sink([&out](std::string_view s) { out << s; });
  SolutionStream s = solver.query(goal, vars, var_count);
  std::size_t found = 0;
  while ((max == 0 || found < max) && s.next()) {
    ++found;
    std::string line = "YES.";
    for (const auto& [name, value] : s.answer()) {
      if (name.starts_with("_") || (bind_doc && name == "Doc")) continue;
      line += " " + name + "/" + render_term(value);
    }
    out << line << "\n";
  }
  if (found == 0) {
    out << "NO\n";
    return kExitNoSolution;
  }
  return kExitOk;
}

int cmd_roundtrip(const std::string& in, bool keep_ws, std::ostream& out) {
  XmlReadOptions ro;
  ro.keep_whitespace = keep_ws;
  const Term first = parse_document(read_source(in), ro);
  const std::string text = serialize_document(first);
  const Term second = parse_document(SourceDocument{text, in + " (reserialized)"}, ro);
  if (auto diff = first_difference(first, second)) {
    std::string path;
    for (auto i : *diff) path += "/" + std::to_string(i);
    out << "roundtrip differs at " << (path.empty() ? "/" : path) << "\n";
    return kExitNoSolution;
  }
  out << "roundtrip ok\n";
  return kExitOk;
}

HalsteadCounts parse_counts(const std::string& s) {
  std::vector<std::int64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long x = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      v.push_back(x);
    } catch (const std::logic_error&) {
      throw MetricsError("bad count '" + item + "'");
    }
  }
  if (v.size() != 4) throw MetricsError("--counts needs eta1,eta2,N1,N2");
  HalsteadCounts c;
  c.eta1 = v[0];
  c.eta2 = v[1];
  c.n1 = v[2];
  c.n2 = v[3];
  return c;
}

int cmd_metrics(const std::string& src, const std::string& counts, const std::string& config,
                bool csv, std::string label, std::ostream& out) {
  HalsteadCounts c;
  if (!src.empty()) {
    const ClassifierConfig cfg = config.empty() ? ClassifierConfig{} : ClassifierConfig::parse(slurp(config));
    c = tokenize_classify(slurp(src), cfg);
    if (label.empty()) label = src;
  } else {
    c = parse_counts(counts);
    if (label.empty()) label = "counts";
  }
  const HalsteadReport r = halstead(c);
  if (csv) out << report_csv({{label, r}});
  else out << format_report(r);
  return kExitOk;
}

int cmd_check(const std::string& rules, std::ostream& out) {
  const std::string text = rules_text(rules);
  const Program all = make_program(text);
  Linter lint(all);
  if (rules == kPreludeOnly || rules.empty()) {
    for (const auto& key : all.predicates()) {
      for (const auto& c : *all.clauses(key.first, key.second)) lint.clause(c);
    }
  } else {
    const Program user = parse_program(text);
    for (const auto& key : user.predicates()) {
      for (const auto& c : *user.clauses(key.first, key.second)) lint.clause(c);
    }
  }
  auto warnings = lint.take();
  for (const auto& w : warnings) out << w << "\n";
  out << "check: " << all.clause_count() << " clauses, " << warnings.size() << " warning"
      << (warnings.size() == 1 ? "" : "s") << "\n";
  return kExitOk;
}

}  // namespace

std::vector<std::string> lint_rules(std::string_view user_rules) {
  const Program all = make_program(user_rules);
  const Program user = parse_program(user_rules);
  Linter lint(all);
  for (const auto& key : user.predicates()) {
    for (const auto& c : *user.clauses(key.first, key.second)) lint.clause(c);
  }
  return lint.take();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"XML transformation with logic rules", "termxform"};
  app.require_subcommand(1);

  Common common;
  auto add_solver_flags = [&common](CLI::App* sub) {
    sub->add_option("--depth-limit", common.depth, "Resolution steps per query");
    sub->add_flag("--occurs-check", common.occurs_check, "Unify with occurs check");
  };

  std::string in, outp, default_text = "drop", goal, src, counts, config, label;
  bool all = false, no_wrap = false, keep_ws = false, pretty = false, csv = false;
  std::optional<std::size_t> max_results;
  std::size_t max = 1;

  auto* transform = app.add_subcommand("transform", "Transform a document with a rule file");
  transform->add_option("--rules", common.rules, "Rule file (.tx)")->required();
  transform->add_option("--in", in, "Input XML")->required();
  transform->add_option("--out", outp, "Output XML")->required();
  transform->add_flag("--all", all, "Write every go/2 solution to numbered files");
  transform->add_flag("--no-wrap", no_wrap, "Emit results as a fragment");
  transform->add_flag("--keep-ws", keep_ws, "Keep whitespace-only text");
  transform->add_flag("--pretty", pretty, "Indent output");
  transform->add_option("--default-text", default_text, "Unmatched text nodes")
      ->check(CLI::IsMember({"drop", "copy"}));
  transform->add_option("--max-results", max_results, "Truncate result lists");
  add_solver_flags(transform);

  auto* query = app.add_subcommand("query", "Run a goal and print solutions");
  query->add_option("--rules", common.rules, "Rule file, or prelude-only");
  query->add_option("--in", in, "XML document bound to the variable Doc");
  query->add_option("--max", max, "Solutions to print, 0 for all");
  query->add_option("goal", goal, "Goal text")->required();
  add_solver_flags(query);

  auto* roundtrip = app.add_subcommand("roundtrip", "Parse, serialize and parse again");
  roundtrip->add_option("--in", in, "Input XML")->required();
  roundtrip->add_flag("--keep-ws", keep_ws, "Keep whitespace-only text");

  auto* metrics = app.add_subcommand("metrics", "Halstead metrics");
  auto* src_opt = metrics->add_option("--src", src, "Rule file to classify");
  auto* counts_opt = metrics->add_option("--counts", counts, "eta1,eta2,N1,N2");
  src_opt->excludes(counts_opt);
  metrics->add_option("--config", config, "Classifier key=value file");
  metrics->add_option("--label", label, "CSV row label");
  metrics->add_flag("--csv", csv, "CSV output");

  auto* check = app.add_subcommand("check", "Lint a rule file");
  check->add_option("--rules", common.rules, "Rule file, or prelude-only")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*transform) {
      return cmd_transform(common, in, outp, all, no_wrap, keep_ws, pretty, default_text, max_results,
                           err);
    }
    if (*query) return cmd_query(common, in, goal, max, out);
    if (*roundtrip) return cmd_roundtrip(in, keep_ws, out);
    if (*metrics) {
      if (src.empty() == counts.empty()) {
        err << "error: metrics needs exactly one of --src and --counts\n";
        return kExitInputError;
      }
      return cmd_metrics(src, counts, config, csv, label, out);
    }
    if (*check) return cmd_check(common.rules, out);
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ValidationError& e) {
    err << "validation error at " << e.path_string() << ": " << e.message() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace termxform
