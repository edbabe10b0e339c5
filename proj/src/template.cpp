#include "termxform/template.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "termxform/prelude.hpp"

namespace termxform {

namespace {

SolverOptions with_text_mode(SolverOptions s, const TraversalOptions& t) {
  s.copy_unmatched_text = t.unmatched_text == UnmatchedText::Copy;
  return s;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TemplateEngine::TemplateEngine(const Program& program, TraversalOptions options,
                               SolverOptions solver_options)
    : program_(program),
      options_(options),
      solver_(program, with_text_mode(solver_options, options)) {}

bool TemplateEngine::apply_templates(const Term& node, std::vector<Term>& out) {
  const auto* clauses = program_.clauses("template", 2);
  if (clauses == nullptr) return false;
  const ArgKey key = ArgKey::of(node);
  Bindings& b = solver_.bindings();
  for (std::size_t i = 0; i < clauses->size(); ++i) {
    const Clause& c = (*clauses)[i];
    if (!c.first_arg.compatible(key)) continue;
    const auto mark = b.mark();
    const Term result = Term::variable(b.alloc(1), "Res");
    const Term goal = Term::compound(
        "$call_clause", {Term::compound("template", {node, result}),
                         Term::integer(static_cast<std::int64_t>(i))});
    std::optional<Term> got;
    {
      SolutionStream s = solver_.solve(goal);
      if (s.next()) got = s.resolve(result);
    }
    b.undo_to(mark);
    if (!got) continue;
    auto items = list_items(*got);
    if (!items) {
      throw ContractError("template clause " + std::to_string(i + 1) + " (line " +
                          std::to_string(c.line) + ") produced " + render_term(*got) +
                          ", which is not a list");
    }
    out.insert(out.end(), items->begin(), items->end());
    return true;
  }
  return false;
}

void TemplateEngine::walk(const Term& node, std::vector<Term>& out) {
  if (is_pi(node) || is_comment(node)) return;
  if (apply_templates(node, out)) return;
  if (is_element(node)) {
    auto kids = list_items(node.arg(2));
    if (!kids) throw ContractError("child list of " + render_term(node.arg(0)) + " is not a proper list");
    for (const auto& k : *kids) {
      if (k.is_compound() && !k.has_functor(".", 2)) walk(k, out);
    }
    return;
  }
  if (is_text(node) && options_.unmatched_text == UnmatchedText::Copy) out.push_back(node);
}

void TemplateEngine::truncate(std::vector<Term>& out) const {
  if (options_.max_results && out.size() > *options_.max_results) out.resize(*options_.max_results);
}

std::vector<Term> TemplateEngine::traverse(const Term& node) {
  std::vector<Term> out;
  walk(node, out);
  truncate(out);
  return out;
}

std::vector<Term> TemplateEngine::traverse_elements(const Term& nodes) {
  auto items = list_items(nodes);
  if (!items) throw ContractError("traverse_elements needs a proper list, got " + render_term(nodes));
  std::vector<Term> out;
  for (const auto& k : *items) {
    if (k.is_compound() && !k.has_functor(".", 2)) walk(k, out);
  }
  truncate(out);
  return out;
}

std::vector<Term> traverse(const Term& node, const Program& program, const TraversalOptions& options) {
  TemplateEngine engine(program, options);
  return engine.traverse(node);
}

std::vector<Term> traverse_elements(const Term& nodes, const Program& program,
                                    const TraversalOptions& options) {
  TemplateEngine engine(program, options);
  return engine.traverse_elements(nodes);
}

TransformResult transform_document(const Term& doc, const Program& program,
                                   const TransformOptions& options) {
  TransformResult r;
  if (program.defines("go", 2)) {
    r.used_go = true;
    Solver solver(program, with_text_mode(options.solver, options.traversal));
    Bindings& b = solver.bindings();
    const Term result = Term::variable(b.alloc(1), "Result");
    SolutionStream s = solver.solve(Term::compound("go", {doc, result}));
    while (s.next()) {
      const Term value = s.resolve(result);
      std::vector<Term> nodes;
      if (auto items = list_items(value)) {
        nodes = std::move(*items);
      } else {
        nodes.push_back(value);
      }
      if (options.traversal.max_results && nodes.size() > *options.traversal.max_results) {
        nodes.resize(*options.traversal.max_results);
      }
      if (nodes.empty()) continue;
      r.solutions.push_back(std::move(nodes));
      if (!options.all) break;
    }
    return r;
  }
  TemplateEngine engine(program, options.traversal, options.solver);
  auto nodes = engine.traverse(doc);
  if (!nodes.empty()) r.solutions.push_back(std::move(nodes));
  return r;
}

Term wrap_results(const std::vector<Term>& nodes) {
  if (nodes.size() == 1) return nodes.front();
  return mk_element("result", {}, nodes);
}

std::string render_results(const std::vector<Term>& nodes, const TransformOptions& options) {
  if (options.wrap) return serialize_document(wrap_results(nodes), options.write);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (auto err = check_serializable(nodes[i])) {
      std::vector<std::size_t> path{i};
      path.insert(path.end(), err->path().begin(), err->path().end());
      throw ValidationError(path, err->message());
    }
  }
  return serialize_fragment(nodes, options.write);
}

std::filesystem::path numbered_output(const std::filesystem::path& output, std::size_t index) {
  std::filesystem::path p = output;
  const auto ext = output.extension();
  p.replace_filename(output.stem().string() + "." + std::to_string(index) + ext.string());
  return p;
}

std::string TransformReport::summary() const {
  std::ostringstream os;
  os << "mode: " << (used_go ? "go/2" : "templates") << "\n";
  os << "solutions: " << solutions << "\n";
  if (no_solution()) os << "no solution, empty output\n";
  for (const auto& w : written) os << "wrote: " << w.string() << "\n";
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "time: parse " << parse_ms << " ms, solve " << solve_ms << " ms, write " << write_ms
     << " ms\n";
  return os.str();
}

TransformReport transform_file(const std::filesystem::path& input,
                               const std::filesystem::path& rules,
                               const std::filesystem::path& output,
                               const TransformOptions& options) {
  TransformReport report;
  auto t0 = std::chrono::steady_clock::now();
  const Term doc = parse_document(read_source(input.string()), options.read);
  const Program program = make_program(slurp(rules));
  report.parse_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const TransformResult result = transform_document(doc, program, options);
  report.used_go = result.used_go;
  report.solutions = result.solutions.size();
  report.solve_ms = ms_since(t0);
  if (report.no_solution()) return report;

  t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (std::size_t i = 0; i < result.solutions.size(); ++i) {
    auto path = options.all ? numbered_output(output, i + 1) : output;
    files.emplace_back(std::move(path), render_results(result.solutions[i], options));
  }
  for (const auto& [path, text] : files) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    report.written.push_back(path);
  }
  report.write_ms = ms_since(t0);
  return report;
}

}  // namespace termxform
