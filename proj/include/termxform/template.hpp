#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "termxform/program.hpp"
#include "termxform/solver.hpp"
#include "termxform/term.hpp"
#include "termxform/xml.hpp"

namespace termxform {

/// A rule program broke the traversal contract, e.g. a template produced
/// something other than a list.
class ContractError : public Error {
 public:
  using Error::Error;
};

enum class UnmatchedText { Drop, Copy };

struct TraversalOptions {
  UnmatchedText unmatched_text = UnmatchedText::Drop;
  /// Truncates a traversal result to this many nodes.
  std::optional<std::size_t> max_results;
};

/// Pre-order template walk over documents with one solver. Each node is
/// offered to the user's template/2 clauses in textual order and the first
/// clause that succeeds wins.
class TemplateEngine {
 public:
  TemplateEngine(const Program& program, TraversalOptions options = {},
                 SolverOptions solver_options = {});

  std::vector<Term> traverse(const Term& node);
  /// `nodes` must be a proper list term.
  std::vector<Term> traverse_elements(const Term& nodes);

  Solver& solver() { return solver_; }

 private:
  void walk(const Term& node, std::vector<Term>& out);
  bool apply_templates(const Term& node, std::vector<Term>& out);
  void truncate(std::vector<Term>& out) const;

  const Program& program_;
  TraversalOptions options_;
  Solver solver_;
};

std::vector<Term> traverse(const Term& node, const Program& program,
                           const TraversalOptions& options = {});
std::vector<Term> traverse_elements(const Term& nodes, const Program& program,
                                    const TraversalOptions& options = {});

struct TransformOptions {
  TraversalOptions traversal;
  SolverOptions solver;
  XmlReadOptions read;
  XmlWriteOptions write;
  /// Every go/2 solution instead of only the first.
  bool all = false;
  /// Put multi-node results under element(result,[],...). Off emits a fragment.
  bool wrap = true;
};

/// Result lists of a transformation: one per solution, in solution order.
/// Empty result lists are not counted as solutions.
struct TransformResult {
  bool used_go = false;
  std::vector<std::vector<Term>> solutions;
};

/// Runs go(Doc,Result) when the program defines go/2, template traversal
/// otherwise. A go/2 result may be a node list or a single node.
TransformResult transform_document(const Term& doc, const Program& program,
                                   const TransformOptions& options);

/// The single output root: the node itself, or a synthetic result element.
Term wrap_results(const std::vector<Term>& nodes);

/// Validates and serializes one result list.
std::string render_results(const std::vector<Term>& nodes, const TransformOptions& options);

/// `out.xml` becomes `out.3.xml` for solution 3.
std::filesystem::path numbered_output(const std::filesystem::path& output, std::size_t index);

struct TransformReport {
  bool used_go = false;
  std::size_t solutions = 0;
  std::vector<std::filesystem::path> written;
  double parse_ms = 0;
  double solve_ms = 0;
  double write_ms = 0;

  bool no_solution() const { return solutions == 0; }
  /// Human-readable lines for standard error.
  std::string summary() const;
};

/// Reads `input` and `rules`, transforms, and writes output files. Nothing
/// is written unless every selected solution validates. Parse errors,
/// validation errors and solver errors propagate as exceptions.
TransformReport transform_file(const std::filesystem::path& input,
                               const std::filesystem::path& rules,
                               const std::filesystem::path& output,
                               const TransformOptions& options);

}  // namespace termxform
