#pragma once

// Internal resolution machine shared by the solver and the builtins.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "termxform/solver.hpp"

namespace termxform::detail {

struct Cont;
using ContPtr = std::shared_ptr<const Cont>;

/// One pending goal. `cut_barrier` is the choicepoint height a `!` in this
/// goal cuts back to.
struct Cont {
  Term goal;
  std::size_t cut_barrier = 0;
  ContPtr next;
};

struct ChoicePoint {
  enum class Kind { Clauses, Alternative, Generator };
  Kind kind = Kind::Alternative;
  Bindings::Mark mark;
  /// Clauses and Generator: what runs after the goal. Alternative: the
  /// goals to run instead.
  ContPtr cont;
  Term goal;
  const std::vector<Clause>* clauses = nullptr;
  std::size_t next_clause = 0;
  std::size_t clause_end = 0;
  std::size_t barrier = 0;
  /// Yields the next term to unify with `goal`, or nullopt when exhausted.
  std::function<std::optional<Term>()> gen;
};

class Machine {
 public:
  Machine(Solver& solver, Term goal, std::uint64_t* steps);

  bool next();

  Solver& solver() { return *solver_; }
  Bindings& bindings() { return solver_->bindings(); }
  const Bindings::Mark& start_mark() const { return start_; }

  bool unify(const Term& a, const Term& b);

  /// Runs `goal` next, before the current continuation.
  void push_goal(const Term& goal, std::size_t barrier);
  std::size_t height() const { return cps_.size(); }
  void cut_to(std::size_t height);

  /// Nondeterministic builtin support: each generated term is unified with
  /// `target` in turn, later ones on backtracking.
  bool generate(const Term& target, std::function<std::optional<Term>()> gen);

  std::uint64_t steps() const { return *steps_; }
  std::uint64_t* step_counter() { return steps_; }

 private:
  bool run();
  bool backtrack();
  bool step(const Term& goal, std::size_t barrier);
  bool call_user(const Term& goal, const std::vector<Clause>& clauses, std::size_t begin,
                 std::size_t end, std::size_t barrier);
  bool try_clauses(ChoicePoint& cp, bool fresh);
  bool resume_generator(ChoicePoint& cp);

  Solver* solver_;
  std::uint64_t* steps_;
  std::uint64_t own_steps_ = 0;
  ContPtr cont_;
  std::vector<ChoicePoint> cps_;
  Bindings::Mark start_;
  bool started_ = false;
  bool done_ = false;
};

using BuiltinFn = bool (*)(Machine&, std::span<const Term>);

/// Builtin predicate implementation for name/arity, or nullptr.
BuiltinFn find_builtin(std::string_view name, std::size_t arity);

/// Thrown by evaluation when a needed value is an unbound variable; `is/2`
/// turns it into failure.
class InstantiationError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// Renames clause-local variables 0..n-1 to base..base+n-1.
Term rename_term(const Term& t, VarId base, std::vector<std::optional<Term>>& cache);

/// Copies `t` giving each distinct variable a fresh slot.
Term copy_fresh(const Term& t, Bindings& b);

}  // namespace termxform::detail
