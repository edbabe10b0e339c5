#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "termxform/term.hpp"

namespace termxform {

/// Substitution from variable ids to terms with an undo trail.
///
/// Variable ids index a dense slot table. `fresh()` hands out the next slot;
/// binding an id beyond the table grows it, so terms built elsewhere can be
/// unified here too. Backtracking rewinds the trail to a mark and may drop
/// slots allocated after that point.
class Bindings {
 public:
  struct Mark {
    std::size_t trail = 0;
    std::size_t vars = 0;
  };

  Term fresh(std::string_view name = {});
  std::size_t var_count() const { return slots_.size(); }
  /// Reserves `n` consecutive unbound slots and returns the first id.
  VarId alloc(std::size_t n) {
    const VarId base = slots_.size();
    slots_.resize(slots_.size() + n);
    return base;
  }

  /// Follows variable chains until an unbound variable or a non-variable.
  Term deref(const Term& t) const;
  const Term* lookup(VarId id) const;
  bool is_bound(VarId id) const { return lookup(id) != nullptr; }

  void bind(VarId id, Term value);

  Mark mark() const { return {trail_.size(), slots_.size()}; }
  /// Unbinds everything bound since `m` and forgets slots allocated since.
  void undo_to(const Mark& m);
  /// Unbinds everything bound since `m` but keeps all slots.
  void undo_trail(std::size_t trail_mark);

  /// Deep substitution. A variable that is reached again through its own
  /// binding (a cyclic term) is left unresolved.
  Term resolve(const Term& t) const;

  std::size_t trail_size() const { return trail_.size(); }

 private:
  std::vector<std::optional<Term>> slots_;
  std::vector<VarId> trail_;
};

/// Unifies `a` and `b`, extending `b`. On failure every binding made during
/// the attempt is undone.
bool unify(const Term& a, const Term& b, Bindings& bindings, bool occurs_check = false);

/// Copy of `t` (after resolution) whose free variables are replaced by fresh
/// ones; variables shared inside `t` stay shared in the copy.
Term copy_with_fresh_vars(const Term& t, Bindings& bindings);

}  // namespace termxform
