#include "termxform/bindings.hpp"

#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace termxform {

Term Bindings::fresh(std::string_view name) {
  slots_.emplace_back();
  return Term::variable(slots_.size() - 1, name);
}

const Term* Bindings::lookup(VarId id) const {
  if (id >= slots_.size() || !slots_[id]) return nullptr;
  return &*slots_[id];
}

Term Bindings::deref(const Term& t) const {
  Term cur = t;
  while (cur.is_var()) {
    const Term* next = lookup(cur.var_id());
    if (next == nullptr) break;
    cur = *next;
  }
  return cur;
}

void Bindings::bind(VarId id, Term value) {
  if (id >= slots_.size()) slots_.resize(id + 1);
  slots_[id] = std::move(value);
  trail_.push_back(id);
}

void Bindings::undo_trail(std::size_t trail_mark) {
  while (trail_.size() > trail_mark) {
    const VarId id = trail_.back();
    trail_.pop_back();
    if (id < slots_.size()) slots_[id].reset();
  }
}

void Bindings::undo_to(const Mark& m) {
  undo_trail(m.trail);
  if (slots_.size() > m.vars) slots_.resize(m.vars);
}

namespace {

Term resolve_impl(const Term& t, const Bindings& b, std::unordered_set<VarId>& active) {
  switch (t.kind()) {
    case TermKind::Var: {
      const Term* bound = b.lookup(t.var_id());
      if (bound == nullptr || active.contains(t.var_id())) return t;
      active.insert(t.var_id());
      Term r = resolve_impl(*bound, b, active);
      active.erase(t.var_id());
      return r;
    }
    case TermKind::Compound: {
      // Lists are walked iteratively so long spines do not deepen the stack.
      if (t.is_cons()) {
        std::vector<Term> items;
        std::vector<VarId> entered;
        Term cur = t;
        while (true) {
          if (cur.is_var()) {
            const Term* bound = b.lookup(cur.var_id());
            if (bound == nullptr || active.contains(cur.var_id())) break;
            active.insert(cur.var_id());
            entered.push_back(cur.var_id());
            cur = *bound;
            continue;
          }
          if (!cur.is_cons()) break;
          items.push_back(resolve_impl(cur.arg(0), b, active));
          cur = cur.arg(1);
        }
        Term tail = cur.is_var() ? cur : resolve_impl(cur, b, active);
        for (VarId id : entered) active.erase(id);
        return Term::list(items, tail);
      }
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(resolve_impl(a, b, active));
        changed = changed || args.back().identity() != a.identity();
      }
      if (!changed) return t;
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

bool occurs_in(VarId id, const Term& t, const Bindings& b) {
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = b.deref(stack.back());
    stack.pop_back();
    if (cur.is_var()) {
      if (cur.var_id() == id) return true;
    } else if (cur.is_compound()) {
      for (const auto& a : cur.args()) stack.push_back(a);
    }
  }
  return false;
}

}  // namespace

Term Bindings::resolve(const Term& t) const {
  std::unordered_set<VarId> active;
  return resolve_impl(t, *this, active);
}

bool unify(const Term& a, const Term& b, Bindings& bindings, bool occurs_check) {
  const std::size_t mark = bindings.trail_size();
  std::vector<std::pair<Term, Term>> stack;
  stack.emplace_back(a, b);
  while (!stack.empty()) {
    auto [x0, y0] = std::move(stack.back());
    stack.pop_back();
    Term x = bindings.deref(x0);
    Term y = bindings.deref(y0);
    if (x.identity() == y.identity()) continue;
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
    if (x.is_var() || y.is_var()) {
      // Bind the younger variable to the older one so chains stay short.
      if (x.is_var() && y.is_var() && y.var_id() > x.var_id()) std::swap(x, y);
      if (!x.is_var()) std::swap(x, y);
      if (occurs_check && !y.is_var() && occurs_in(x.var_id(), y, bindings)) {
        bindings.undo_trail(mark);
        return false;
      }
      bindings.bind(x.var_id(), y);
      continue;
    }
    if (x.kind() != y.kind()) {
      bindings.undo_trail(mark);
      return false;
    }
    switch (x.kind()) {
      case TermKind::Atom:
        if (x.name() != y.name()) {
          bindings.undo_trail(mark);
          return false;
        }
        break;
      case TermKind::Int:
      case TermKind::Float:
        if (!term_equal(x, y)) {
          bindings.undo_trail(mark);
          return false;
        }
        break;
      case TermKind::Compound:
        if (x.arity() != y.arity() || x.name() != y.name()) {
          bindings.undo_trail(mark);
          return false;
        }
        for (std::size_t i = x.arity(); i-- > 0;) stack.emplace_back(x.arg(i), y.arg(i));
        break;
      case TermKind::Var:
        break;
    }
  }
  return true;
}

namespace {

Term copy_impl(const Term& t, Bindings& b, std::unordered_map<VarId, Term>& map) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = map.find(t.var_id());
      if (it != map.end()) return it->second;
      Term v = b.fresh(t.var_name());
      map.emplace(t.var_id(), v);
      return v;
    }
    case TermKind::Compound: {
      if (is_ground(t)) return t;
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(copy_impl(a, b, map));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

}  // namespace

Term copy_with_fresh_vars(const Term& t, Bindings& bindings) {
  std::unordered_map<VarId, Term> map;
  return copy_impl(bindings.resolve(t), bindings, map);
}

}  // namespace termxform
