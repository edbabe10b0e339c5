#include "termxform/solver.hpp"

#include <iostream>
#include <unordered_map>

#include "machine.hpp"

namespace termxform {

namespace detail {

Term rename_term(const Term& t, VarId base, std::vector<std::optional<Term>>& cache) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto& slot = cache[t.var_id()];
      if (!slot) slot = Term::variable(base + t.var_id(), t.var_name());
      return *slot;
    }
    case TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(rename_term(a, base, cache));
        changed = changed || args.back().identity() != a.identity();
      }
      return changed ? Term::compound(t.name(), std::move(args)) : t;
    }
    default:
      return t;
  }
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
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(copy_impl(a, b, map));
        changed = changed || args.back().identity() != a.identity();
      }
      return changed ? Term::compound(t.name(), std::move(args)) : t;
    }
    default:
      return t;
  }
}

}  // namespace

Term copy_fresh(const Term& t, Bindings& b) {
  std::unordered_map<VarId, Term> map;
  return copy_impl(t, b, map);
}

Machine::Machine(Solver& solver, Term goal, std::uint64_t* steps)
    : solver_(&solver), steps_(steps != nullptr ? steps : &own_steps_) {
  start_ = solver.bindings().mark();
  cont_ = std::make_shared<Cont>(Cont{std::move(goal), 0, nullptr});
}

bool Machine::unify(const Term& a, const Term& b) {
  return termxform::unify(a, b, bindings(), solver_->options().occurs_check);
}

void Machine::push_goal(const Term& goal, std::size_t barrier) {
  cont_ = std::make_shared<Cont>(Cont{goal, barrier, cont_});
}

void Machine::cut_to(std::size_t h) {
  if (cps_.size() > h) cps_.resize(h);
}

bool Machine::next() {
  if (done_) return false;
  if (started_) {
    if (!backtrack()) {
      done_ = true;
      return false;
    }
  }
  started_ = true;
  if (!run()) {
    done_ = true;
    return false;
  }
  return true;
}

bool Machine::run() {
  while (cont_) {
    ContPtr c = cont_;
    cont_ = c->next;
    if (!step(c->goal, c->cut_barrier)) {
      if (!backtrack()) return false;
    }
  }
  return true;
}

bool Machine::backtrack() {
  while (!cps_.empty()) {
    ChoicePoint& cp = cps_.back();
    bindings().undo_to(cp.mark);
    switch (cp.kind) {
      case ChoicePoint::Kind::Alternative: {
        cont_ = cp.cont;
        cps_.pop_back();
        return true;
      }
      case ChoicePoint::Kind::Clauses:
        if (try_clauses(cp, false)) return true;
        break;
      case ChoicePoint::Kind::Generator:
        if (resume_generator(cp)) return true;
        break;
    }
  }
  return false;
}

// Tries clauses of `cp` from cp.next_clause. On success the continuation is
// set up and the choicepoint either stays (more candidates) or is popped.
// `fresh` means `cp` is not on the stack yet.
bool Machine::try_clauses(ChoicePoint& cp0, bool fresh) {
  ChoicePoint local;
  if (fresh) local = std::move(cp0);
  ChoicePoint& cp = fresh ? local : cp0;
  const std::vector<Clause>& clauses = *cp.clauses;
  Bindings& b = bindings();
  const Term goal = b.deref(cp.goal);
  const ArgKey key = goal.is_compound() ? ArgKey::of(b.deref(goal.arg(0))) : ArgKey{};

  auto next_candidate = [&](std::size_t from) {
    while (from < cp.clause_end && !clauses[from].first_arg.compatible(key)) ++from;
    return from;
  };

  std::size_t i = next_candidate(cp.next_clause);
  while (i < cp.clause_end) {
    const Clause& c = clauses[i];
    const VarId base = b.alloc(c.var_count);
    std::vector<std::optional<Term>> cache(c.var_count);
    const Term head = rename_term(c.head, base, cache);
    if (unify(head, goal)) {
      const std::size_t after = next_candidate(i + 1);
      ContPtr k = cp.cont;
      const std::size_t barrier = cp.barrier;
      for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) {
        k = std::make_shared<Cont>(Cont{rename_term(*it, base, cache), barrier, std::move(k)});
      }
      if (after < cp.clause_end) {
        cp.next_clause = after;
        if (fresh) cps_.push_back(std::move(local));
      } else if (!fresh) {
        cps_.pop_back();
      }
      cont_ = std::move(k);
      return true;
    }
    b.undo_to(cp.mark);
    i = next_candidate(i + 1);
  }
  if (!fresh) cps_.pop_back();
  return false;
}

bool Machine::call_user(const Term& goal, const std::vector<Clause>& clauses, std::size_t begin,
                        std::size_t end, std::size_t barrier) {
  ChoicePoint cp;
  cp.kind = ChoicePoint::Kind::Clauses;
  cp.mark = bindings().mark();
  cp.cont = cont_;
  cp.goal = goal;
  cp.clauses = &clauses;
  cp.next_clause = begin;
  cp.clause_end = end;
  cp.barrier = barrier;
  return try_clauses(cp, true);
}

bool Machine::generate(const Term& target, std::function<std::optional<Term>()> gen) {
  ChoicePoint cp;
  cp.kind = ChoicePoint::Kind::Generator;
  cp.mark = bindings().mark();
  cp.cont = cont_;
  cp.goal = target;
  cp.gen = std::move(gen);
  cps_.push_back(std::move(cp));
  return resume_generator(cps_.back());
}

bool Machine::resume_generator(ChoicePoint& cp) {
  while (auto t = cp.gen()) {
    if (unify(cp.goal, *t)) {
      cont_ = cp.cont;
      return true;
    }
    bindings().undo_to(cp.mark);
  }
  cps_.pop_back();
  return false;
}

namespace {

Term add_args(const Term& g, std::span<const Term> extra) {
  if (extra.empty()) return g;
  if (g.is_atom()) return Term::compound(g.name(), std::vector<Term>(extra.begin(), extra.end()));
  std::vector<Term> args(g.args().begin(), g.args().end());
  args.insert(args.end(), extra.begin(), extra.end());
  return Term::compound(g.name(), std::move(args));
}

}  // namespace

bool Machine::step(const Term& goal0, std::size_t barrier) {
  if (++*steps_ > solver_->step_limit()) {
    throw ResourceError("resolution step limit of " + std::to_string(solver_->step_limit()) +
                        " exceeded");
  }
  Bindings& b = bindings();
  const Term goal = b.deref(goal0);
  if (goal.is_var()) throw EvalError("instantiation error: unbound goal");
  if (!goal.is_callable()) throw EvalError("type error: goal " + render_term(goal) + " is not callable");
  if (solver_->options().trace) solver_->diagnostic("call: " + render_term(b.resolve(goal)) + "\n");

  const std::string& name = goal.name();
  const std::size_t arity = goal.arity();

  // Control constructs.
  switch (arity) {
    case 0:
      if (name == "true") return true;
      if (name == "fail" || name == "false") return false;
      if (name == "!") {
        cut_to(barrier);
        return true;
      }
      break;
    case 1:
      if (name == "not" || name == "\\+") {
        const std::size_t h = cps_.size();
        ChoicePoint cp;
        cp.kind = ChoicePoint::Kind::Alternative;
        cp.mark = b.mark();
        cp.cont = cont_;
        cps_.push_back(std::move(cp));
        push_goal(Term::atom("fail"), 0);
        push_goal(Term::compound("$cut", {Term::integer(static_cast<std::int64_t>(h))}), 0);
        push_goal(goal.arg(0), h + 1);
        return true;
      }
      if (name == "$cut") {
        cut_to(static_cast<std::size_t>(b.deref(goal.arg(0)).int_value()));
        return true;
      }
      break;
    case 2:
      if (name == ",") {
        push_goal(goal.arg(1), barrier);
        push_goal(goal.arg(0), barrier);
        return true;
      }
      if (name == ";" || name == "->") {
        const Term left = b.deref(goal.arg(0));
        const bool ite = name == "->" || left.has_functor("->", 2);
        const std::size_t h = cps_.size();
        ChoicePoint cp;
        cp.kind = ChoicePoint::Kind::Alternative;
        cp.mark = b.mark();
        if (name == ";") {
          cp.cont = std::make_shared<Cont>(Cont{goal.arg(1), barrier, cont_});
        } else {
          cp.cont = std::make_shared<Cont>(Cont{Term::atom("fail"), barrier, cont_});
        }
        cps_.push_back(std::move(cp));
        if (ite) {
          const Term& cond = name == "->" ? goal.arg(0) : left.arg(0);
          const Term& then = name == "->" ? goal.arg(1) : left.arg(1);
          push_goal(then, barrier);
          push_goal(Term::compound("$cut", {Term::integer(static_cast<std::int64_t>(h))}), 0);
          push_goal(cond, h + 1);
        } else {
          push_goal(goal.arg(0), barrier);
        }
        return true;
      }
      if (name == "$call_clause") {
        const Term target = b.deref(goal.arg(0));
        const Term idx = b.deref(goal.arg(1));
        if (!target.is_callable() || !idx.is_int()) return false;
        const auto* cl = solver_->program().clauses(target.name(), target.arity());
        const auto i = static_cast<std::size_t>(idx.int_value());
        if (cl == nullptr || idx.int_value() < 0 || i >= cl->size()) return false;
        return call_user(target, *cl, i, i + 1, cps_.size());
      }
      break;
    case 3:
      if (name == "findall") {
        Machine sub(*solver_, goal.arg(1), steps_);
        std::vector<Term> results;
        while (sub.next()) results.push_back(b.resolve(goal.arg(0)));
        b.undo_to(sub.start_mark());
        std::vector<Term> copies;
        copies.reserve(results.size());
        for (const auto& r : results) copies.push_back(copy_fresh(r, b));
        return unify(goal.arg(2), Term::list(copies));
      }
      break;
    default:
      break;
  }

  if (name == "call" && arity >= 1) {
    const Term target = b.deref(goal.arg(0));
    if (target.is_var()) throw EvalError("instantiation error: call/" + std::to_string(arity));
    if (!target.is_callable()) throw EvalError("type error: " + render_term(target) + " is not callable");
    push_goal(add_args(target, goal.args().subspan(1)), cps_.size());
    return true;
  }

  if (BuiltinFn fn = find_builtin(name, arity)) return fn(*this, goal.args());

  if (const auto* cl = solver_->program().clauses(name, arity)) {
    return call_user(goal, *cl, 0, cl->size(), cps_.size());
  }
  if (!solver_->program().is_declared(name, arity)) solver_->warn_unknown(name, arity);
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------

SolutionStream::SolutionStream(Solver& solver, Term goal,
                               std::vector<std::pair<std::string, Term>> vars)
    : solver_(&solver), goal_(std::move(goal)), vars_(std::move(vars)) {
  start_ = solver.bindings().mark();
  machine_ = std::make_unique<detail::Machine>(solver, goal_, nullptr);
}

SolutionStream::SolutionStream(SolutionStream&&) noexcept = default;
SolutionStream& SolutionStream::operator=(SolutionStream&&) noexcept = default;

SolutionStream::~SolutionStream() {
  if (machine_) solver_->bindings().undo_to(start_);
}

bool SolutionStream::next() { return machine_->next(); }

Term SolutionStream::resolve(const Term& t) const { return solver_->bindings().resolve(t); }

std::vector<std::pair<std::string, Term>> SolutionStream::answer() const {
  std::vector<std::pair<std::string, Term>> out;
  out.reserve(vars_.size());
  for (const auto& [name, v] : vars_) out.emplace_back(name, resolve(v));
  return out;
}

std::uint64_t SolutionStream::steps() const { return machine_->steps(); }

Solver::Solver(const Program& program, SolverOptions options)
    : program_(&program), options_(options) {
  sink_ = [](std::string_view s) { std::cerr << s << std::flush; };
}

SolutionStream Solver::solve(const Term& goal) { return SolutionStream(*this, goal, {}); }

SolutionStream Solver::query(const Term& goal, const std::vector<std::pair<std::string, Term>>& vars,
                             std::size_t var_count) {
  const VarId base = bindings_.alloc(var_count);
  std::vector<std::optional<Term>> cache(var_count);
  Term renamed = detail::rename_term(goal, base, cache);
  std::vector<std::pair<std::string, Term>> named;
  named.reserve(vars.size());
  for (const auto& [n, v] : vars) named.emplace_back(n, detail::rename_term(v, base, cache));
  return SolutionStream(*this, renamed, std::move(named));
}

SolutionStream Solver::query(std::string_view text) {
  std::vector<std::pair<std::string, Term>> vars;
  std::size_t count = 0;
  Term goal = parse_query(text, program_->operators(), &vars, &count);
  return query(goal, vars, count);
}

void Solver::diagnostic(std::string_view message) const {
  if (sink_) sink_(message);
}

void Solver::warn_unknown(const std::string& name, std::size_t arity) {
  if (warned_.emplace(name, arity).second) {
    diagnostic("Warning: unknown predicate " + quote_atom_if_needed(name) + "/" +
               std::to_string(arity) + "\n");
  }
}

std::vector<Term> find_all(Solver& solver, const Term& templ, const Term& goal) {
  std::vector<Term> out;
  auto s = solver.solve(goal);
  while (s.next()) out.push_back(s.resolve(templ));
  return out;
}

}  // namespace termxform
