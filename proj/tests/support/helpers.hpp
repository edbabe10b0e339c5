#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "termxform/prelude.hpp"
#include "termxform/program.hpp"
#include "termxform/reader.hpp"
#include "termxform/solver.hpp"

namespace termxform::testing {

inline Term T(std::string_view text) { return parse_term(text); }

/// Rendered values of `var` over the first `max` solutions of `goal`.
inline std::vector<std::string> values(const Program& p, std::string_view goal, std::string_view var,
                                       std::size_t max = 1000, SolverOptions opts = {}) {
  Solver s(p, opts);
  s.set_diagnostic_sink([](std::string_view) {});
  auto stream = s.query(goal);
  std::vector<std::string> out;
  while (out.size() < max && stream.next()) {
    for (const auto& [name, value] : stream.answer()) {
      if (name == var) out.push_back(render_term(value));
    }
  }
  return out;
}

inline std::size_t count_solutions(const Program& p, std::string_view goal, std::size_t max = 100000) {
  Solver s(p);
  s.set_diagnostic_sink([](std::string_view) {});
  auto stream = s.query(goal);
  std::size_t n = 0;
  while (n < max && stream.next()) ++n;
  return n;
}

inline bool succeeds(const Program& p, std::string_view goal) { return count_solutions(p, goal, 1) == 1; }

/// All solutions of transform(Query, Y) for a query built around `doc`.
inline std::vector<Term> solve_for(Solver& s, const Term& goal_with_y, const Term& y) {
  return find_all(s, y, goal_with_y);
}

}  // namespace termxform::testing
