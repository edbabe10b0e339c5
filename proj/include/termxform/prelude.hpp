#pragma once

#include <string_view>
#include <vector>

#include "termxform/program.hpp"
#include "termxform/term.hpp"

namespace termxform {

/// Source text of the built-in rule base.
std::string_view prelude_source();

/// Puts the prelude in front of `p`: prelude clauses come first in every
/// predicate, the user's clauses follow in their original order.
void load_prelude(Program& p);

/// Prelude plus the given user rules.
Program make_program(std::string_view user_rules);

/// Stable ascending sort of attribute atoms by identifier (byte order).
/// Throws ValidationError naming a malformed entry.
std::vector<Term> canon(const std::vector<Term>& attrs);
Term canon_list(const Term& attrs);

/// Structural equality with attribute lists compared after canon.
bool equals(const Term& a, const Term& b);

/// Relation facts of a flat document: one fact named after the root per
/// child element, arguments being the attribute values in canon order.
/// Integer-looking values become integers. Throws Error on heterogeneous
/// attribute sets.
std::vector<Term> tree_to_relation(const Term& doc);

/// Appends `facts` to `p` as clauses.
void add_facts(Program& p, const std::vector<Term>& facts);

}  // namespace termxform
