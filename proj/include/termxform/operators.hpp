#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace termxform {

enum class Fixity { XFX, XFY, YFX, FY, FX, XF, YF };

std::string_view fixity_name(Fixity f);
std::optional<Fixity> parse_fixity(std::string_view name);

enum class OperatorClass { Prefix, Infix, Postfix };

OperatorClass operator_class(Fixity f);

struct OperatorDef {
  std::string name;
  int precedence = 0;
  Fixity fixity = Fixity::XFX;
};

/// Operator table keyed by name; one definition per name and class.
class OperatorTable {
 public:
  /// Adds or replaces a definition. Precedence 0 removes the operator.
  void add(const OperatorDef& def);

  std::optional<OperatorDef> prefix(std::string_view name) const;
  std::optional<OperatorDef> infix(std::string_view name) const;
  std::optional<OperatorDef> postfix(std::string_view name) const;

  /// First definition found for `name` in infix, prefix, postfix order.
  std::optional<OperatorDef> lookup(std::string_view name) const;

  bool is_operator(std::string_view name) const;

  std::vector<OperatorDef> all() const;

 private:
  struct Entry {
    std::optional<OperatorDef> prefix, infix, postfix;
  };
  std::map<std::string, Entry, std::less<>> ops_;
};

/// Standard clause-level operators plus the navigation and aggregation
/// operators used by transformation rules.
std::vector<OperatorDef> default_operators();
OperatorTable default_operator_table();

}  // namespace termxform
