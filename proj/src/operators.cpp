#include "termxform/operators.hpp"

namespace termxform {

std::string_view fixity_name(Fixity f) {
  switch (f) {
    case Fixity::XFX: return "xfx";
    case Fixity::XFY: return "xfy";
    case Fixity::YFX: return "yfx";
    case Fixity::FY: return "fy";
    case Fixity::FX: return "fx";
    case Fixity::XF: return "xf";
    case Fixity::YF: return "yf";
  }
  return "?";
}

std::optional<Fixity> parse_fixity(std::string_view name) {
  if (name == "xfx") return Fixity::XFX;
  if (name == "xfy") return Fixity::XFY;
  if (name == "yfx") return Fixity::YFX;
  if (name == "fy") return Fixity::FY;
  if (name == "fx") return Fixity::FX;
  if (name == "xf") return Fixity::XF;
  if (name == "yf") return Fixity::YF;
  return std::nullopt;
}

OperatorClass operator_class(Fixity f) {
  switch (f) {
    case Fixity::FY:
    case Fixity::FX:
      return OperatorClass::Prefix;
    case Fixity::XF:
    case Fixity::YF:
      return OperatorClass::Postfix;
    default:
      return OperatorClass::Infix;
  }
}

void OperatorTable::add(const OperatorDef& def) {
  Entry& e = ops_[def.name];
  std::optional<OperatorDef>* slot = nullptr;
  switch (operator_class(def.fixity)) {
    case OperatorClass::Prefix: slot = &e.prefix; break;
    case OperatorClass::Infix: slot = &e.infix; break;
    case OperatorClass::Postfix: slot = &e.postfix; break;
  }
  if (def.precedence == 0) {
    slot->reset();
  } else {
    *slot = def;
  }
}

std::optional<OperatorDef> OperatorTable::prefix(std::string_view name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? std::nullopt : it->second.prefix;
}

std::optional<OperatorDef> OperatorTable::infix(std::string_view name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? std::nullopt : it->second.infix;
}

std::optional<OperatorDef> OperatorTable::postfix(std::string_view name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? std::nullopt : it->second.postfix;
}

std::optional<OperatorDef> OperatorTable::lookup(std::string_view name) const {
  if (auto d = infix(name)) return d;
  if (auto d = prefix(name)) return d;
  return postfix(name);
}

bool OperatorTable::is_operator(std::string_view name) const { return lookup(name).has_value(); }

std::vector<OperatorDef> OperatorTable::all() const {
  std::vector<OperatorDef> out;
  for (const auto& [name, e] : ops_) {
    for (const auto* d : {&e.prefix, &e.infix, &e.postfix}) {
      if (*d) out.push_back(**d);
    }
  }
  return out;
}

std::vector<OperatorDef> default_operators() {
  std::vector<OperatorDef> ops = {
      {":-", 1200, Fixity::XFX}, {":-", 1200, Fixity::FX}, {"?-", 1200, Fixity::FX},
      {";", 1100, Fixity::XFY},  {"->", 1050, Fixity::XFY}, {",", 1000, Fixity::XFY},
      {"\\+", 900, Fixity::FY},
  };
  for (const char* rel : {"=", "\\=", "==", "\\==", "is", "<", ">", "=<", ">=", "=:=", "=\\=", "=..",
                          "@<", "@>", "@=<", "@>="}) {
    ops.push_back({rel, 700, Fixity::XFX});
  }
  ops.push_back({"+", 500, Fixity::YFX});
  ops.push_back({"-", 500, Fixity::YFX});
  ops.push_back({"*", 400, Fixity::YFX});
  ops.push_back({"//", 400, Fixity::YFX});
  ops.push_back({"mod", 400, Fixity::YFX});
  ops.push_back({"-", 200, Fixity::FY});
  ops.push_back({"+", 200, Fixity::FY});

  // Navigation and aggregation operators of the transformation rule set.
  for (const char* name : {"/", "^", "@", "?", "id", "#", "c", "sort", "level"}) {
    ops.push_back({name, 100, Fixity::YFX});
  }
  for (const char* name : {"atts", "sortbyName", "child", "descendant", "copy", "copy_of", "last",
                           "count", "name", "distinct"}) {
    ops.push_back({name, 100, Fixity::FY});
  }
  return ops;
}

OperatorTable default_operator_table() {
  OperatorTable table;
  for (const auto& op : default_operators()) table.add(op);
  return table;
}

}  // namespace termxform
