#include "termxform/xml.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace termxform {

XmlParseError::XmlParseError(std::string origin, int line, int column, std::string expected,
                             std::string found)
    : Error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": expected " +
            expected + ", found " + found),
      origin_(std::move(origin)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

std::string render_path(const std::vector<std::size_t>& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(path[i]);
  }
  return s + "]";
}

}  // namespace

ValidationError::ValidationError(std::vector<std::size_t> path, std::string message)
    : Error("at " + render_path(path) + ": " + message), path_(std::move(path)), message_(std::move(message)) {}

std::string ValidationError::path_string() const { return render_path(path_); }

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_' || c == ':' || c >= 0x80; }

bool is_name_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '-' || c == '_' || c == '.' || c == ':' || c >= 0x80;
}

bool valid_name(std::string_view s) {
  if (s.empty() || !is_name_start(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!is_name_char(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

class XmlParser {
 public:
  XmlParser(const SourceDocument& src, const XmlReadOptions& opts)
      : s_(src.text), origin_(src.origin), opts_(opts) {}

  Term parse() {
    if (s_.starts_with("\xEF\xBB\xBF")) skip(3);
    skip_ws();
    if (looking_at("<?xml") && pos_ + 5 < s_.size() &&
        std::isspace(static_cast<unsigned char>(s_[pos_ + 5]))) {
      const auto end = s_.find("?>", pos_);
      if (end == std::string_view::npos) fail("'?>'", "end of input");
      skip(end + 2 - pos_);
    }
    skip_ws();
    if (looking_at("<!DOCTYPE")) fail("root element", "a DTD (not supported)");
    if (pos_ >= s_.size()) fail("root element", "end of input");
    if (!looking_at("<") || looking_at("<!") || looking_at("<?")) fail("root element", describe_here());
    Term root = element();
    skip_ws();
    if (pos_ < s_.size()) fail("end of document", describe_here());
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& expected, const std::string& found) const {
    throw XmlParseError(origin_, line_, col_, expected, found);
  }

  std::string describe_here() const {
    if (pos_ >= s_.size()) return "end of input";
    std::string snippet(s_.substr(pos_, 12));
    for (auto& c : snippet) {
      if (c == '\n') c = ' ';
    }
    return "'" + snippet + "'";
  }

  bool looking_at(std::string_view p) const { return s_.substr(pos_).starts_with(p); }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) skip(1);
  }

  void expect(std::string_view p) {
    if (!looking_at(p)) fail("'" + std::string(p) + "'", describe_here());
    skip(p.size());
  }

  std::string name() {
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !is_name_start(static_cast<unsigned char>(s_[pos_]))) {
      fail("a name", describe_here());
    }
    while (pos_ < s_.size() && is_name_char(static_cast<unsigned char>(s_[pos_]))) skip(1);
    return std::string(s_.substr(start, pos_ - start));
  }

  // Decodes entity references in s_[start, end); positions errors at the
  // offending `&`.
  std::string decode(std::size_t start, std::size_t end) {
    std::string out;
    out.reserve(end - start);
    while (pos_ < end) {
      const char c = s_[pos_];
      if (c != '&') {
        out += c;
        skip(1);
        continue;
      }
      const auto semi = s_.find(';', pos_);
      if (semi == std::string_view::npos || semi >= end) fail("an entity reference", describe_here());
      const std::string_view ent = s_.substr(pos_ + 1, semi - pos_ - 1);
      if (ent == "lt") {
        out += '<';
      } else if (ent == "gt") {
        out += '>';
      } else if (ent == "amp") {
        out += '&';
      } else if (ent == "quot") {
        out += '"';
      } else if (ent == "apos") {
        out += '\'';
      } else if (ent.starts_with("#")) {
        fail("one of the five predefined entities", "character reference '&" + std::string(ent) + ";'");
      } else {
        fail("one of the five predefined entities", "'&" + std::string(ent) + ";'");
      }
      skip(semi + 1 - pos_);
    }
    return out;
  }

  Term element() {
    expect("<");
    const std::string tag = name();
    std::vector<std::pair<std::string, std::string>> attrs;
    std::set<std::string> seen;
    while (true) {
      const bool had_ws = pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]));
      skip_ws();
      if (looking_at("/>")) {
        skip(2);
        return mk_element(tag, attrs, {});
      }
      if (looking_at(">")) {
        skip(1);
        break;
      }
      if (!had_ws) fail("whitespace, '>' or '/>'", describe_here());
      const int aline = line_;
      const int acol = col_;
      std::string id = name();
      skip_ws();
      expect("=");
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("a quoted value", describe_here());
      const char q = s_[pos_];
      skip(1);
      const auto close = s_.find(q, pos_);
      if (close == std::string_view::npos) fail("closing quote", "end of input");
      const auto lt = s_.find('<', pos_);
      if (lt != std::string_view::npos && lt < close) {
        skip(lt - pos_);
        fail("attribute value without '<'", "'<'");
      }
      std::string value = decode(pos_, close);
      skip(1);
      if (!seen.insert(id).second) {
        throw XmlParseError(origin_, aline, acol, "distinct attribute names", "duplicate '" + id + "'");
      }
      attrs.emplace_back(std::move(id), std::move(value));
    }

    std::vector<Term> children;
    while (true) {
      if (pos_ >= s_.size()) fail("'</" + tag + ">'", "end of input");
      if (looking_at("</")) {
        skip(2);
        const int cl = line_;
        const int cc = col_;
        const std::string closing = name();
        if (closing != tag) {
          throw XmlParseError(origin_, cl, cc, "'</" + tag + ">'", "'</" + closing + ">'");
        }
        skip_ws();
        expect(">");
        return mk_element(tag, attrs, std::move(children));
      }
      if (looking_at("<!--")) {
        skip(4);
        const auto end = s_.find("-->", pos_);
        if (end == std::string_view::npos) fail("'-->'", "end of input");
        std::string text(s_.substr(pos_, end - pos_));
        skip(end + 3 - pos_);
        std::size_t b = 0;
        std::size_t e = text.size();
        while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        children.push_back(mk_comment(text.substr(b, e - b)));
        continue;
      }
      if (looking_at("<![CDATA[")) fail("element content", "a CDATA section (not supported)");
      if (looking_at("<!")) fail("element content", describe_here());
      if (looking_at("<?")) {
        skip(2);
        const auto end = s_.find('>', pos_);
        if (end == std::string_view::npos) fail("'?>'", "end of input");
        std::string text(s_.substr(pos_, end - pos_));
        skip(end + 1 - pos_);
        if (!text.empty() && text.back() == '?') text.pop_back();
        children.push_back(mk_pi(text));
        continue;
      }
      if (looking_at("<")) {
        children.push_back(element());
        continue;
      }
      auto end = s_.find('<', pos_);
      if (end == std::string_view::npos) end = s_.size();
      std::string text = decode(pos_, end);
      bool blank = true;
      for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
      if (!blank || opts_.keep_whitespace) children.push_back(mk_text(text));
    }
  }

  std::string_view s_;
  std::string origin_;
  XmlReadOptions opts_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------

std::optional<ValidationError> check_attributes(const Term& attrs, std::vector<std::size_t>& path) {
  const Term* cur = &attrs;
  while (cur->is_cons()) {
    const Term& a = cur->arg(0);
    std::optional<AttributeEntry> entry;
    if (a.is_atom()) entry = split_attribute(a.name());
    if (!entry || !valid_name(entry->id)) {
      return ValidationError(path, "Error in remaining attributes list: " + render_term(*cur));
    }
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) {
    return ValidationError(path, "Error in remaining attributes list: " + render_term(*cur));
  }
  return std::nullopt;
}

std::optional<ValidationError> check_node(const Term& t, std::vector<std::size_t>& path) {
  auto unexpected = [&]() {
    return ValidationError(path, "Error: " + render_term(t) + " was not expected here!");
  };
  if (is_text(t)) {
    if (!t.arg(0).is_atom()) return unexpected();
    return std::nullopt;
  }
  if (is_comment(t)) {
    if (!t.arg(0).is_atom()) return unexpected();
    const std::string& c = t.arg(0).name();
    if (c.find("--") != std::string::npos || (!c.empty() && c.back() == '-')) {
      return ValidationError(path, "Error: comment " + render_term(t.arg(0)) + " contains '--'");
    }
    return std::nullopt;
  }
  if (is_pi(t)) {
    if (!t.arg(0).is_atom()) return unexpected();
    const std::string& p = t.arg(0).name();
    if (p.find('>') != std::string::npos || (!p.empty() && p.back() == '?')) {
      return ValidationError(path, "Error: processing instruction " + render_term(t.arg(0)) +
                                       " cannot be written");
    }
    return std::nullopt;
  }
  if (!is_element(t)) return unexpected();
  const Term& name = t.arg(0);
  if (!name.is_atom() || name.is_nil() || !valid_name(name.name())) {
    return ValidationError(path, "Error: " + render_term(name) + " is not a valid element name");
  }
  if (auto e = check_attributes(t.arg(1), path)) return e;
  const Term* cur = &t.arg(2);
  std::size_t i = 0;
  while (cur->is_cons()) {
    path.push_back(i);
    if (auto e = check_node(cur->arg(0), path)) return e;
    path.pop_back();
    cur = &cur->arg(1);
    ++i;
  }
  if (!cur->is_nil()) {
    path.push_back(i);
    auto e = ValidationError(path, "Error: " + render_term(*cur) + " was not expected here!");
    return e;
  }
  return std::nullopt;
}

void write_node(const Term& t, const XmlWriteOptions& opts, int depth, bool inline_mode, std::string& out) {
  auto indent = [&](int d) {
    if (opts.pretty && !inline_mode) out.append(static_cast<std::size_t>(d) * 2, ' ');
  };
  auto newline = [&]() {
    if (opts.pretty && !inline_mode) out += '\n';
  };
  if (is_text(t)) {
    out += escape_text(t.arg(0).name());
    return;
  }
  if (is_comment(t)) {
    indent(depth);
    out += "<!--" + t.arg(0).name() + "-->";
    newline();
    return;
  }
  if (is_pi(t)) {
    indent(depth);
    out += "<?" + t.arg(0).name() + "?>";
    newline();
    return;
  }
  indent(depth);
  out += '<';
  out += t.arg(0).name();
  const auto attrs = *list_items(t.arg(1));
  for (const auto& a : attrs) {
    auto e = split_attribute(a.name());
    out += ' ';
    out += e->id;
    out += "=\"";
    out += escape_attribute(e->value);
    out += '"';
  }
  const auto kids = *list_items(t.arg(2));
  if (kids.empty()) {
    out += "/>";
    newline();
    return;
  }
  out += '>';
  bool has_text = false;
  for (const auto& k : kids) has_text = has_text || is_text(k);
  const bool child_inline = inline_mode || has_text || !opts.pretty;
  if (!child_inline) out += '\n';
  for (const auto& k : kids) write_node(k, opts, depth + 1, child_inline, out);
  if (!child_inline) indent(depth);
  out += "</";
  out += t.arg(0).name();
  out += '>';
  newline();
}

}  // namespace

Term parse_document(const SourceDocument& src, const XmlReadOptions& opts) {
  XmlParser p(src, opts);
  return p.parse();
}

Term parse_document(std::string_view text, const XmlReadOptions& opts) {
  return parse_document(SourceDocument{std::string(text), "<memory>"}, opts);
}

SourceDocument read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return SourceDocument{ss.str(), path};
}

std::optional<ValidationError> check_serializable(const Term& t) {
  std::vector<std::size_t> path;
  return check_node(t, path);
}

std::string serialize_document(const Term& t, const XmlWriteOptions& opts) {
  if (auto e = check_serializable(t)) throw *e;
  std::string out;
  write_node(t, opts, 0, false, out);
  if (opts.pretty && !out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string serialize_fragment(const std::vector<Term>& nodes, const XmlWriteOptions& opts) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (auto e = check_serializable(nodes[i])) {
      std::vector<std::size_t> path{i};
      path.insert(path.end(), e->path().begin(), e->path().end());
      throw ValidationError(path, e->message());
    }
  }
  for (const auto& n : nodes) {
    write_node(n, opts, 0, false, out);
    if (!opts.pretty) out += '\n';
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos) throw Error("unterminated entity reference");
    const std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "lt") {
      out += '<';
    } else if (ent == "gt") {
      out += '>';
    } else if (ent == "amp") {
      out += '&';
    } else if (ent == "quot") {
      out += '"';
    } else if (ent == "apos") {
      out += '\'';
    } else {
      throw Error("unsupported entity '&" + std::string(ent) + ";'");
    }
    i = semi + 1;
  }
  return out;
}

std::optional<std::vector<std::size_t>> first_difference(const Term& a, const Term& b) {
  if (term_equal(a, b)) return std::nullopt;
  std::vector<std::size_t> path;
  Term x = a;
  Term y = b;
  while (true) {
    if (!is_element(x) || !is_element(y) || !term_equal(x.arg(0), y.arg(0)) ||
        !term_equal(x.arg(1), y.arg(1))) {
      return path;
    }
    auto xs = list_items(x.arg(2));
    auto ys = list_items(y.arg(2));
    if (!xs || !ys) return path;
    std::size_t i = 0;
    while (i < xs->size() && i < ys->size() && term_equal((*xs)[i], (*ys)[i])) ++i;
    path.push_back(i);
    if (i >= xs->size() || i >= ys->size()) return path;
    x = (*xs)[i];
    y = (*ys)[i];
  }
}

}  // namespace termxform
