#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "termxform/term.hpp"

namespace termxform::detail {

/// Decodes UTF-8 into code points. An invalid byte b decodes to 0xDC00+b so
/// that encoding restores the original bytes.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
std::string encode_code_point(char32_t c);

/// Integer or float spelled by the whole of `s` (surrounding blanks allowed).
std::optional<Term> parse_number(std::string_view s);

/// Text of an atom or number as written by write/1.
std::string atomic_text(const Term& t);

/// Concatenated text content of a node (text children of elements, depth-first).
std::string node_text(const Term& t);

std::string trim(std::string_view s);

}  // namespace termxform::detail
