#pragma once

#include <string_view>

#include "vfc/syntax.hpp"

namespace vfc::syntax::detail {

SyntaxTree parse_tree(std::string_view text, Language lang);

}  // namespace vfc::syntax::detail
