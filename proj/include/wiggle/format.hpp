#pragma once

// Text forms used by the command line: 17 significant digits and the
// "re+imi" parameter literal.

#include <string>
#include <string_view>

#include "wiggle/geometry.hpp"

namespace wiggle {

/// %.17g, with ".0" appended when the result reads as an integer.
std::string format_number(double v);

/// Parses "0.3409+0.43486i", "0.5-0.2i", "0.3+0i", "0.4" or "0.2i".
/// Throws InvalidParameter on anything else.
Complex parse_complex(std::string_view text);

}  // namespace wiggle
