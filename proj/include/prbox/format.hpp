#pragma once

#include <string>
#include <string_view>

namespace prbox {

/// %.17g: enough digits to round-trip any double.
std::string format_double(double value);

/// JSON string literal with quotes and escapes.
std::string json_quote(std::string_view text);

}  // namespace prbox
