#ifndef WACHSPRESS_FORMAT_HPP
#define WACHSPRESS_FORMAT_HPP

#include <optional>
#include <string>
#include <string_view>

namespace wachspress {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Whole-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace wachspress

#endif
