#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specal {

/// Locale-independent double formatting with enough digits to round-trip
/// (17 significant digits, general format). Used by every text output so
/// CSV/SVG/JSON artifacts are byte-stable.
std::string fmt_double(double value);

/// Locale-independent parse of a full token; rejects trailing junk.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep);

/// Joins tokens with `sep`.
std::string join(const std::vector<std::string>& tokens, char sep);

}  // namespace specal
