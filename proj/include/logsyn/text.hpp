#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace logsyn::text {

std::string trim(std::string_view s);

/// Trim, then collapse every run of whitespace (space, tab, CR, LF, ...) to
/// one space.
std::string collapse_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

/// Case-insensitive search for `keyword` starting at a word boundary, so
/// "leak" matches "leaking" but "nut" does not match "minute".
bool contains_keyword(std::string_view haystack, std::string_view keyword);

std::vector<std::string> split(std::string_view s, char sep);

bool is_unsigned_integer(std::string_view s);

/// Ordering for record ids: integer ids compare numerically and sort before
/// non-integer ids, which compare lexicographically.
bool id_less(std::string_view a, std::string_view b);

/// Replaces `{name}` placeholders found in `vars` in one left-to-right pass.
/// Unknown placeholders and other braces are copied through; substituted
/// values are not rescanned.
std::string substitute(std::string_view format,
                       const std::vector<std::pair<std::string, std::string>>& vars);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace logsyn::text
