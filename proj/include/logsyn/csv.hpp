#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn::csv {

struct Row {
    std::size_t line = 0;  // 1-based physical line where the row starts
    std::vector<std::string> fields;
};

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends,
/// embedded newlines inside quotes. A leading UTF-8 BOM is skipped. Throws
/// InputError on an unterminated quote or a stream read failure.
std::vector<Row> read(std::istream& in);
std::vector<Row> read(std::string_view content);

std::string escape_field(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

} // namespace logsyn::csv
