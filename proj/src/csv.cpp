#include "logsyn/csv.hpp"

#include "logsyn/errors.hpp"

#include <iterator>
#include <sstream>

namespace logsyn::csv {

std::vector<Row> read(std::string_view content) {
    if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

    std::vector<Row> rows;
    Row row;
    std::string field;
    std::size_t line = 1;
    row.line = 1;
    bool in_quotes = false;
    bool field_started = false;

    const auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_row = [&] {
        end_field();
        // A physically empty line is not a record.
        if (!(row.fields.size() == 1 && row.fields[0].empty())) rows.push_back(std::move(row));
        row = Row{};
        row.line = line;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field_started && field.empty()) {
                in_quotes = true;
                field_started = true;
            } else {
                field.push_back(c);
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < content.size() && content[i + 1] == '\n') break;
            ++line;
            end_row();
            break;
        case '\n':
            ++line;
            end_row();
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw InputError("CSV: unterminated quoted field starting on line " +
                                    std::to_string(row.line));
    if (field_started || !field.empty() || !row.fields.empty()) end_row();
    return rows;
}

std::vector<Row> read(std::istream& in) {
    if (!in) throw InputError("CSV: unreadable stream");
    std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw InputError("CSV: read error");
    return read(std::string_view(content));
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

} // namespace logsyn::csv
