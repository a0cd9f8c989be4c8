#include "logsyn/text.hpp"

#include "logsyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace logsyn::text {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

} // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](char x, char y) { return lower(x) == lower(y); });
}

bool contains_keyword(std::string_view haystack, std::string_view keyword) {
    if (keyword.empty() || keyword.size() > haystack.size()) return false;
    const std::string h = to_lower(haystack);
    const std::string k = to_lower(keyword);
    for (std::size_t pos = h.find(k); pos != std::string::npos; pos = h.find(k, pos + 1)) {
        // A keyword that itself starts with punctuation carries its own boundary.
        if (pos == 0 || !is_word_char(h[pos - 1]) || !is_word_char(k.front())) return true;
    }
    return false;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            return parts;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool is_unsigned_integer(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
    });
}

bool id_less(std::string_view a, std::string_view b) {
    const bool ai = is_unsigned_integer(a);
    const bool bi = is_unsigned_integer(b);
    if (ai && bi) {
        auto strip = [](std::string_view v) {
            const auto nz = v.find_first_not_of('0');
            return nz == std::string_view::npos ? std::string_view("0") : v.substr(nz);
        };
        const auto sa = strip(a);
        const auto sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return a < b;
    }
    if (ai != bi) return ai;
    return a < b;
}

std::string substitute(std::string_view format,
                       const std::vector<std::pair<std::string, std::string>>& vars) {
    std::string out;
    out.reserve(format.size());
    std::size_t i = 0;
    while (i < format.size()) {
        if (format[i] == '{') {
            const auto close = format.find('}', i + 1);
            if (close != std::string_view::npos) {
                const auto name = format.substr(i + 1, close - i - 1);
                const auto it = std::find_if(vars.begin(), vars.end(),
                                             [&](const auto& v) { return v.first == name; });
                if (it != vars.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(format[i]);
        ++i;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed: " + path);
}

} // namespace logsyn::text
