#include "logsyn/ingestion.hpp"

#include "logsyn/csv.hpp"
#include "logsyn/errors.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

namespace logsyn {

namespace {

std::size_t find_header(const std::vector<std::string>& headers, const std::string& name) {
    const auto it = std::find_if(headers.begin(), headers.end(), [&](const std::string& h) {
        return text::trim(h) == text::trim(name);
    });
    if (it == headers.end()) throw InputError("CSV is missing mapped column '" + name + "'");
    return static_cast<std::size_t>(it - headers.begin());
}

} // namespace

LoadResult load_records(std::istream& source, const ColumnMap& columns) {
    const auto rows = csv::read(source);
    if (rows.empty()) throw InputError("CSV has no header row");

    const auto& headers = rows.front().fields;
    const bool synthesize = columns.id == ColumnMap::kSynthesize;
    const std::size_t problem_col = find_header(headers, columns.problem);
    const std::size_t action_col = find_header(headers, columns.action);
    const std::size_t id_col = synthesize ? 0 : find_header(headers, columns.id);

    LoadResult result;
    std::set<std::string> seen_ids;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::size_t row_number = r;
        const auto& fields = rows[r].fields;
        ++result.total_rows;

        if (fields.size() != headers.size()) {
            result.rejected.push_back({row_number, "expected " + std::to_string(headers.size()) +
                                                       " fields, found " +
                                                       std::to_string(fields.size())});
            continue;
        }

        MaintenanceRecord record;
        record.id = synthesize ? std::to_string(row_number) : text::trim(fields[id_col]);
        record.problem_text = fields[problem_col];
        record.action_text = fields[action_col];

        if (record.id.empty()) {
            result.rejected.push_back({row_number, "empty id"});
            continue;
        }
        if (text::trim(record.problem_text).empty()) {
            result.rejected.push_back({row_number, "empty problem"});
            continue;
        }
        if (!seen_ids.insert(record.id).second) {
            result.rejected.push_back({row_number, "duplicate id '" + record.id + "'"});
            continue;
        }
        for (std::size_t c = 0; c < headers.size(); ++c) {
            if (c == problem_col || c == action_col || (!synthesize && c == id_col)) continue;
            record.meta[headers[c]] = fields[c];
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

LoadResult load_records_file(const std::string& path, const ColumnMap& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open corpus: " + path);
    return load_records(in, columns);
}

std::string clean_text(std::string_view raw) {
    return text::collapse_whitespace(raw);
}

AbbreviationDictionary::AbbreviationDictionary(std::vector<Abbreviation> entries)
    : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
        if (e.pattern.empty()) throw InputError("abbreviation with empty pattern");
        if (e.pattern.find_first_of(" \t\r\n") != std::string::npos) {
            throw InputError("abbreviation pattern contains whitespace: '" + e.pattern + "'");
        }
        if (text::trim(e.replacement).empty()) {
            throw InputError("abbreviation '" + e.pattern + "' has an empty replacement");
        }
        if (!seen.insert(text::to_lower(e.pattern)).second) {
            throw InputError("duplicate abbreviation pattern '" + e.pattern + "'");
        }
    }
}

const Abbreviation* AbbreviationDictionary::find(std::string_view token) const {
    for (const auto& e : entries_) {
        if (text::iequals(e.pattern, token)) return &e;
    }
    return nullptr;
}

const AbbreviationDictionary& default_abbreviations() {
    static const AbbreviationDictionary dict({
        {"CYL", "cylinder"},
        {"R&R", "removed and replaced"},
        {"W/", "with"},
        {"A/C", "aircraft"},
        {"FOD", "FOD"},
    });
    return dict;
}

AbbreviationDictionary parse_abbreviations_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("abbreviation file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InputError("abbreviation file must be a JSON array");
    std::vector<Abbreviation> entries;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("pattern") || !item.contains("replacement") ||
            !item["pattern"].is_string() || !item["replacement"].is_string()) {
            throw InputError("abbreviation entry needs string 'pattern' and 'replacement'");
        }
        entries.push_back({item["pattern"].get<std::string>(), item["replacement"].get<std::string>()});
    }
    return AbbreviationDictionary(std::move(entries));
}

AbbreviationDictionary load_abbreviations(const std::string& path) {
    return parse_abbreviations_json(text::read_file(path));
}

std::string abbreviations_to_json(const AbbreviationDictionary& dict) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& e : dict.entries()) {
        doc.push_back({{"pattern", e.pattern}, {"replacement", e.replacement}});
    }
    return doc.dump(2) + "\n";
}

std::string normalize_abbreviations(std::string_view text, const AbbreviationDictionary& dict) {
    if (dict.empty()) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(' ', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(start, end - start);

        const Abbreviation* hit = dict.find(token);
        std::string_view trailing;
        if (!hit) {
            std::size_t cut = token.size();
            while (cut > 0 && std::string_view(".,;:!?").find(token[cut - 1]) != std::string_view::npos) {
                --cut;
            }
            if (cut > 0 && cut < token.size()) {
                hit = dict.find(token.substr(0, cut));
                if (hit) trailing = token.substr(cut);
            }
        }
        if (hit) {
            out += hit->replacement;
            out += trailing;
        } else {
            out += token;
        }
        if (end == text.size()) break;
        out.push_back(' ');
        start = end + 1;
    }
    return out;
}

CleanRecord clean_record(const MaintenanceRecord& record, const AbbreviationDictionary& dict) {
    CleanRecord c;
    c.record = record;
    c.problem_clean = clean_text(normalize_abbreviations(clean_text(record.problem_text), dict));
    c.action_clean = clean_text(normalize_abbreviations(clean_text(record.action_text), dict));
    c.combined_text = "Problem: " + c.problem_clean + "\nAction Taken: " + c.action_clean;
    return c;
}

std::vector<CleanRecord> clean_records(const std::vector<MaintenanceRecord>& records,
                                       const AbbreviationDictionary& dict) {
    std::vector<CleanRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(clean_record(r, dict));
    return out;
}

} // namespace logsyn
