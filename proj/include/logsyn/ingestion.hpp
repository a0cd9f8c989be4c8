#pragma once

#include "logsyn/domain.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

/// Which CSV headers hold the id, problem and action text. An id column of
/// "synthesize" numbers accepted rows by their 1-based data row index.
struct ColumnMap {
    static constexpr std::string_view kSynthesize = "synthesize";

    std::string id = std::string(kSynthesize);
    std::string problem = "Problem";
    std::string action = "Action Taken";
};

struct RejectedRow {
    std::size_t row_number = 0;  // 1-based data row index (header excluded)
    std::string reason;
};

struct LoadResult {
    std::vector<MaintenanceRecord> records;
    std::vector<RejectedRow> rejected;
    std::size_t total_rows = 0;
};

/// Throws InputError when a mapped header is missing or the stream is
/// unreadable. Row-level problems land in `rejected`, never silently dropped.
LoadResult load_records(std::istream& source, const ColumnMap& columns);
LoadResult load_records_file(const std::string& path, const ColumnMap& columns);

std::string clean_text(std::string_view raw);

struct Abbreviation {
    std::string pattern;
    std::string replacement;
};

/// Whole-token, case-insensitive abbreviation table.
class AbbreviationDictionary {
public:
    AbbreviationDictionary() = default;
    /// Throws InputError on duplicate or empty patterns, patterns containing
    /// spaces, or empty replacements.
    explicit AbbreviationDictionary(std::vector<Abbreviation> entries);

    const std::vector<Abbreviation>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    const Abbreviation* find(std::string_view token) const;

private:
    std::vector<Abbreviation> entries_;
};

/// CYL, R&R, W/, A/C, and FOD (kept as-is).
const AbbreviationDictionary& default_abbreviations();

AbbreviationDictionary parse_abbreviations_json(std::string_view json_text);
AbbreviationDictionary load_abbreviations(const std::string& path);
std::string abbreviations_to_json(const AbbreviationDictionary& dict);

/// Replaces whole space-delimited tokens in one left-to-right pass. Trailing
/// sentence punctuation (. , ; : ! ?) is set aside before matching and
/// re-attached afterwards.
std::string normalize_abbreviations(std::string_view text, const AbbreviationDictionary& dict);

struct CleanRecord {
    MaintenanceRecord record;
    std::string problem_clean;
    std::string action_clean;
    std::string combined_text;  // "Problem: <p>\nAction Taken: <a>"
};

CleanRecord clean_record(const MaintenanceRecord& record, const AbbreviationDictionary& dict);
std::vector<CleanRecord> clean_records(const std::vector<MaintenanceRecord>& records,
                                       const AbbreviationDictionary& dict);

} // namespace logsyn
