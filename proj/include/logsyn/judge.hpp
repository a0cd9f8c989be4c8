#pragma once

#include "logsyn/domain.hpp"
#include "logsyn/ingestion.hpp"
#include "logsyn/llm_backend.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

/// Likert ratings, each an integer in [1, 5].
struct JudgeScores {
    std::string record_id;
    int summary_accuracy = 0;
    int component_accuracy = 0;
    int category_relevance = 0;
};

struct JudgeOutcome {
    std::string record_id;
    std::optional<JudgeScores> scores;  // empty when the judge output was unusable
    std::string anomaly;                // why, when scores is empty
    int attempts = 0;

    bool ok() const { return scores.has_value(); }
};

/// Parses the judge's answer; nullopt unless all three keys hold integers
/// within [1, 5].
std::optional<JudgeScores> parse_judge_response(std::string_view text, const std::string& record_id);

/// One re-ask on an unusable answer. A spent transport budget becomes an
/// anomalous outcome; AuthError propagates. Throws InputError for an
/// anomalous event.
JudgeOutcome judge_event(const CleanRecord& record, const StructuredEvent& event,
                         CompletionBackend& judge_backend, const CompletionParams& params);

/// Judges every Valid event, looking up its record by id. Sorted by id.
std::vector<JudgeOutcome> judge_events(const std::vector<CleanRecord>& records,
                                       const std::vector<StructuredEvent>& events,
                                       CompletionBackend& judge_backend, const CompletionParams& params,
                                       int parallelism);

struct CriterionMean {
    double mean = 0.0;     // sum / n, unrounded
    double rounded = 0.0;  // half-up to one decimal
};

struct JudgeSummary {
    std::int64_t n = 0;
    std::int64_t anomalous = 0;
    std::optional<CriterionMean> summary_accuracy;
    std::optional<CriterionMean> component_accuracy;
    std::optional<CriterionMean> category_relevance;
};

JudgeSummary aggregate_judgements(const std::vector<JudgeScores>& scores, std::int64_t anomalous = 0);
JudgeSummary aggregate_outcomes(const std::vector<JudgeOutcome>& outcomes);

std::string judgements_to_jsonl(const std::vector<JudgeOutcome>& outcomes);
std::string judge_summary_to_json(const JudgeSummary& summary);

} // namespace logsyn
