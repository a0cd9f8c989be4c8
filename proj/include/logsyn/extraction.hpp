#pragma once

#include "logsyn/domain.hpp"
#include "logsyn/ingestion.hpp"
#include "logsyn/llm_backend.hpp"
#include "logsyn/prompting.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

struct ExtractionConfig {
    static constexpr int kMaxContentRetries = 5;

    int content_retries = 2;          // re-asks after a malformed answer
    bool strict_extra_fields = false; // unknown keys -> MalformedJson

    void validate() const;
};

/// First balanced top-level {...} in `text`, looking inside a markdown code
/// fence first when one is present. Braces inside JSON strings are ignored.
std::optional<std::string> extract_json_block(std::string_view text);

/// Validates one candidate object. The first failing check decides the
/// anomaly reason: MalformedJson, MissingField, EmptyField,
/// CategoryOutOfOntology. Non-string schema values count as MalformedJson.
StructuredEvent parse_structured_event(std::string_view json_text, const std::string& record_id,
                                       const Ontology& ontology, const ExtractionConfig& config);

/// Keyword rules over the action summary; first matching group wins.
ActionCategory classify_action(std::string_view summary_action);

struct ExtractionContext {
    CompletionBackend& backend;
    const CompletionParams& params;
    const std::vector<Exemplar>& exemplars;
    const PromptTemplate& prompt_template;
    const Ontology& ontology;
    const ExtractionConfig& config;
};

/// Prompt, call, parse; re-ask with the identical prompt up to
/// content_retries times. A spent transport budget yields
/// Anomalous(BackendError). AuthError propagates.
StructuredEvent structure_record(const CleanRecord& record, const ExtractionContext& ctx);

/// Runs structure_record over all records with up to `parallelism` workers
/// and returns the events sorted by record id.
std::vector<StructuredEvent> structure_records(const std::vector<CleanRecord>& records,
                                               const ExtractionContext& ctx, int parallelism);

void sort_events(std::vector<StructuredEvent>& events);

/// One event per line; keys in fixed order.
std::string event_to_json_line(const StructuredEvent& event);
std::string events_to_jsonl(const std::vector<StructuredEvent>& events);

/// Throws InputError on malformed lines or events that break their invariants.
std::vector<StructuredEvent> parse_events_jsonl(std::string_view content, const Ontology& ontology);
std::vector<StructuredEvent> load_events(const std::string& path, const Ontology& ontology);

} // namespace logsyn
