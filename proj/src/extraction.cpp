#include "logsyn/extraction.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/parallel.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <array>
#include <nlohmann/json.hpp>
#include <set>

namespace logsyn {

void ExtractionConfig::validate() const {
    if (content_retries < 0 || content_retries > kMaxContentRetries) {
        throw InputError("content_retries must be within [0, " + std::to_string(kMaxContentRetries) +
                         "], got " + std::to_string(content_retries));
    }
}

namespace {

/// End index (inclusive) of the balanced object opening at `open`, if any.
std::optional<std::size_t> match_object(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i;
        }
    }
    return std::nullopt;
}

std::optional<std::string> first_balanced_object(std::string_view text) {
    for (auto open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
        if (const auto close = match_object(text, open)) {
            return std::string(text.substr(open, *close - open + 1));
        }
    }
    return std::nullopt;
}

std::optional<std::string_view> fenced_body(std::string_view text) {
    const auto fence = text.find("```");
    if (fence == std::string_view::npos) return std::nullopt;
    auto body_start = text.find('\n', fence + 3);
    if (body_start == std::string_view::npos) return std::nullopt;
    ++body_start;
    const auto close = text.find("```", body_start);
    if (close == std::string_view::npos) return text.substr(body_start);
    return text.substr(body_start, close - body_start);
}

struct ActionRule {
    ActionCategory category;
    std::vector<std::string_view> keywords;
};

const std::array<ActionRule, 4>& action_rules() {
    static const std::array<ActionRule, 4> rules = {{
        {ActionCategory::ComponentReplacement, {"replaced", "installed new", "removed and replaced", "r&r"}},
        {ActionCategory::RepairAdjustment,
         {"repaired", "adjusted", "tightened", "resealed", "stop drilled", "re-torqued"}},
        {ActionCategory::Servicing, {"cleaned", "washed", "serviced", "lubricated"}},
        {ActionCategory::InspectionTest,
         {"inspected", "checked", "ops check", "no fault found", "compression check"}},
    }};
    return rules;
}

} // namespace

std::optional<std::string> extract_json_block(std::string_view text) {
    if (const auto body = fenced_body(text)) {
        if (auto obj = first_balanced_object(*body)) return obj;
    }
    return first_balanced_object(text);
}

StructuredEvent parse_structured_event(std::string_view json_text, const std::string& record_id,
                                       const Ontology& ontology, const ExtractionConfig& config) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception&) {
        return StructuredEvent::anomalous(record_id, AnomalyReason::MalformedJson);
    }
    if (!doc.is_object()) return StructuredEvent::anomalous(record_id, AnomalyReason::MalformedJson);

    if (config.strict_extra_fields) {
        for (const auto& item : doc.items()) {
            if (std::find(std::begin(kSchemaKeys), std::end(kSchemaKeys), item.key()) ==
                std::end(kSchemaKeys)) {
                return StructuredEvent::anomalous(record_id, AnomalyReason::MalformedJson);
            }
        }
    }
    for (const auto key : kSchemaKeys) {
        const auto it = doc.find(std::string(key));
        if (it == doc.end()) continue;
        if (!it->is_string()) return StructuredEvent::anomalous(record_id, AnomalyReason::MalformedJson);
    }
    for (const auto key : kSchemaKeys) {
        if (!doc.contains(std::string(key))) {
            return StructuredEvent::anomalous(record_id, AnomalyReason::MissingField);
        }
    }

    StructuredEvent event;
    event.record_id = record_id;
    event.summary_problem = text::trim(doc["summary_problem"].get<std::string>());
    event.summary_action = text::trim(doc["summary_action"].get<std::string>());
    event.failed_component = text::trim(doc["failed_component"].get<std::string>());
    const std::string raw_category = text::trim(doc["category"].get<std::string>());
    if (event.summary_problem.empty() || event.summary_action.empty() ||
        event.failed_component.empty() || raw_category.empty()) {
        return StructuredEvent::anomalous(record_id, AnomalyReason::EmptyField);
    }
    const auto category = ontology.canonicalize(raw_category);
    if (!category) return StructuredEvent::anomalous(record_id, AnomalyReason::CategoryOutOfOntology);

    event.category = *category;
    event.action_category = classify_action(event.summary_action);
    event.status = EventStatus::Valid;
    event.anomaly_reason.reset();
    return event;
}

ActionCategory classify_action(std::string_view summary_action) {
    for (const auto& rule : action_rules()) {
        for (const auto kw : rule.keywords) {
            if (text::contains_keyword(summary_action, kw)) return rule.category;
        }
    }
    return ActionCategory::Other;
}

StructuredEvent structure_record(const CleanRecord& record, const ExtractionContext& ctx) {
    const std::string prompt =
        build_extraction_prompt(record, ctx.exemplars, ctx.prompt_template, ctx.ontology);
    const int max_attempts = ctx.config.content_retries + 1;
    StructuredEvent last;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        BackendResult result;
        try {
            result = ctx.backend.complete(prompt, ctx.params);
        } catch (const BackendError&) {
            return StructuredEvent::anomalous(record.record.id, AnomalyReason::BackendError, attempt);
        }
        const auto block = extract_json_block(result.text);
        last = block ? parse_structured_event(*block, record.record.id, ctx.ontology, ctx.config)
                     : StructuredEvent::anomalous(record.record.id, AnomalyReason::NoJsonFound);
        last.attempts = attempt;
        if (last.valid()) break;
    }
    return last;
}

void sort_events(std::vector<StructuredEvent>& events) {
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        return text::id_less(a.record_id, b.record_id);
    });
}

std::vector<StructuredEvent> structure_records(const std::vector<CleanRecord>& records,
                                               const ExtractionContext& ctx, int parallelism) {
    ctx.config.validate();
    ctx.params.validate();
    std::vector<StructuredEvent> events(records.size());
    parallel_for(records.size(), parallelism,
                 [&](std::size_t i) { events[i] = structure_record(records[i], ctx); });
    for (const auto& e : events) check_event_invariants(e, ctx.ontology);
    sort_events(events);
    return events;
}

std::string event_to_json_line(const StructuredEvent& e) {
    nlohmann::ordered_json doc;
    doc["record_id"] = e.record_id;
    doc["summary_problem"] = e.summary_problem;
    doc["summary_action"] = e.summary_action;
    doc["failed_component"] = e.failed_component;
    doc["category"] = e.valid() ? nlohmann::ordered_json(e.category) : nlohmann::ordered_json(nullptr);
    doc["action_category"] = std::string(to_string(e.action_category));
    doc["status"] = std::string(to_string(e.status));
    doc["anomaly_reason"] =
        e.anomaly_reason ? nlohmann::ordered_json(std::string(to_string(*e.anomaly_reason))) : nlohmann::ordered_json(nullptr);
    doc["attempts"] = e.attempts;
    return doc.dump();
}

std::string events_to_jsonl(const std::vector<StructuredEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        out += event_to_json_line(e);
        out.push_back('\n');
    }
    return out;
}

std::vector<StructuredEvent> parse_events_jsonl(std::string_view content, const Ontology& ontology) {
    std::vector<StructuredEvent> events;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (const auto& line : text::split(content, '\n')) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = "events line " + std::to_string(line_no);
        try {
            const auto doc = nlohmann::json::parse(line);
            StructuredEvent e;
            e.record_id = doc.at("record_id").get<std::string>();
            e.summary_problem = doc.at("summary_problem").get<std::string>();
            e.summary_action = doc.at("summary_action").get<std::string>();
            e.failed_component = doc.at("failed_component").get<std::string>();
            if (!doc.at("category").is_null()) e.category = doc["category"].get<std::string>();
            const auto action = parse_action_category(doc.at("action_category").get<std::string>());
            const auto status = parse_event_status(doc.at("status").get<std::string>());
            if (!action || !status) throw InputError(where + ": unknown action_category or status");
            e.action_category = *action;
            e.status = *status;
            if (!doc.at("anomaly_reason").is_null()) {
                e.anomaly_reason = parse_anomaly_reason(doc["anomaly_reason"].get<std::string>());
                if (!e.anomaly_reason) throw InputError(where + ": unknown anomaly_reason");
            }
            e.attempts = doc.at("attempts").get<int>();
            check_event_invariants(e, ontology);
            if (!seen.insert(e.record_id).second) {
                throw InputError(where + ": duplicate record_id '" + e.record_id + "'");
            }
            events.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw InputError(where + ": " + ex.what());
        } catch (const InvariantError& ex) {
            throw InputError(where + ": " + ex.what());
        }
    }
    return events;
}

std::vector<StructuredEvent> load_events(const std::string& path, const Ontology& ontology) {
    return parse_events_jsonl(text::read_file(path), ontology);
}

} // namespace logsyn
