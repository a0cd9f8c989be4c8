#include "logsyn/judge.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/extraction.hpp"
#include "logsyn/parallel.hpp"
#include "logsyn/prompting.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <unordered_map>

namespace logsyn {

namespace {

std::optional<int> likert(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) return std::nullopt;
    const auto& v = doc[key];
    if (!v.is_number_integer()) return std::nullopt;
    const auto i = v.get<std::int64_t>();
    if (i < 1 || i > 5) return std::nullopt;
    return static_cast<int>(i);
}

CriterionMean criterion_mean(std::int64_t sum, std::int64_t n) {
    CriterionMean m;
    m.mean = static_cast<double>(sum) / static_cast<double>(n);
    // Half-up rounding in integer arithmetic; ratings are positive.
    const std::int64_t tenths = (20 * sum + n) / (2 * n);
    m.rounded = static_cast<double>(tenths) / 10.0;
    return m;
}

} // namespace

std::optional<JudgeScores> parse_judge_response(std::string_view text, const std::string& record_id) {
    const auto block = extract_json_block(text);
    if (!block) return std::nullopt;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(*block);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    if (!doc.is_object()) return std::nullopt;
    const auto s = likert(doc, "summary_accuracy");
    const auto c = likert(doc, "component_accuracy");
    const auto r = likert(doc, "category_relevance");
    if (!s || !c || !r) return std::nullopt;
    return JudgeScores{record_id, *s, *c, *r};
}

JudgeOutcome judge_event(const CleanRecord& record, const StructuredEvent& event,
                         CompletionBackend& judge_backend, const CompletionParams& params) {
    const std::string prompt = build_judge_prompt(record, event);
    JudgeOutcome out;
    out.record_id = event.record_id;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        out.attempts = attempt;
        BackendResult result;
        try {
            result = judge_backend.complete(prompt, params);
        } catch (const BackendError& e) {
            out.anomaly = std::string("backend error: ") + e.what();
            return out;
        }
        if (auto scores = parse_judge_response(result.text, event.record_id)) {
            out.scores = std::move(scores);
            out.anomaly.clear();
            return out;
        }
        out.anomaly = "missing or out-of-range scores";
    }
    return out;
}

std::vector<JudgeOutcome> judge_events(const std::vector<CleanRecord>& records,
                                       const std::vector<StructuredEvent>& events,
                                       CompletionBackend& judge_backend, const CompletionParams& params,
                                       int parallelism) {
    params.validate();
    std::unordered_map<std::string, const CleanRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.record.id, &r);

    std::vector<std::pair<const CleanRecord*, const StructuredEvent*>> work;
    for (const auto& e : events) {
        if (!e.valid()) continue;
        const auto it = by_id.find(e.record_id);
        if (it == by_id.end()) throw InputError("no corpus record for event '" + e.record_id + "'");
        work.emplace_back(it->second, &e);
    }

    std::vector<JudgeOutcome> outcomes(work.size());
    parallel_for(work.size(), parallelism, [&](std::size_t i) {
        outcomes[i] = judge_event(*work[i].first, *work[i].second, judge_backend, params);
    });
    std::sort(outcomes.begin(), outcomes.end(),
              [](const auto& a, const auto& b) { return text::id_less(a.record_id, b.record_id); });
    return outcomes;
}

JudgeSummary aggregate_judgements(const std::vector<JudgeScores>& scores, std::int64_t anomalous) {
    JudgeSummary s;
    s.n = static_cast<std::int64_t>(scores.size());
    s.anomalous = anomalous;
    if (s.n == 0) return s;
    std::int64_t sa = 0, ca = 0, cr = 0;
    for (const auto& j : scores) {
        sa += j.summary_accuracy;
        ca += j.component_accuracy;
        cr += j.category_relevance;
    }
    s.summary_accuracy = criterion_mean(sa, s.n);
    s.component_accuracy = criterion_mean(ca, s.n);
    s.category_relevance = criterion_mean(cr, s.n);
    return s;
}

JudgeSummary aggregate_outcomes(const std::vector<JudgeOutcome>& outcomes) {
    std::vector<JudgeScores> scores;
    std::int64_t anomalous = 0;
    for (const auto& o : outcomes) {
        if (o.ok()) {
            scores.push_back(*o.scores);
        } else {
            ++anomalous;
        }
    }
    return aggregate_judgements(scores, anomalous);
}

std::string judgements_to_jsonl(const std::vector<JudgeOutcome>& outcomes) {
    std::string out;
    for (const auto& o : outcomes) {
        nlohmann::ordered_json doc;
        doc["record_id"] = o.record_id;
        if (o.ok()) {
            doc["summary_accuracy"] = o.scores->summary_accuracy;
            doc["component_accuracy"] = o.scores->component_accuracy;
            doc["category_relevance"] = o.scores->category_relevance;
            doc["status"] = "Valid";
            doc["anomaly"] = nullptr;
        } else {
            doc["summary_accuracy"] = nullptr;
            doc["component_accuracy"] = nullptr;
            doc["category_relevance"] = nullptr;
            doc["status"] = "JudgeAnomalous";
            doc["anomaly"] = o.anomaly;
        }
        doc["attempts"] = o.attempts;
        out += doc.dump() + "\n";
    }
    return out;
}

std::string judge_summary_to_json(const JudgeSummary& s) {
    nlohmann::ordered_json doc;
    doc["n"] = s.n;
    doc["anomalous"] = s.anomalous;
    const auto put = [&](const char* key, const std::optional<CriterionMean>& m) {
        if (m) {
            doc[key] = {{"mean", m->rounded}, {"exact_mean", m->mean}};
        } else {
            doc[key] = nullptr;
        }
    };
    put("summary_accuracy", s.summary_accuracy);
    put("component_accuracy", s.component_accuracy);
    put("category_relevance", s.category_relevance);
    return doc.dump(2) + "\n";
}

} // namespace logsyn
