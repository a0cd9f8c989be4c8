#include "logsyn/gazetteer.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/extraction.hpp"
#include "logsyn/text.hpp"

#include <nlohmann/json.hpp>

namespace logsyn {

Gazetteer::Gazetteer(std::vector<GazetteerRule> rules, std::string fallback_label,
                     const Ontology& ontology)
    : rules_(std::move(rules)), fallback_(std::move(fallback_label)) {
    for (const auto& rule : rules_) {
        if (rule.keywords.empty()) throw InputError("gazetteer rule for '" + rule.label + "' has no keywords");
        for (const auto& kw : rule.keywords) {
            if (text::trim(kw).empty()) throw InputError("gazetteer rule for '" + rule.label + "' has an empty keyword");
        }
        if (!ontology.contains(rule.label)) {
            throw InputError("gazetteer label '" + rule.label + "' is not in the ontology");
        }
    }
    if (!ontology.contains(fallback_)) {
        throw InputError("gazetteer fallback '" + fallback_ + "' is not in the ontology");
    }
}

std::string Gazetteer::classify(std::string_view text) const {
    for (const auto& rule : rules_) {
        for (const auto& kw : rule.keywords) {
            if (text::contains_keyword(text, kw)) return rule.label;
        }
    }
    return fallback_;
}

const Gazetteer& default_gazetteer() {
    // Order resolves overlaps: "scheduled compression check" is servicing, not
    // mechanical; "broken hose clamp" is hardware, not structural.
    static const Gazetteer gazetteer(
        {
            {{"fouled spark plug", "magneto failure", "faulty ignition lead", "spark plug", "magneto",
              "ignition", "fouled"},
             "Ignition System - Component Failure"},
            {{"fuel servo malfunction", "clogged injector nozzle", "incorrect idle mixture", "fuel servo",
              "injector", "idle mixture", "fuel", "mixture"},
             "Fuel System - Delivery & Control"},
            {{"fod removal", "engine wash", "scheduled compression check", "fod", "wash", "scheduled",
              "inspection"},
             "Servicing - General Maintenance"},
            {{"loose rocker cover screws", "broken hose clamp", "sheared rivets", "screw", "clamp", "rivet",
              "bolt", "safety wire"},
             "Powerplant - Fasteners & Hardware"},
            {{"leaking rocker cover gasket", "intake manifold leak", "oil seal failure", "gasket", "leak",
              "seal", "o-ring"},
             "Powerplant - Sealing & Gaskets"},
            {{"cracked engine baffle", "worn engine mount", "broken bracket", "crack", "baffle",
              "engine mount", "bracket", "worn", "broken"},
             "Powerplant - Structural Components"},
            {{"low compression", "piston/ring failure", "sticking valves", "compression", "piston", "ring",
              "valve"},
             "Powerplant - Mechanical"},
            {{"rough running engine", "power loss", "hard start", "vibration", "rough", "lost power"},
             "Performance - Operational Issue"},
        },
        std::string(kGazetteerFallback), default_ontology());
    return gazetteer;
}

Gazetteer parse_gazetteer_json(std::string_view json_text, const Ontology& ontology) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("gazetteer file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
        throw InputError("gazetteer file must be an object with a 'rules' array");
    }
    std::string fallback(kGazetteerFallback);
    if (doc.contains("fallback")) {
        if (!doc["fallback"].is_string()) throw InputError("gazetteer 'fallback' must be a string");
        fallback = doc["fallback"].get<std::string>();
    }
    std::vector<GazetteerRule> rules;
    for (const auto& r : doc["rules"]) {
        if (!r.is_object() || !r.contains("label") || !r["label"].is_string() || !r.contains("keywords") ||
            !r["keywords"].is_array()) {
            throw InputError("gazetteer rule needs 'label' and 'keywords'");
        }
        GazetteerRule rule;
        const auto label = ontology.canonicalize(r["label"].get<std::string>());
        rule.label = label ? *label : r["label"].get<std::string>();
        for (const auto& kw : r["keywords"]) {
            if (!kw.is_string()) throw InputError("gazetteer keywords must be strings");
            rule.keywords.push_back(kw.get<std::string>());
        }
        rules.push_back(std::move(rule));
    }
    const auto fb = ontology.canonicalize(fallback);
    return Gazetteer(std::move(rules), fb ? *fb : fallback, ontology);
}

Gazetteer load_gazetteer(const std::string& path, const Ontology& ontology) {
    return parse_gazetteer_json(text::read_file(path), ontology);
}

std::string gazetteer_to_json(const Gazetteer& g) {
    nlohmann::ordered_json doc;
    doc["fallback"] = g.fallback_label();
    doc["rules"] = nlohmann::ordered_json::array();
    for (const auto& r : g.rules()) doc["rules"].push_back({{"label", r.label}, {"keywords", r.keywords}});
    return doc.dump(2) + "\n";
}

std::string rule_based_classify(const CleanRecord& record, const Gazetteer& gazetteer) {
    return gazetteer.classify(record.combined_text);
}

std::vector<StructuredEvent> rule_based_events(const std::vector<CleanRecord>& records,
                                               const Gazetteer& gazetteer) {
    std::vector<StructuredEvent> events;
    events.reserve(records.size());
    for (const auto& r : records) {
        StructuredEvent e;
        e.record_id = r.record.id;
        e.summary_problem = r.problem_clean.empty() ? "(none)" : r.problem_clean;
        e.summary_action = r.action_clean.empty() ? "(none)" : r.action_clean;
        e.failed_component = "(unspecified)";
        e.category = rule_based_classify(r, gazetteer);
        e.action_category = classify_action(e.summary_action);
        e.status = EventStatus::Valid;
        events.push_back(std::move(e));
    }
    return events;
}

} // namespace logsyn
