#include "logsyn/domain.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>

namespace logsyn {

using json = nlohmann::json;

OntologyLeaf OntologyLeaf::make(std::string system, std::string subcategory,
                                std::optional<std::int64_t> reference_count) {
    OntologyLeaf leaf;
    leaf.label = system + std::string(kLevelSeparator) + subcategory;
    leaf.system = std::move(system);
    leaf.subcategory = std::move(subcategory);
    leaf.reference_count = reference_count;
    return leaf;
}

std::string category_key(std::string_view raw) {
    const std::string collapsed = text::collapse_whitespace(raw);
    std::string out;
    out.reserve(collapsed.size() + 8);
    for (std::size_t i = 0; i < collapsed.size(); ++i) {
        if (collapsed[i] != '-') {
            out.push_back(collapsed[i]);
            continue;
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += " - ";
        while (i + 1 < collapsed.size() && collapsed[i + 1] == ' ') ++i;
    }
    return text::to_lower(text::trim(out));
}

namespace {

std::size_t count_separators(std::string_view label) {
    std::size_t n = 0;
    for (auto pos = label.find(kLevelSeparator); pos != std::string_view::npos;
         pos = label.find(kLevelSeparator, pos + 1)) {
        ++n;
    }
    return n;
}

} // namespace

Ontology::Ontology(std::vector<OntologyLeaf> leaves, std::string version)
    : leaves_(std::move(leaves)), version_(std::move(version)) {
    if (leaves_.empty()) throw InputError("ontology has no leaves");
    keys_.reserve(leaves_.size());
    for (const auto& leaf : leaves_) {
        if (text::trim(leaf.system).empty() || text::trim(leaf.subcategory).empty()) {
            throw InputError("ontology leaf with empty level: '" + leaf.label + "'");
        }
        if (leaf.label != leaf.system + std::string(kLevelSeparator) + leaf.subcategory) {
            throw InputError("ontology leaf label does not match its levels: '" + leaf.label + "'");
        }
        if (count_separators(leaf.label) != 1) {
            throw InputError("ontology label must have exactly one ' - ' separator: '" +
                             leaf.label + "'");
        }
        if (leaf.reference_count && *leaf.reference_count < 0) {
            throw InputError("negative reference_count for '" + leaf.label + "'");
        }
        auto key = category_key(leaf.label);
        if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) {
            throw InputError("ontology labels collide after canonicalization: '" + leaf.label + "'");
        }
        keys_.push_back(std::move(key));
    }
}

bool Ontology::contains(std::string_view label) const {
    return index_of(label).has_value();
}

std::optional<std::size_t> Ontology::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (leaves_[i].label == label) return i;
    }
    return std::nullopt;
}

std::vector<std::string> Ontology::labels() const {
    std::vector<std::string> out;
    out.reserve(leaves_.size());
    for (const auto& leaf : leaves_) out.push_back(leaf.label);
    return out;
}

std::optional<std::string> Ontology::canonicalize(std::string_view raw) const {
    const auto key = category_key(raw);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i] == key) return leaves_[i].label;
    }
    return std::nullopt;
}

const Ontology& default_ontology() {
    static const Ontology ontology(
        {
            OntologyLeaf::make("Powerplant", "Mechanical", 553),
            OntologyLeaf::make("Powerplant", "Sealing & Gaskets", 3454),
            OntologyLeaf::make("Powerplant", "Structural Components", 846),
            OntologyLeaf::make("Powerplant", "Fasteners & Hardware", 588),
            OntologyLeaf::make("Ignition System", "Component Failure", 76),
            OntologyLeaf::make("Fuel System", "Delivery & Control", 50),
            OntologyLeaf::make("Performance", "Operational Issue", 403),
            OntologyLeaf::make("Servicing", "General Maintenance", 199),
        },
        "ga-maintenance-8");
    return ontology;
}

std::optional<std::string> canonicalize_category(std::string_view raw, const Ontology& ontology) {
    return ontology.canonicalize(raw);
}

Ontology parse_ontology_json(std::string_view json_text, std::string version) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("ontology file is not valid JSON: ") + e.what());
    }
    // Either a bare array of leaves or {"version": ..., "leaves": [...]}.
    if (doc.is_object()) {
        if (doc.contains("version")) {
            if (!doc["version"].is_string()) throw InputError("ontology version must be a string");
            version = doc["version"].get<std::string>();
        }
        doc = doc.value("leaves", json());
    }
    if (!doc.is_array()) throw InputError("ontology file must hold an array of leaves");
    std::vector<OntologyLeaf> leaves;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("system") || !entry.contains("subcategory") ||
            !entry["system"].is_string() || !entry["subcategory"].is_string()) {
            throw InputError("ontology entry needs string 'system' and 'subcategory'");
        }
        std::optional<std::int64_t> count;
        if (entry.contains("reference_count") && !entry["reference_count"].is_null()) {
            if (!entry["reference_count"].is_number_integer()) {
                throw InputError("ontology reference_count must be an integer or null");
            }
            count = entry["reference_count"].get<std::int64_t>();
        }
        leaves.push_back(OntologyLeaf::make(entry["system"].get<std::string>(),
                                            entry["subcategory"].get<std::string>(), count));
    }
    return Ontology(std::move(leaves), std::move(version));
}

Ontology load_ontology(const std::string& path) {
    return parse_ontology_json(text::read_file(path), path);
}

std::string ontology_to_json(const Ontology& ontology) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& leaf : ontology.leaves()) {
        nlohmann::ordered_json entry;
        entry["system"] = leaf.system;
        entry["subcategory"] = leaf.subcategory;
        entry["reference_count"] =
            leaf.reference_count ? nlohmann::ordered_json(*leaf.reference_count) : nlohmann::ordered_json(nullptr);
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::string_view to_string(ActionCategory category) {
    switch (category) {
    case ActionCategory::ComponentReplacement: return "Component Replacement";
    case ActionCategory::RepairAdjustment: return "Repair & Adjustment";
    case ActionCategory::Servicing: return "Servicing";
    case ActionCategory::InspectionTest: return "Inspection & Test";
    case ActionCategory::Other: return "Other";
    }
    return "Other";
}

namespace {

std::string squash(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

} // namespace

std::optional<ActionCategory> parse_action_category(std::string_view s) {
    const auto key = squash(s);
    for (auto c : kAllActionCategories) {
        if (squash(to_string(c)) == key) return c;
    }
    return std::nullopt;
}

std::string_view to_string(EventStatus status) {
    return status == EventStatus::Valid ? "Valid" : "Anomalous";
}

std::string_view to_string(AnomalyReason reason) {
    switch (reason) {
    case AnomalyReason::NoJsonFound: return "NoJsonFound";
    case AnomalyReason::MalformedJson: return "MalformedJson";
    case AnomalyReason::MissingField: return "MissingField";
    case AnomalyReason::EmptyField: return "EmptyField";
    case AnomalyReason::CategoryOutOfOntology: return "CategoryOutOfOntology";
    case AnomalyReason::BackendError: return "BackendError";
    }
    return "BackendError";
}

std::optional<EventStatus> parse_event_status(std::string_view s) {
    if (s == "Valid") return EventStatus::Valid;
    if (s == "Anomalous") return EventStatus::Anomalous;
    return std::nullopt;
}

std::optional<AnomalyReason> parse_anomaly_reason(std::string_view s) {
    for (auto r : {AnomalyReason::NoJsonFound, AnomalyReason::MalformedJson,
                   AnomalyReason::MissingField, AnomalyReason::EmptyField,
                   AnomalyReason::CategoryOutOfOntology, AnomalyReason::BackendError}) {
        if (to_string(r) == s) return r;
    }
    return std::nullopt;
}

StructuredEvent StructuredEvent::anomalous(std::string record_id, AnomalyReason reason,
                                           int attempts) {
    StructuredEvent e;
    e.record_id = std::move(record_id);
    e.status = EventStatus::Anomalous;
    e.anomaly_reason = reason;
    e.attempts = attempts;
    return e;
}

void check_event_invariants(const StructuredEvent& event, const Ontology& ontology) {
    const auto fail = [&](const std::string& what) {
        throw InvariantError("event '" + event.record_id + "': " + what);
    };
    if (event.record_id.empty()) fail("empty record_id");
    if (event.attempts < 1) fail("attempts < 1");
    if (event.valid()) {
        if (event.anomaly_reason) fail("valid event carries an anomaly reason");
        if (text::trim(event.summary_problem).empty() || text::trim(event.summary_action).empty() ||
            text::trim(event.failed_component).empty()) {
            fail("valid event with empty schema field");
        }
        if (!ontology.contains(event.category)) fail("category outside ontology: " + event.category);
    } else if (!event.anomaly_reason) {
        fail("anomalous event without a reason");
    }
}

} // namespace logsyn
