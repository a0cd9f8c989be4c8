#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

/// One raw log entry as loaded from the corpus.
struct MaintenanceRecord {
    std::string id;
    std::string problem_text;
    std::string action_text;
    std::map<std::string, std::string> meta;
};

struct OntologyLeaf {
    std::string system;
    std::string subcategory;
    std::string label;  // always system + " - " + subcategory
    std::optional<std::int64_t> reference_count;

    static OntologyLeaf make(std::string system, std::string subcategory,
                             std::optional<std::int64_t> reference_count = std::nullopt);
};

inline constexpr std::string_view kLevelSeparator = " - ";

/// Comparison key used to match free-form category strings against leaf
/// labels: trimmed, whitespace collapsed, lower-cased, and every hyphen with
/// optional surrounding spaces rewritten as " - ".
std::string category_key(std::string_view raw);

/// Two-level "System - Subcategory" taxonomy. Immutable once built.
class Ontology {
public:
    /// Throws InputError if a label is malformed or two leaves share a key.
    Ontology(std::vector<OntologyLeaf> leaves, std::string version);

    const std::vector<OntologyLeaf>& leaves() const { return leaves_; }
    const std::string& version() const { return version_; }
    std::size_t size() const { return leaves_.size(); }

    bool contains(std::string_view label) const;
    /// Position of an exact canonical label, or nullopt.
    std::optional<std::size_t> index_of(std::string_view label) const;
    std::vector<std::string> labels() const;

    /// The canonical label matching `raw`, or nullopt when no leaf matches.
    std::optional<std::string> canonicalize(std::string_view raw) const;

private:
    std::vector<OntologyLeaf> leaves_;
    std::vector<std::string> keys_;
    std::string version_;
};

/// The eight leaves of the log-derived maintenance ontology, with their
/// observed distribution counts (6169 records in total).
const Ontology& default_ontology();

std::optional<std::string> canonicalize_category(std::string_view raw, const Ontology& ontology);

/// Ontology file: JSON array of {"system", "subcategory", "reference_count"}.
/// The wrapped form {"version", "leaves": [...]} is also accepted and its
/// version overrides `version`. ontology_to_json writes the bare array.
Ontology parse_ontology_json(std::string_view json_text, std::string version);
Ontology load_ontology(const std::string& path);
std::string ontology_to_json(const Ontology& ontology);

enum class ActionCategory {
    ComponentReplacement,
    RepairAdjustment,
    Servicing,
    InspectionTest,
    Other,
};

inline constexpr ActionCategory kAllActionCategories[] = {
    ActionCategory::ComponentReplacement, ActionCategory::RepairAdjustment,
    ActionCategory::Servicing, ActionCategory::InspectionTest, ActionCategory::Other,
};

std::string_view to_string(ActionCategory category);
std::optional<ActionCategory> parse_action_category(std::string_view s);

enum class EventStatus { Valid, Anomalous };

enum class AnomalyReason {
    NoJsonFound,
    MalformedJson,
    MissingField,
    EmptyField,
    CategoryOutOfOntology,
    BackendError,
};

std::string_view to_string(EventStatus status);
std::string_view to_string(AnomalyReason reason);
std::optional<EventStatus> parse_event_status(std::string_view s);
std::optional<AnomalyReason> parse_anomaly_reason(std::string_view s);

struct StructuredEvent {
    std::string record_id;
    std::string summary_problem;
    std::string summary_action;
    std::string failed_component;
    std::string category;  // canonical label; empty when anomalous
    ActionCategory action_category = ActionCategory::Other;
    EventStatus status = EventStatus::Anomalous;
    std::optional<AnomalyReason> anomaly_reason;
    int attempts = 1;

    bool valid() const { return status == EventStatus::Valid; }

    static StructuredEvent anomalous(std::string record_id, AnomalyReason reason, int attempts = 1);
};

/// Throws InvariantError when status, reason and fields disagree.
void check_event_invariants(const StructuredEvent& event, const Ontology& ontology);

struct GoldLabel {
    std::string record_id;
    std::string category;
};

} // namespace logsyn
