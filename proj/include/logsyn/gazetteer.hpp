#pragma once

#include "logsyn/domain.hpp"
#include "logsyn/ingestion.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

struct GazetteerRule {
    std::vector<std::string> keywords;
    std::string label;
};

/// Ordered keyword rules. The first rule with any keyword present in the
/// record text decides the label.
class Gazetteer {
public:
    /// Throws InputError for empty keyword lists or labels outside the ontology.
    Gazetteer(std::vector<GazetteerRule> rules, std::string fallback_label, const Ontology& ontology);

    const std::vector<GazetteerRule>& rules() const { return rules_; }
    const std::string& fallback_label() const { return fallback_; }

    std::string classify(std::string_view text) const;

private:
    std::vector<GazetteerRule> rules_;
    std::string fallback_;
};

/// Rules seeded by the example fault phrases of each ontology leaf, plus the
/// head terms of those phrases. Falls back to "Performance - Operational Issue".
const Gazetteer& default_gazetteer();

inline constexpr std::string_view kGazetteerFallback = "Performance - Operational Issue";

/// {"fallback": label, "rules": [{"label": ..., "keywords": [...]}, ...]}
Gazetteer parse_gazetteer_json(std::string_view json_text, const Ontology& ontology);
Gazetteer load_gazetteer(const std::string& path, const Ontology& ontology);
std::string gazetteer_to_json(const Gazetteer& gazetteer);

std::string rule_based_classify(const CleanRecord& record, const Gazetteer& gazetteer);

/// Valid events labelled by the gazetteer, one per record, for comparison
/// against gold labels alongside the LLM runs.
std::vector<StructuredEvent> rule_based_events(const std::vector<CleanRecord>& records,
                                               const Gazetteer& gazetteer);

} // namespace logsyn
