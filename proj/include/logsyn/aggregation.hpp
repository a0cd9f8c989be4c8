#pragma once

#include "logsyn/domain.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace logsyn {

/// Valid-event counts per ontology leaf, in ontology order.
struct Distribution {
    std::vector<std::pair<std::string, std::int64_t>> counts;
    std::int64_t total_valid = 0;
    std::int64_t total_anomalous = 0;

    std::int64_t count(const std::string& label) const;
};

/// Throws InvariantError for a Valid event whose category is outside the
/// ontology.
Distribution category_distribution(const std::vector<StructuredEvent>& events, const Ontology& ontology);

struct PathwayMatrix {
    std::map<std::pair<std::string, ActionCategory>, std::int64_t> flows;

    std::int64_t total() const;
    std::int64_t at(const std::string& category, ActionCategory action) const;
};

PathwayMatrix pathway_matrix(const std::vector<StructuredEvent>& events);

enum class SankeySide { Problem, Action };

struct SankeyNode {
    std::string id;
    SankeySide side;
};

struct SankeyLink {
    std::string source;
    std::string target;
    std::int64_t value;
};

struct SankeyData {
    std::vector<SankeyNode> nodes;  // problem nodes first, then action nodes
    std::vector<SankeyLink> links;
};

/// Nodes with non-zero flow only, each side ordered by descending total flow
/// with ties broken alphabetically. Links follow source then target node order.
SankeyData to_sankey(const PathwayMatrix& matrix);

std::string distribution_to_json(const Distribution& d);
std::string distribution_to_csv(const Distribution& d);
std::string sankey_to_json(const SankeyData& s);
std::string pathways_to_csv(const PathwayMatrix& m, const Ontology& ontology);

/// Writes distribution.json, distribution.csv, sankey.json and pathways.csv
/// into `out_dir` (created if absent).
void write_report_bundle(const std::string& out_dir, const std::vector<StructuredEvent>& events,
                         const Ontology& ontology);

} // namespace logsyn
