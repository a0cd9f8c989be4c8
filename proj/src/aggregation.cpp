#include "logsyn/aggregation.hpp"

#include "logsyn/csv.hpp"
#include "logsyn/errors.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <filesystem>
#include <nlohmann/json.hpp>

namespace logsyn {

std::int64_t Distribution::count(const std::string& label) const {
    for (const auto& [l, c] : counts) {
        if (l == label) return c;
    }
    return 0;
}

Distribution category_distribution(const std::vector<StructuredEvent>& events, const Ontology& ontology) {
    Distribution d;
    for (const auto& leaf : ontology.leaves()) d.counts.emplace_back(leaf.label, 0);
    for (const auto& e : events) {
        if (!e.valid()) {
            ++d.total_anomalous;
            continue;
        }
        const auto idx = ontology.index_of(e.category);
        if (!idx) {
            throw InvariantError("valid event '" + e.record_id + "' has out-of-ontology category '" +
                                 e.category + "'");
        }
        ++d.counts[*idx].second;
        ++d.total_valid;
    }
    return d;
}

std::int64_t PathwayMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& kv : flows) t += kv.second;
    return t;
}

std::int64_t PathwayMatrix::at(const std::string& category, ActionCategory action) const {
    const auto it = flows.find({category, action});
    return it == flows.end() ? 0 : it->second;
}

PathwayMatrix pathway_matrix(const std::vector<StructuredEvent>& events) {
    PathwayMatrix m;
    for (const auto& e : events) {
        if (e.valid()) ++m.flows[{e.category, e.action_category}];
    }
    return m;
}

namespace {

std::vector<std::string> order_by_flow(const std::map<std::string, std::int64_t>& totals) {
    std::vector<std::pair<std::string, std::int64_t>> v(totals.begin(), totals.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> ids;
    for (auto& p : v) ids.push_back(std::move(p.first));
    return ids;
}

std::string side_name(SankeySide s) {
    return s == SankeySide::Problem ? "Problem" : "Action";
}

} // namespace

SankeyData to_sankey(const PathwayMatrix& matrix) {
    std::map<std::string, std::int64_t> out_flow;
    std::map<std::string, std::int64_t> in_flow;
    for (const auto& [cell, value] : matrix.flows) {
        if (value <= 0) continue;
        out_flow[cell.first] += value;
        in_flow[std::string(to_string(cell.second))] += value;
    }

    SankeyData s;
    const auto problems = order_by_flow(out_flow);
    const auto actions = order_by_flow(in_flow);
    for (const auto& id : problems) s.nodes.push_back({id, SankeySide::Problem});
    for (const auto& id : actions) s.nodes.push_back({id, SankeySide::Action});

    for (const auto& p : problems) {
        for (const auto& a : actions) {
            const auto action = parse_action_category(a);
            const auto v = matrix.at(p, *action);
            if (v > 0) s.links.push_back({p, a, v});
        }
    }
    return s;
}

std::string distribution_to_json(const Distribution& d) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [label, c] : d.counts) counts[label] = c;
    doc["counts"] = std::move(counts);
    doc["total_valid"] = d.total_valid;
    doc["total_anomalous"] = d.total_anomalous;
    return doc.dump(2) + "\n";
}

std::string distribution_to_csv(const Distribution& d) {
    std::string out = csv::format_row({"label", "count"});
    for (const auto& [label, c] : d.counts) out += csv::format_row({label, std::to_string(c)});
    return out;
}

std::string sankey_to_json(const SankeyData& s) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : s.nodes) doc["nodes"].push_back({{"id", n.id}, {"side", side_name(n.side)}});
    doc["links"] = nlohmann::ordered_json::array();
    for (const auto& l : s.links) {
        doc["links"].push_back({{"source", l.source}, {"target", l.target}, {"value", l.value}});
    }
    return doc.dump(2) + "\n";
}

std::string pathways_to_csv(const PathwayMatrix& m, const Ontology& ontology) {
    std::string out = csv::format_row({"category", "action_category", "count"});
    for (const auto& leaf : ontology.leaves()) {
        for (const auto action : kAllActionCategories) {
            const auto v = m.at(leaf.label, action);
            if (v > 0) out += csv::format_row({leaf.label, std::string(to_string(action)), std::to_string(v)});
        }
    }
    return out;
}

void write_report_bundle(const std::string& out_dir, const std::vector<StructuredEvent>& events,
                         const Ontology& ontology) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto dist = category_distribution(events, ontology);
    const auto matrix = pathway_matrix(events);
    const auto sankey = to_sankey(matrix);

    std::int64_t link_total = 0;
    for (const auto& l : sankey.links) link_total += l.value;
    if (link_total != matrix.total() || matrix.total() != dist.total_valid) {
        throw InvariantError("flow totals disagree: links " + std::to_string(link_total) + ", matrix " +
                             std::to_string(matrix.total()) + ", valid " + std::to_string(dist.total_valid));
    }

    const fs::path dir(out_dir);
    text::write_file((dir / "distribution.json").string(), distribution_to_json(dist));
    text::write_file((dir / "distribution.csv").string(), distribution_to_csv(dist));
    text::write_file((dir / "sankey.json").string(), sankey_to_json(sankey));
    text::write_file((dir / "pathways.csv").string(), pathways_to_csv(matrix, ontology));
}

} // namespace logsyn
