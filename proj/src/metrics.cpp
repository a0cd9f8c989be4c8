#include "logsyn/metrics.hpp"

#include "logsyn/csv.hpp"
#include "logsyn/errors.hpp"
#include "logsyn/text.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

namespace logsyn {

std::vector<GoldLabel> parse_gold_csv(std::string_view content, const Ontology& ontology) {
    const auto rows = csv::read(content);
    if (rows.empty()) throw InputError("gold file is empty");
    const auto& header = rows.front().fields;
    if (header.size() < 2 || text::trim(header[0]) != "record_id" || text::trim(header[1]) != "category") {
        throw InputError("gold file header must be record_id,category");
    }
    std::vector<GoldLabel> gold;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        const std::string where = "gold line " + std::to_string(rows[r].line);
        if (f.size() < 2) throw InputError(where + ": expected 2 fields");
        const auto id = text::trim(f[0]);
        if (id.empty()) throw InputError(where + ": empty record_id");
        const auto label = ontology.canonicalize(f[1]);
        if (!label) throw InputError(where + ": category '" + f[1] + "' is not in the ontology");
        if (!seen.insert(id).second) throw InputError(where + ": duplicate record_id '" + id + "'");
        gold.push_back({id, *label});
    }
    return gold;
}

std::vector<GoldLabel> load_gold(const std::string& path, const Ontology& ontology) {
    return parse_gold_csv(text::read_file(path), ontology);
}

std::string gold_to_csv(const std::vector<GoldLabel>& gold) {
    std::string out = csv::format_row({"record_id", "category"});
    for (const auto& g : gold) out += csv::format_row({g.record_id, g.category});
    return out;
}

std::int64_t ConfusionMatrix::scored() const {
    std::int64_t s = 0;
    for (const auto& row : cells) {
        for (auto v : row) s += v;
    }
    return s;
}

std::int64_t ConfusionMatrix::gold_total(std::size_t label) const {
    std::int64_t s = class_coverage[label];
    for (auto v : cells[label]) s += v;
    return s;
}

ConfusionMatrix confusion_matrix(const std::vector<GoldLabel>& gold,
                                 const std::vector<StructuredEvent>& events, const Ontology& ontology) {
    ConfusionMatrix cm;
    cm.labels = ontology.labels();
    const std::size_t k = cm.labels.size();
    cm.cells.assign(k, std::vector<std::int64_t>(k, 0));
    cm.class_coverage.assign(k, 0);

    std::unordered_map<std::string, const StructuredEvent*> by_id;
    for (const auto& e : events) by_id.emplace(e.record_id, &e);

    std::set<std::string> seen;
    for (const auto& g : gold) {
        if (!seen.insert(g.record_id).second) {
            throw InputError("duplicate gold record_id '" + g.record_id + "'");
        }
        const auto row = ontology.index_of(g.category);
        if (!row) throw InputError("gold category '" + g.category + "' is not in the ontology");
        const auto it = by_id.find(g.record_id);
        if (it == by_id.end() || !it->second->valid()) {
            ++cm.class_coverage[*row];
            ++cm.coverage;
            continue;
        }
        const auto col = ontology.index_of(it->second->category);
        if (!col) {
            throw InvariantError("valid event '" + g.record_id + "' has out-of-ontology category");
        }
        ++cm.cells[*row][*col];
    }
    return cm;
}

double harmonic_f1(double precision, double recall) {
    const double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const std::size_t k = cm.labels.size();
    MetricsReport r;
    r.scored = cm.scored();
    r.coverage = cm.coverage;
    const std::int64_t denom = r.scored + r.coverage;
    if (denom == 0) throw InputError("no scored records");

    std::int64_t trace = 0;
    for (std::size_t i = 0; i < k; ++i) trace += cm.cells[i][i];
    r.accuracy = static_cast<double>(trace) / static_cast<double>(denom);

    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::int64_t tp = cm.cells[c][c];
        std::int64_t predicted = 0;
        for (std::size_t g = 0; g < k; ++g) predicted += cm.cells[g][c];
        const std::int64_t support = cm.gold_total(c);

        ClassMetrics m;
        m.support = support;
        m.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        m.recall = support > 0 ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
        m.f1 = harmonic_f1(m.precision, m.recall);
        r.per_class[cm.labels[c]] = m;

        if (support > 0) {
            ++present;
            r.macro_precision += m.precision;
            r.macro_recall += m.recall;
            r.macro_f1_mean += m.f1;
        }
    }
    const double n = static_cast<double>(present);
    r.macro_precision /= n;
    r.macro_recall /= n;
    r.macro_f1_mean /= n;
    r.macro_f1_harmonic = harmonic_f1(r.macro_precision, r.macro_recall);
    return r;
}

std::string table_to_csv(const MetricTable& table) {
    std::vector<std::string> header{"Metric"};
    header.insert(header.end(), table.systems.begin(), table.systems.end());
    std::string out = csv::format_row(header);
    for (std::size_t m = 0; m < table.metrics.size(); ++m) {
        std::vector<std::string> row{table.metrics[m]};
        row.insert(row.end(), table.cells[m].begin(), table.cells[m].end());
        out += csv::format_row(row);
    }
    return out;
}

MetricTable parse_table_csv(std::string_view content) {
    const auto rows = csv::read(content);
    if (rows.empty() || rows.front().fields.size() < 2 || rows.front().fields[0] != "Metric") {
        throw InputError("metric table must start with a Metric,<system>... header");
    }
    MetricTable t;
    t.systems.assign(rows.front().fields.begin() + 1, rows.front().fields.end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        if (f.size() != t.systems.size() + 1) {
            throw InputError("metric table line " + std::to_string(rows[r].line) + ": wrong column count");
        }
        t.metrics.push_back(f[0]);
        t.cells.emplace_back(f.begin() + 1, f.end());
    }
    return t;
}

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

MetricTable SystemComparison::table() const {
    MetricTable t;
    t.systems = systems;
    t.metrics = {"Accuracy", "Precision (Macro)", "Recall (Macro)", "F1-Score (Macro, mean)",
                 "F1-Score (Macro, harmonic)"};
    t.cells.assign(t.metrics.size(), {});
    for (const auto& r : reports) {
        t.cells[0].push_back(fixed4(r.accuracy));
        t.cells[1].push_back(fixed4(r.macro_precision));
        t.cells[2].push_back(fixed4(r.macro_recall));
        t.cells[3].push_back(fixed4(r.macro_f1_mean));
        t.cells[4].push_back(fixed4(r.macro_f1_harmonic));
    }
    return t;
}

std::string SystemComparison::to_json() const {
    nlohmann::ordered_json doc;
    doc["systems"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < systems.size(); ++i) {
        const auto& r = reports[i];
        nlohmann::ordered_json s;
        s["name"] = systems[i];
        s["accuracy"] = r.accuracy;
        s["macro_precision"] = r.macro_precision;
        s["macro_recall"] = r.macro_recall;
        s["macro_f1_mean"] = r.macro_f1_mean;
        s["macro_f1_harmonic"] = r.macro_f1_harmonic;
        s["scored"] = r.scored;
        s["coverage"] = r.coverage;
        s["ignored_predictions"] = ignored_predictions[i];
        nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
        for (const auto& [label, m] : r.per_class) {
            per_class[label] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                                {"support", m.support}};
        }
        s["per_class"] = std::move(per_class);
        doc["systems"].push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

SystemComparison compare_systems(const std::vector<SystemPredictions>& systems,
                                 const std::vector<GoldLabel>& gold, const Ontology& ontology) {
    if (systems.empty()) throw InputError("compare_systems needs at least one system");
    std::set<std::string> gold_ids;
    for (const auto& g : gold) gold_ids.insert(g.record_id);

    SystemComparison out;
    for (const auto& sys : systems) {
        std::int64_t ignored = 0;
        for (const auto& e : sys.events) {
            if (!gold_ids.count(e.record_id)) ++ignored;
        }
        out.systems.push_back(sys.name);
        out.reports.push_back(compute_metrics(confusion_matrix(gold, sys.events, ontology)));
        out.ignored_predictions.push_back(ignored);
    }
    return out;
}

} // namespace logsyn
