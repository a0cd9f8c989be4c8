#pragma once

#include "logsyn/domain.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

/// Gold file: CSV with header record_id,category. Categories are
/// canonicalized; unknown categories and duplicate ids are InputErrors.
std::vector<GoldLabel> parse_gold_csv(std::string_view content, const Ontology& ontology);
std::vector<GoldLabel> load_gold(const std::string& path, const Ontology& ontology);
std::string gold_to_csv(const std::vector<GoldLabel>& gold);

/// Rows are gold labels, columns predictions, both in ontology order. Gold
/// records whose prediction is missing or anomalous are tallied in
/// `coverage`, per gold class.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::int64_t>> cells;
    std::vector<std::int64_t> class_coverage;
    std::int64_t coverage = 0;

    std::int64_t scored() const;  // sum of cells
    std::int64_t gold_total(std::size_t label) const;
};

/// Predictions without a gold label are ignored. Throws InputError on
/// duplicate gold ids or gold categories outside the ontology.
ConfusionMatrix confusion_matrix(const std::vector<GoldLabel>& gold,
                                 const std::vector<StructuredEvent>& events, const Ontology& ontology);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;  // gold instances, including uncovered ones
};

struct MetricsReport {
    double accuracy = 0.0;
    std::map<std::string, ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1_mean = 0.0;      // mean of per-class F1
    double macro_f1_harmonic = 0.0;  // 2PR/(P+R) of the macro P and R
    std::int64_t scored = 0;
    std::int64_t coverage = 0;
};

double harmonic_f1(double precision, double recall);

/// Uncovered gold records count as errors in accuracy and recall. Macro
/// averages run over the labels that occur in the gold set. Throws
/// InputError("no scored records") for an empty matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

/// A rendered metric table: named rows by named system columns, cells kept
/// as text so reference tables survive a parse/emit round trip unchanged.
struct MetricTable {
    std::vector<std::string> systems;
    std::vector<std::string> metrics;
    std::vector<std::vector<std::string>> cells;  // [metric][system]
};

std::string table_to_csv(const MetricTable& table);
MetricTable parse_table_csv(std::string_view content);

struct SystemPredictions {
    std::string name;
    std::vector<StructuredEvent> events;
};

struct SystemComparison {
    std::vector<std::string> systems;
    std::vector<MetricsReport> reports;
    std::vector<std::int64_t> ignored_predictions;  // ids absent from gold

    MetricTable table() const;
    std::string to_json() const;
};

/// Throws InputError when `systems` is empty.
SystemComparison compare_systems(const std::vector<SystemPredictions>& systems,
                                 const std::vector<GoldLabel>& gold, const Ontology& ontology);

} // namespace logsyn
