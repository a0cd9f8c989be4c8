#pragma once

#include "logsyn/domain.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace logsyn {

/// SplitMix64 (Steele, Lea and Flood). Fixed here so generated corpora are
/// reproducible across platforms and standard library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform();
    /// Uniform in [0, bound) without modulo bias. bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

struct CorpusOptions {
    std::uint64_t seed = 1;
    std::int64_t n = 100;              // accepted records
    std::int64_t malformed = 0;        // keys whose every response is malformed JSON
    std::int64_t flaky = 0;            // keys answered [garbage, valid]
    std::int64_t empty_problem_rows = 0;  // extra CSV rows that ingestion must reject
};

struct GeneratedCorpus {
    /// Every CSV row in id order, including rows with an empty problem.
    std::vector<MaintenanceRecord> rows;
    std::vector<GoldLabel> gold;
    std::map<std::string, std::vector<std::string>> fixtures;
    std::map<std::string, std::vector<std::string>> judge_fixtures;
    std::vector<std::string> malformed_ids;
    std::vector<std::string> flaky_ids;

    /// Headers: ID, Date, Problem, Action Taken.
    std::string to_csv() const;
};

/// Samples categories in proportion to the ontology's reference counts and
/// renders log text from per-category templates built on each leaf's example
/// fault phrases. Fixtures hold the ideal model answer for every record.
/// Throws InputError when n < 1 or the fault counts exceed n.
GeneratedCorpus generate_corpus(const CorpusOptions& options, const Ontology& ontology);

/// With probability `rate` per record, swaps the gold label for a different
/// label drawn uniformly from the rest of the ontology.
std::vector<GoldLabel> inject_label_noise(const std::vector<GoldLabel>& gold, double rate,
                                          std::uint64_t seed, const Ontology& ontology);

} // namespace logsyn
