#include "logsyn/corpus.hpp"

#include "logsyn/csv.hpp"
#include "logsyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numeric>

namespace logsyn {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw InvariantError("SplitMix64::below(0)");
    const std::uint64_t limit = (0ULL - bound) % bound;  // 2^64 mod bound
    while (true) {
        const std::uint64_t x = next();
        if (x >= limit) return x % bound;
    }
}

namespace {

struct FaultPhrase {
    const char* raw;        // as written in the log
    const char* sentence;   // as a model would summarize it
    const char* component;
};

struct ActionTemplate {
    const char* raw;
    const char* summary;
};

struct CategoryTemplates {
    const char* label;
    std::vector<FaultPhrase> faults;
    std::vector<ActionTemplate> actions;
};

// Actions only use vocabulary that cannot pull the default gazetteer toward
// another category, so a gazetteer run over these records is exact.
const std::vector<CategoryTemplates>& category_templates() {
    static const std::vector<CategoryTemplates> templates = {
        {"Powerplant - Mechanical",
         {{"LOW COMPRESSION", "Low compression", "Cylinder"},
          {"PISTON/RING FAILURE", "Piston/ring failure", "Piston Rings"},
          {"STICKING VALVES", "Sticking valves", "Exhaust Valves"}},
         {{"REMOVED & REPLACED CYLINDER ASSEMBLY.", "The cylinder assembly was replaced."},
          {"REPLACED PISTON RINGS.", "The piston rings were replaced."},
          {"LAPPED VALVES & ADJUSTED VALVE CLEARANCE.",
           "The valves were lapped and the valve clearance adjusted."}}},
        {"Powerplant - Sealing & Gaskets",
         {{"LEAKING ROCKER COVER GASKET", "A leaking rocker cover gasket", "Rocker Cover Gasket"},
          {"INTAKE MANIFOLD LEAK", "An intake manifold leak", "Intake Manifold Gasket"},
          {"OIL SEAL FAILURE", "An oil seal failure", "Oil Seal"}},
         {{"REMOVED & REPLACED GASKET.", "The leaking gasket was replaced."},
          {"REPLACED SEAL.", "The failed seal was replaced."},
          {"RESEALED JOINT, LEAK CHECK GOOD.", "The joint was resealed and leak checked."}}},
        {"Powerplant - Structural Components",
         {{"CRACKED ENGINE BAFFLE", "A cracked engine baffle", "Engine Baffle"},
          {"WORN ENGINE MOUNT", "A worn engine mount", "Engine Mount"},
          {"BROKEN BRACKET", "A broken bracket", "Engine Bracket"}},
         {{"STOP DRILLED CRACK.", "The crack was stop drilled."},
          {"REPLACED ENGINE MOUNT.", "The worn engine mount was replaced."},
          {"REPAIRED & REINFORCED BRACKET.", "The bracket was repaired and reinforced."}}},
        {"Powerplant - Fasteners & Hardware",
         {{"LOOSE ROCKER COVER SCREWS", "Loose rocker cover screws", "Rocker Cover Screws"},
          {"BROKEN HOSE CLAMP", "A broken hose clamp", "Hose Clamp"},
          {"SHEARED RIVETS", "Sheared rivets", "Rivets"}},
         {{"TIGHTENED SCREWS & SAFETY WIRED.", "The loose screws were tightened."},
          {"REPLACED HOSE CLAMP.", "The hose clamp was replaced."},
          {"REPLACED RIVETS.", "The sheared rivets were replaced."}}},
        {"Ignition System - Component Failure",
         {{"FOULED SPARK PLUG", "A fouled spark plug", "Spark Plug"},
          {"MAGNETO FAILURE", "A magneto failure", "Magneto"},
          {"FAULTY IGNITION LEAD", "A faulty ignition lead", "Ignition Lead"}},
         {{"CLEANED & GAPPED SPARK PLUG.", "The spark plug was cleaned and gapped."},
          {"REPLACED MAGNETO, TIMED TO ENGINE.", "The magneto was replaced and timed."},
          {"REPLACED IGNITION LEAD.", "The faulty ignition lead was replaced."}}},
        {"Fuel System - Delivery & Control",
         {{"FUEL SERVO MALFUNCTION", "A fuel servo malfunction", "Fuel Servo"},
          {"CLOGGED INJECTOR NOZZLE", "A clogged injector nozzle", "Injector Nozzle"},
          {"INCORRECT IDLE MIXTURE", "An incorrect idle mixture", "Idle Mixture Setting"}},
         {{"ADJUSTED IDLE MIXTURE.", "The idle mixture was adjusted."},
          {"CLEANED INJECTOR NOZZLE.", "The clogged injector nozzle was cleaned."},
          {"REPLACED FUEL SERVO.", "The fuel servo was replaced."}}},
        {"Performance - Operational Issue",
         {{"ROUGH RUNNING ENGINE", "A rough running engine", "Engine"},
          {"POWER LOSS", "A power loss", "Engine"},
          {"HARD START", "A hard start", "Engine"},
          {"VIBRATION", "Vibration", "Engine"}},
         {{"PERFORMED GROUND RUN, OPS CHECK GOOD.", "A ground run was performed and the engine checked good."},
          {"NO FAULT FOUND.", "No fault found during ground run."},
          {"ADJUSTED PROPELLER BALANCE.", "The propeller balance was adjusted."}}},
        {"Servicing - General Maintenance",
         {{"FOD REMOVAL", "FOD removal", "Engine Compartment"},
          {"ENGINE WASH", "An engine wash", "Engine"},
          {"SCHEDULED COMPRESSION CHECK", "A scheduled compression check", "Cylinders"}},
         {{"REMOVED FOD & CLEANED COMPARTMENT.",
           "Foreign object debris was removed and the compartment cleaned."},
          {"WASHED ENGINE.", "The engine was washed."},
          {"PERFORMED COMPRESSION CHECK, ALL WITHIN LIMITS.",
           "A compression check was performed with all cylinders within limits."}}},
    };
    return templates;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

struct RenderedRecord {
    std::string problem;
    std::string action;
    std::string summary_problem;
    std::string summary_action;
    std::string failed_component;
};

RenderedRecord render(const OntologyLeaf& leaf, SplitMix64& rng) {
    const auto& all = category_templates();
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const CategoryTemplates& t) { return leaf.label == t.label; });

    std::string raw_fault, sentence, component, raw_action, summary_action;
    if (it != all.end()) {
        const auto& f = it->faults[rng.below(it->faults.size())];
        const auto& a = it->actions[rng.below(it->actions.size())];
        raw_fault = f.raw;
        sentence = f.sentence;
        component = f.component;
        raw_action = a.raw;
        summary_action = a.summary;
    } else {
        raw_fault = upper(leaf.subcategory) + " DISCREPANCY";
        sentence = "A " + leaf.subcategory + " discrepancy";
        component = leaf.subcategory;
        raw_action = "CORRECTED DISCREPANCY.";
        summary_action = "The discrepancy was repaired.";
    }

    RenderedRecord r;
    const int cylinder = static_cast<int>(rng.below(4)) + 1;
    switch (rng.below(4)) {
    case 0:
        r.problem = raw_fault + ".";
        r.summary_problem = sentence + " was reported.";
        break;
    case 1:
        r.problem = "#" + std::to_string(cylinder) + " CYL " + raw_fault + ".";
        r.summary_problem = sentence + " was reported on cylinder " + std::to_string(cylinder) + ".";
        component += " (Cyl " + std::to_string(cylinder) + ")";
        break;
    case 2:
        r.problem = "PILOT REPORTS " + raw_fault + ".";
        r.summary_problem = sentence + " was reported by the pilot.";
        break;
    default:
        r.problem = raw_fault + " NOTED AT RUN-UP.";
        r.summary_problem = sentence + " was noted at run-up.";
        break;
    }
    r.action = raw_action;
    r.summary_action = summary_action;
    r.failed_component = component;
    return r;
}

std::string ideal_answer(const RenderedRecord& r, const std::string& category, std::uint64_t style) {
    nlohmann::ordered_json doc;
    doc["summary_problem"] = r.summary_problem;
    doc["summary_action"] = r.summary_action;
    doc["failed_component"] = r.failed_component;
    doc["category"] = category;
    switch (style % 6) {
    case 1: return "```json\n" + doc.dump(2) + "\n```";
    case 3: return "Here is the structured record:\n" + doc.dump() + "\nLet me know if you need more.";
    case 4:
    {
        // Loose spelling that canonicalization must absorb.
        std::string loose;
        for (char c : category) loose.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (const auto sep = loose.find(" - "); sep != std::string::npos) loose.replace(sep, 3, "-");
        doc["category"] = loose;
        return doc.dump();
    }
    default: return doc.dump();
    }
}

std::string date_string(SplitMix64& rng) {
    using namespace std::chrono;
    const sys_days start = year{2012} / January / 1;
    const year_month_day ymd{start + days{static_cast<int>(rng.below(6 * 365))}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<std::size_t> pick_distinct(std::size_t population, std::size_t k, SplitMix64& rng) {
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace

std::string GeneratedCorpus::to_csv() const {
    std::string out = csv::format_row({"ID", "Date", "Problem", "Action Taken"});
    for (const auto& r : rows) {
        const auto date = r.meta.find("Date");
        out += csv::format_row({r.id, date == r.meta.end() ? "" : date->second, r.problem_text, r.action_text});
    }
    return out;
}

GeneratedCorpus generate_corpus(const CorpusOptions& options, const Ontology& ontology) {
    if (options.n < 1) throw InputError("corpus size must be >= 1");
    if (options.malformed < 0 || options.flaky < 0 || options.empty_problem_rows < 0) {
        throw InputError("fault counts must be non-negative");
    }
    if (options.malformed + options.flaky > options.n) {
        throw InputError("malformed + flaky exceeds corpus size");
    }

    // Category weights: reference counts, with unweighted leaves getting the
    // mean of the weighted ones.
    std::vector<std::uint64_t> weights;
    std::uint64_t known_sum = 0, known_n = 0;
    for (const auto& leaf : ontology.leaves()) {
        if (leaf.reference_count) {
            known_sum += static_cast<std::uint64_t>(*leaf.reference_count);
            ++known_n;
        }
    }
    const std::uint64_t default_weight = known_n ? std::max<std::uint64_t>(1, known_sum / known_n) : 1;
    for (const auto& leaf : ontology.leaves()) {
        weights.push_back(leaf.reference_count ? static_cast<std::uint64_t>(*leaf.reference_count)
                                               : default_weight);
    }
    const std::uint64_t total_weight = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
    if (total_weight == 0) throw InputError("ontology reference counts are all zero");

    SplitMix64 rng(options.seed);
    SplitMix64 fault_rng(options.seed ^ 0xA5A5A5A55A5A5A5AULL);

    const auto n = static_cast<std::size_t>(options.n);
    const auto total_rows = n + static_cast<std::size_t>(options.empty_problem_rows);
    std::vector<bool> empty_row(total_rows, false);
    for (auto i : pick_distinct(total_rows, static_cast<std::size_t>(options.empty_problem_rows), fault_rng)) {
        empty_row[i] = true;
    }

    GeneratedCorpus corpus;
    std::vector<RenderedRecord> rendered;
    for (std::size_t row = 0; row < total_rows; ++row) {
        MaintenanceRecord rec;
        rec.id = std::to_string(row + 1);
        rec.meta["Date"] = date_string(rng);
        if (empty_row[row]) {
            rec.action_text = "AWAITING PARTS.";
            corpus.rows.push_back(std::move(rec));
            continue;
        }
        std::uint64_t pick = rng.below(total_weight);
        std::size_t leaf_idx = 0;
        while (pick >= weights[leaf_idx]) pick -= weights[leaf_idx++];
        const auto& leaf = ontology.leaves()[leaf_idx];

        auto r = render(leaf, rng);
        rec.problem_text = r.problem;
        rec.action_text = r.action;

        corpus.gold.push_back({rec.id, leaf.label});
        corpus.fixtures[rec.id] = {ideal_answer(r, leaf.label, row)};

        nlohmann::ordered_json judge;
        judge["summary_accuracy"] = 4 + static_cast<int>(rng.below(2));
        judge["component_accuracy"] = 4 + static_cast<int>(rng.below(2));
        judge["category_relevance"] = 4 + static_cast<int>(rng.below(2));
        corpus.judge_fixtures[rec.id] = {judge.dump()};

        rendered.push_back(std::move(r));
        corpus.rows.push_back(std::move(rec));
    }

    const auto faulty = pick_distinct(n, static_cast<std::size_t>(options.malformed + options.flaky), fault_rng);
    for (std::size_t i = 0; i < faulty.size(); ++i) {
        const auto& id = corpus.gold[faulty[i]].record_id;
        auto& seq = corpus.fixtures[id];
        if (i < static_cast<std::size_t>(options.malformed)) {
            const auto& r = rendered[faulty[i]];
            seq = {"{\"summary_problem\": " + nlohmann::json(r.summary_problem).dump() + ", \"category\": }"};
            corpus.malformed_ids.push_back(id);
        } else {
            seq.insert(seq.begin(), "Sorry, I could not process that entry.");
            corpus.flaky_ids.push_back(id);
        }
    }
    return corpus;
}

std::vector<GoldLabel> inject_label_noise(const std::vector<GoldLabel>& gold, double rate,
                                          std::uint64_t seed, const Ontology& ontology) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("noise rate must be within [0, 1]");
    if (ontology.size() < 2 && rate > 0.0) throw InputError("label noise needs at least two labels");
    SplitMix64 rng(seed);
    std::vector<GoldLabel> out = gold;
    for (auto& g : out) {
        if (rng.uniform() >= rate) continue;
        const auto current = ontology.index_of(g.category);
        if (!current) throw InputError("gold category '" + g.category + "' is not in the ontology");
        auto other = static_cast<std::size_t>(rng.below(ontology.size() - 1));
        if (other >= *current) ++other;
        g.category = ontology.leaves()[other].label;
    }
    return out;
}

} // namespace logsyn
