#include "logsyn/cli.hpp"

#include "logsyn/aggregation.hpp"
#include "logsyn/corpus.hpp"
#include "logsyn/errors.hpp"
#include "logsyn/extraction.hpp"
#include "logsyn/gazetteer.hpp"
#include "logsyn/hashing.hpp"
#include "logsyn/ingestion.hpp"
#include "logsyn/judge.hpp"
#include "logsyn/metrics.hpp"
#include "logsyn/prompting.hpp"
#include "logsyn/text.hpp"

#include <CLI11.hpp>
#include <ctime>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>

namespace logsyn::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Config keys that name files; relative values in a config file resolve
// against the config file's directory.
const char* const kPathKeys[] = {"corpus",     "ontology", "abbreviations",  "exemplars", "template",
                                 "gazetteer",  "gold",     "fixtures",       "judge_fixtures",
                                 "events",     "zero_shot_events", "out"};

/// Merged run settings: config file values overlaid by command-line flags.
class Settings {
public:
    json values = json::object();

    void load_config(const std::string& path) {
        json doc;
        try {
            doc = json::parse(text::read_file(path));
        } catch (const json::exception& e) {
            throw InputError("config '" + path + "' is not valid JSON: " + e.what());
        }
        if (!doc.is_object()) throw InputError("config '" + path + "' must be a JSON object");
        const fs::path base = fs::path(path).parent_path();
        const auto resolve = [&](const std::string& p) {
            return fs::path(p).is_absolute() || base.empty() ? p : (base / p).lexically_normal().string();
        };
        for (const char* key : kPathKeys) {
            if (doc.contains(key) && doc[key].is_string()) doc[key] = resolve(doc[key].get<std::string>());
        }
        if (doc.contains("templates") && doc["templates"].is_object()) {
            for (auto& [id, p] : doc["templates"].items()) {
                if (p.is_string()) p = resolve(p.get<std::string>());
            }
        }
        for (auto& [k, v] : doc.items()) values[k] = v;
    }

    bool has(const std::string& key) const { return values.contains(key) && !values[key].is_null(); }

    std::optional<std::string> string(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        if (!values[key].is_string()) throw InputError("config key '" + key + "' must be a string");
        return values[key].get<std::string>();
    }

    std::string string_or(const std::string& key, const std::string& fallback) const {
        return string(key).value_or(fallback);
    }

    std::string require_path(const std::string& key, const std::string& flag) const {
        const auto p = string(key);
        if (!p) throw InputError("missing required input: " + flag + " (config key '" + key + "')");
        return *p;
    }

    std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
        if (!has(key)) return fallback;
        if (!values[key].is_number_integer()) throw InputError("config key '" + key + "' must be an integer");
        return values[key].get<std::int64_t>();
    }

    double number_or(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        if (!values[key].is_number()) throw InputError("config key '" + key + "' must be a number");
        return values[key].get<double>();
    }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!values[key].is_boolean()) throw InputError("config key '" + key + "' must be true or false");
        return values[key].get<bool>();
    }
};

void require_files(const Settings& s, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (const auto p = s.string(key); p && !fs::is_regular_file(*p)) {
            throw InputError("input file for '" + std::string(key) + "' does not exist: " + *p);
        }
    }
    if (s.has("templates")) {
        if (!s.values["templates"].is_object()) throw InputError("config key 'templates' must be an object");
        for (const auto& [id, p] : s.values["templates"].items()) {
            if (!p.is_string() || !fs::is_regular_file(p.get<std::string>())) {
                throw InputError("template file for variant '" + id + "' does not exist");
            }
        }
    }
}

std::string timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        try {
            t = static_cast<std::time_t>(std::stoll(epoch));
        } catch (const std::exception&) {
            throw InputError("SOURCE_DATE_EPOCH is not an integer");
        }
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string prepare_out_dir(const Settings& s) {
    const auto dir = s.string_or("out", "out");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory: " + dir);
    return dir;
}

void write_manifest(const std::string& dir, const std::string& subcommand, const Settings& s, json extra) {
    json m;
    m["tool"] = "logsyn";
    m["subcommand"] = subcommand;
    for (auto& [k, v] : extra.items()) m[k] = v;
    m["config"] = s.values;
    m["timestamp"] = timestamp();
    text::write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

Ontology resolve_ontology(const Settings& s) {
    if (const auto p = s.string("ontology")) return load_ontology(*p);
    return default_ontology();
}

ColumnMap resolve_columns(const Settings& s) {
    ColumnMap columns;
    if (s.has("columns")) {
        const auto& c = s.values["columns"];
        if (!c.is_object()) throw InputError("config key 'columns' must be an object");
        if (c.contains("id")) columns.id = c["id"].get<std::string>();
        if (c.contains("problem")) columns.problem = c["problem"].get<std::string>();
        if (c.contains("action")) columns.action = c["action"].get<std::string>();
    }
    return columns;
}

AbbreviationDictionary resolve_abbreviations(const Settings& s) {
    if (const auto p = s.string("abbreviations")) return load_abbreviations(*p);
    return default_abbreviations();
}

struct LoadedCorpus {
    LoadResult load;
    std::vector<CleanRecord> records;
};

LoadedCorpus load_corpus(const Settings& s) {
    LoadedCorpus c;
    c.load = load_records_file(s.require_path("corpus", "--input"), resolve_columns(s));
    c.records = clean_records(c.load.records, resolve_abbreviations(s));
    return c;
}

PromptTemplate resolve_template(const Settings& s) {
    const auto variant = s.string("prompt_variant");
    if (variant && s.has("templates") && s.values["templates"].contains(*variant)) {
        auto t = load_template(s.values["templates"][*variant].get<std::string>());
        if (t.variant_id != *variant) {
            throw InputError("template file for '" + *variant + "' declares variant_id '" + t.variant_id + "'");
        }
        return t;
    }
    if (variant) {
        if (const auto* t = find_builtin_template(*variant)) return *t;
        if (fs::is_regular_file(*variant)) return load_template(*variant);
        throw InputError("unknown prompt variant '" + *variant + "'");
    }
    if (const auto p = s.string("template")) return load_template(*p);
    return default_template();
}

CompletionParams resolve_params(const Settings& s) {
    CompletionParams p;
    p.model = s.string_or("model", p.model);
    p.temperature = s.number_or("temperature", p.temperature);
    p.max_output_tokens = static_cast<int>(s.integer_or("max_output_tokens", p.max_output_tokens));
    p.timeout = std::chrono::milliseconds(
        static_cast<std::int64_t>(s.number_or("timeout_seconds", 60.0) * 1000.0));
    p.validate();
    return p;
}

int resolve_parallelism(const Settings& s) {
    const auto p = s.integer_or("parallelism", 4);
    if (p < 1 || p > 256) throw InputError("parallelism must be within [1, 256]");
    return static_cast<int>(p);
}

std::unique_ptr<CompletionBackend> make_backend(const Settings& s, const char* fixtures_key) {
    const auto kind = s.string_or("backend", "scripted");
    if (kind == "scripted") {
        const auto path = s.require_path(fixtures_key, "--fixtures");
        ScriptedBackend::Options options;
        options.strict = s.boolean_or("strict_fixtures", true);
        return std::make_unique<ScriptedBackend>(load_fixtures(path), options);
    }
    if (kind == "http") {
        auto config = HttpBackendConfig::from_environment();
        const auto retries = s.integer_or("transport_retries", config.retry.max_retries);
        if (retries < 0 || retries > 10) throw InputError("transport_retries must be within [0, 10]");
        config.retry.max_retries = static_cast<int>(retries);
        return std::make_unique<HttpBackend>(std::move(config));
    }
    throw InputError("unknown backend '" + kind + "' (expected scripted or http)");
}

json count_reasons(const std::vector<StructuredEvent>& events) {
    json reasons = json::object();
    for (const auto& e : events) {
        if (e.anomaly_reason) {
            const std::string k(to_string(*e.anomaly_reason));
            reasons[k] = reasons.value(k, 0) + 1;
        }
    }
    return reasons;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Settings& s, std::ostream& out, std::ostream& err) {
    require_files(s, {"corpus", "abbreviations"});
    const auto dir = prepare_out_dir(s);
    const auto corpus = load_corpus(s);
    for (const auto& r : corpus.load.rejected) err << "rejected row " << r.row_number << ": " << r.reason << "\n";
    out << "rows " << corpus.load.total_rows << " accepted " << corpus.load.records.size() << " rejected "
        << corpus.load.rejected.size() << "\n";
    write_manifest(dir, "ingest", s,
                   {{"counts",
                     {{"rows", corpus.load.total_rows},
                      {"accepted", corpus.load.records.size()},
                      {"rejected", corpus.load.rejected.size()}}}});
    return kExitOk;
}

int cmd_structure(const Settings& s, std::ostream& out, std::ostream& err) {
    require_files(s, {"corpus", "abbreviations", "ontology", "exemplars", "template", "fixtures"});
    const auto ontology = resolve_ontology(s);
    const auto tmpl = resolve_template(s);
    const auto params = resolve_params(s);
    const int parallelism = resolve_parallelism(s);

    ExtractionConfig config;
    config.content_retries = static_cast<int>(s.integer_or("content_retries", config.content_retries));
    config.strict_extra_fields = s.boolean_or("strict_extra_fields", config.strict_extra_fields);
    config.validate();

    std::vector<Exemplar> exemplars;
    std::string exemplar_bytes;
    if (const auto p = s.string("exemplars")) {
        exemplar_bytes = text::read_file(*p);
        exemplars = parse_exemplars_jsonl(exemplar_bytes);
    } else {
        exemplars = default_exemplars();
        exemplar_bytes = exemplars_to_jsonl(exemplars);
    }
    for (std::size_t i = 0; i < exemplars.size(); ++i) validate_exemplar(exemplars[i], ontology, i);
    if (s.has("shots")) {
        const auto shots = s.integer_or("shots", 0);
        if (shots < 0 || static_cast<std::size_t>(shots) > exemplars.size()) {
            throw InputError("--shots must be within [0, " + std::to_string(exemplars.size()) + "]");
        }
        exemplars.resize(static_cast<std::size_t>(shots));
    }

    auto backend = make_backend(s, "fixtures");
    const auto dir = prepare_out_dir(s);
    const auto corpus = load_corpus(s);
    for (const auto& r : corpus.load.rejected) err << "rejected row " << r.row_number << ": " << r.reason << "\n";

    const ExtractionContext ctx{*backend, params, exemplars, tmpl, ontology, config};
    const auto events = structure_records(corpus.records, ctx, parallelism);
    if (events.size() != corpus.records.size()) throw InvariantError("event count differs from record count");

    std::int64_t valid = 0;
    for (const auto& e : events) valid += e.valid() ? 1 : 0;
    const auto anomalous = static_cast<std::int64_t>(events.size()) - valid;

    text::write_file((fs::path(dir) / "events.jsonl").string(), events_to_jsonl(events));
    write_manifest(dir, "structure", s,
                   {{"backend", backend->name()},
                    {"model", params.model},
                    {"temperature", params.temperature},
                    {"template_variant", tmpl.variant_id},
                    {"shots", exemplars.size()},
                    {"exemplar_file_hash", sha256_hex(exemplar_bytes)},
                    {"ontology_version", ontology.version()},
                    {"counts",
                     {{"rows", corpus.load.total_rows},
                      {"accepted", corpus.load.records.size()},
                      {"rejected", corpus.load.rejected.size()},
                      {"valid", valid},
                      {"anomalous", anomalous},
                      {"anomaly_reasons", count_reasons(events)}}}});
    out << "structured " << events.size() << " records: " << valid << " valid, " << anomalous
        << " anomalous (" << corpus.load.rejected.size() << " rows rejected at ingestion)\n";
    return kExitOk;
}

int cmd_report(const Settings& s, std::ostream& out, std::ostream&) {
    require_files(s, {"events", "ontology"});
    const auto ontology = resolve_ontology(s);
    const auto events = load_events(s.require_path("events", "--events"), ontology);
    const auto dir = prepare_out_dir(s);
    write_report_bundle(dir, events, ontology);
    const auto dist = category_distribution(events, ontology);
    write_manifest(dir, "report", s,
                   {{"ontology_version", ontology.version()},
                    {"counts", {{"valid", dist.total_valid}, {"anomalous", dist.total_anomalous}}}});
    out << "report: " << dist.total_valid << " valid, " << dist.total_anomalous << " anomalous -> " << dir << "\n";
    return kExitOk;
}

int cmd_evaluate(const Settings& s, const std::vector<std::string>& extra_systems, std::ostream& out,
                 std::ostream& err) {
    require_files(s, {"events", "gold", "ontology", "zero_shot_events", "corpus", "abbreviations", "gazetteer"});
    const auto ontology = resolve_ontology(s);
    const auto gold = load_gold(s.require_path("gold", "--gold"), ontology);

    std::vector<SystemPredictions> systems;
    systems.push_back({s.string_or("system_name", "few-shot"),
                       load_events(s.require_path("events", "--events"), ontology)});
    if (const auto p = s.string("zero_shot_events")) systems.push_back({"zero-shot", load_events(*p, ontology)});
    for (const auto& spec : extra_systems) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw InputError("--system expects NAME=EVENTS_PATH, got '" + spec + "'");
        }
        const auto path = spec.substr(eq + 1);
        if (!fs::is_regular_file(path)) throw InputError("events file does not exist: " + path);
        systems.push_back({spec.substr(0, eq), load_events(path, ontology)});
    }
    if (s.string_or("baseline", "") == "rules") {
        const auto gazetteer = s.string("gazetteer") ? load_gazetteer(*s.string("gazetteer"), ontology)
                                                     : default_gazetteer();
        const auto corpus = load_corpus(s);
        systems.push_back({"rule-based", rule_based_events(corpus.records, gazetteer)});
    } else if (s.has("baseline")) {
        throw InputError("unknown baseline '" + s.string_or("baseline", "") + "' (expected rules)");
    }

    const auto comparison = compare_systems(systems, gold, ontology);
    for (std::size_t i = 0; i < comparison.systems.size(); ++i) {
        if (comparison.ignored_predictions[i] > 0) {
            err << "warning: " << comparison.systems[i] << ": " << comparison.ignored_predictions[i]
                << " predictions have no gold label and were ignored\n";
        }
    }
    const auto dir = prepare_out_dir(s);
    const auto table_csv = table_to_csv(comparison.table());
    text::write_file((fs::path(dir) / "comparison.csv").string(), table_csv);
    text::write_file((fs::path(dir) / "comparison.json").string(), comparison.to_json());
    write_manifest(dir, "evaluate", s, {{"systems", comparison.systems}, {"counts", {{"gold", gold.size()}}}});
    out << table_csv;
    return kExitOk;
}

int cmd_judge(const Settings& s, std::ostream& out, std::ostream&) {
    require_files(s, {"events", "corpus", "abbreviations", "ontology", "judge_fixtures"});
    const auto ontology = resolve_ontology(s);
    const auto params = resolve_params(s);
    const int parallelism = resolve_parallelism(s);
    const auto events = load_events(s.require_path("events", "--events"), ontology);
    const auto corpus = load_corpus(s);
    auto backend = make_backend(s, "judge_fixtures");
    const auto dir = prepare_out_dir(s);

    const auto outcomes = judge_events(corpus.records, events, *backend, params, parallelism);
    const auto summary = aggregate_outcomes(outcomes);
    text::write_file((fs::path(dir) / "judgements.jsonl").string(), judgements_to_jsonl(outcomes));
    text::write_file((fs::path(dir) / "judge_summary.json").string(), judge_summary_to_json(summary));
    write_manifest(dir, "judge", s,
                   {{"backend", backend->name()},
                    {"model", params.model},
                    {"counts", {{"judged", summary.n}, {"anomalous", summary.anomalous}}}});
    out << judge_summary_to_json(summary);
    return kExitOk;
}

int cmd_gen_corpus(const Settings& s, std::ostream& out, std::ostream&) {
    require_files(s, {"ontology"});
    const auto ontology = resolve_ontology(s);
    CorpusOptions options;
    const auto seed = s.integer_or("seed", 1);
    if (seed < 0) throw InputError("seed must be non-negative");
    options.seed = static_cast<std::uint64_t>(seed);
    options.n = s.integer_or("n", options.n);
    options.malformed = s.integer_or("malformed", 0);
    options.flaky = s.integer_or("flaky", 0);
    options.empty_problem_rows = s.integer_or("empty_rows", 0);
    const auto corpus = generate_corpus(options, ontology);

    const auto dir = prepare_out_dir(s);
    const fs::path d(dir);
    text::write_file((d / "corpus.csv").string(), corpus.to_csv());
    text::write_file((d / "gold.csv").string(), gold_to_csv(corpus.gold));
    text::write_file((d / "fixtures.json").string(), fixtures_to_json(corpus.fixtures));
    text::write_file((d / "judge_fixtures.json").string(), fixtures_to_json(corpus.judge_fixtures));

    json run_config;
    run_config["corpus"] = "corpus.csv";
    run_config["columns"] = {{"id", "ID"}, {"problem", "Problem"}, {"action", "Action Taken"}};
    run_config["gold"] = "gold.csv";
    run_config["backend"] = "scripted";
    run_config["fixtures"] = "fixtures.json";
    run_config["judge_fixtures"] = "judge_fixtures.json";
    run_config["parallelism"] = 4;
    run_config["content_retries"] = 2;
    run_config["out"] = "results";
    text::write_file((d / "run.json").string(), run_config.dump(2) + "\n");

    write_manifest(dir, "gen-corpus", s,
                   {{"prng", "splitmix64"},
                    {"counts",
                     {{"rows", corpus.rows.size()},
                      {"records", corpus.gold.size()},
                      {"malformed", corpus.malformed_ids.size()},
                      {"flaky", corpus.flaky_ids.size()}}}});
    out << "generated " << corpus.gold.size() << " records (" << corpus.rows.size() << " rows) -> " << dir << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"logsyn: structure maintenance logs with few-shot LLM prompting", "logsyn"};
    app.require_subcommand(1, 1);

    std::string config_path;
    json overrides = json::object();
    std::vector<std::string> extra_systems;

    const auto set_string = [&overrides](const std::string& key) {
        return [&overrides, key](const std::string& v) { overrides[key] = v; };
    };
    const auto set_int = [&overrides](const std::string& key) {
        return [&overrides, key](const std::int64_t& v) { overrides[key] = v; };
    };
    const auto set_double = [&overrides](const std::string& key) {
        return [&overrides, key](const double& v) { overrides[key] = v; };
    };
    const auto set_column = [&overrides](const std::string& key) {
        return [&overrides, key](const std::string& v) { overrides["columns"][key] = v; };
    };

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option_function<std::string>("--out", set_string("out"), "output directory");
        sub->add_option_function<std::string>("--ontology", set_string("ontology"), "ontology JSON file");
    };
    const auto add_corpus = [&](CLI::App* sub) {
        sub->add_option_function<std::string>("--input", set_string("corpus"), "corpus CSV");
        sub->add_option_function<std::string>("--id-column", set_column("id"), "id header or 'synthesize'");
        sub->add_option_function<std::string>("--problem-column", set_column("problem"), "problem header");
        sub->add_option_function<std::string>("--action-column", set_column("action"), "action header");
        sub->add_option_function<std::string>("--abbreviations", set_string("abbreviations"),
                                              "abbreviation dictionary JSON");
    };
    const auto add_backend = [&](CLI::App* sub) {
        sub->add_option_function<std::string>("--backend", set_string("backend"), "scripted | http");
        sub->add_option_function<std::string>("--model", set_string("model"), "model name");
        sub->add_option_function<double>("--temperature", set_double("temperature"), "sampling temperature");
        sub->add_option_function<std::int64_t>("--max-output-tokens", set_int("max_output_tokens"), "");
        sub->add_option_function<double>("--timeout-seconds", set_double("timeout_seconds"), "");
        sub->add_option_function<std::int64_t>("--transport-retries", set_int("transport_retries"), "");
        sub->add_option_function<std::int64_t>("--parallelism", set_int("parallelism"), "worker count");
    };

    auto* ingest = app.add_subcommand("ingest", "validate a corpus CSV and count accepted/rejected rows");
    add_common(ingest);
    add_corpus(ingest);

    auto* structure = app.add_subcommand("structure", "extract structured events from a corpus");
    add_common(structure);
    add_corpus(structure);
    add_backend(structure);
    structure->add_option_function<std::string>("--fixtures", set_string("fixtures"), "scripted fixtures JSON");
    structure->add_option_function<std::string>("--exemplars", set_string("exemplars"), "exemplar JSONL");
    structure->add_option_function<std::string>("--template", set_string("template"), "prompt template JSON");
    structure->add_option_function<std::string>("--prompt-variant", set_string("prompt_variant"),
                                                 "template variant id or file");
    structure->add_option_function<std::int64_t>("--shots", set_int("shots"), "exemplars to use (0 = zero-shot)");
    structure->add_option_function<std::int64_t>("--content-retries", set_int("content_retries"), "re-ask budget");
    structure->add_flag_callback("--strict-extra-fields", [&] { overrides["strict_extra_fields"] = true; },
                                 "reject unknown JSON keys");

    auto* report = app.add_subcommand("report", "category distribution, pathways and Sankey data");
    add_common(report);
    report->add_option_function<std::string>("--events", set_string("events"), "events JSONL");

    auto* evaluate = app.add_subcommand("evaluate", "compare systems against gold labels");
    add_common(evaluate);
    add_corpus(evaluate);
    evaluate->add_option_function<std::string>("--events", set_string("events"), "events JSONL");
    evaluate->add_option_function<std::string>("--name", set_string("system_name"), "name of the --events system");
    evaluate->add_option_function<std::string>("--gold", set_string("gold"), "gold labels CSV");
    evaluate->add_option_function<std::string>("--zero-shot", set_string("zero_shot_events"), "zero-shot events JSONL");
    evaluate->add_option("--system", extra_systems, "extra system as NAME=EVENTS_PATH");
    evaluate->add_option_function<std::string>("--baseline", set_string("baseline"), "rules");
    evaluate->add_option_function<std::string>("--gazetteer", set_string("gazetteer"), "gazetteer JSON");

    auto* judge = app.add_subcommand("judge", "LLM-as-a-judge Likert scoring of valid events");
    add_common(judge);
    add_corpus(judge);
    add_backend(judge);
    judge->add_option_function<std::string>("--events", set_string("events"), "events JSONL");
    judge->add_option_function<std::string>("--judge-fixtures", set_string("judge_fixtures"),
                                            "scripted judge fixtures JSON");

    auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic corpus, gold labels and fixtures");
    add_common(gen);
    gen->add_option_function<std::int64_t>("--seed", set_int("seed"), "PRNG seed");
    gen->add_option_function<std::int64_t>("--n", set_int("n"), "number of records");
    gen->add_option_function<std::int64_t>("--malformed", set_int("malformed"), "permanently malformed fixtures");
    gen->add_option_function<std::int64_t>("--flaky", set_int("flaky"), "fixtures answered [garbage, valid]");
    gen->add_option_function<std::int64_t>("--empty-rows", set_int("empty_rows"), "rows with empty problem text");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    try {
        Settings settings;
        if (!config_path.empty()) settings.load_config(config_path);
        for (auto& [k, v] : overrides.items()) {
            if (k == "columns" && settings.values.contains("columns") && settings.values["columns"].is_object()) {
                for (auto& [ck, cv] : v.items()) settings.values["columns"][ck] = cv;
            } else {
                settings.values[k] = v;
            }
        }

        if (ingest->parsed()) return cmd_ingest(settings, out, err);
        if (structure->parsed()) return cmd_structure(settings, out, err);
        if (report->parsed()) return cmd_report(settings, out, err);
        if (evaluate->parsed()) return cmd_evaluate(settings, extra_systems, out, err);
        if (judge->parsed()) return cmd_judge(settings, out, err);
        if (gen->parsed()) return cmd_gen_corpus(settings, out, err);
        err << app.help();
        return kExitUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const AuthError& e) {
        err << "auth error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const BackendError& e) {
        err << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace logsyn::cli
