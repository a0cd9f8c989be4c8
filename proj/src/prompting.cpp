#include "logsyn/prompting.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/text.hpp"

#include <nlohmann/json.hpp>

namespace logsyn {

using json = nlohmann::json;

namespace {

std::string json_quoted(std::string_view s) {
    return json(std::string(s)).dump();
}

std::string category_list(const Ontology& ontology) {
    std::string out;
    for (const auto& leaf : ontology.leaves()) {
        if (!out.empty()) out.push_back('\n');
        out += "- " + leaf.label;
    }
    return out;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw InputError(where + ": missing string field '" + key + "'");
    }
    return obj[key].get<std::string>();
}

} // namespace

std::string render_exemplar_output(const Exemplar& e) {
    return "{ \"summary_problem\": " + json_quoted(e.summary_problem) + ",\n" +
           "  \"summary_action\": " + json_quoted(e.summary_action) + ",\n" +
           "  \"failed_component\": " + json_quoted(e.failed_component) + ",\n" +
           "  \"category\": " + json_quoted(e.category) + " }";
}

void validate_exemplar(const Exemplar& e, const Ontology& ontology, std::size_t index) {
    const std::string where = "exemplar " + std::to_string(index);
    for (const auto* field : {&e.summary_problem, &e.summary_action, &e.failed_component, &e.category}) {
        if (text::trim(*field).empty()) throw InputError(where + ": empty output field");
    }
    if (text::trim(e.problem).empty()) throw InputError(where + ": empty problem text");
    if (!ontology.contains(e.category)) {
        throw InputError(where + ": category '" + e.category + "' is not an ontology label");
    }
}

std::vector<Exemplar> parse_exemplars_jsonl(std::string_view content) {
    std::vector<Exemplar> out;
    std::size_t line_no = 0;
    for (const auto& line : text::split(content, '\n')) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = "exemplar line " + std::to_string(line_no);
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& ex) {
            throw InputError(where + ": invalid JSON: " + ex.what());
        }
        if (!doc.is_object()) throw InputError(where + ": not a JSON object");
        Exemplar e;
        e.problem = require_string(doc, "problem", where);
        e.action = require_string(doc, "action", where);
        if (!doc.contains("expected_output") || !doc["expected_output"].is_object()) {
            throw InputError(where + ": 'expected_output' must be an object");
        }
        const auto& output = doc["expected_output"];
        if (output.size() != std::size(kSchemaKeys)) {
            throw InputError(where + ": 'expected_output' must have exactly the four schema keys");
        }
        e.summary_problem = require_string(output, "summary_problem", where);
        e.summary_action = require_string(output, "summary_action", where);
        e.failed_component = require_string(output, "failed_component", where);
        e.category = require_string(output, "category", where);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Exemplar> load_exemplars(const std::string& path) {
    return parse_exemplars_jsonl(text::read_file(path));
}

std::string exemplars_to_jsonl(const std::vector<Exemplar>& exemplars) {
    std::string out;
    for (const auto& e : exemplars) {
        nlohmann::ordered_json doc;
        doc["problem"] = e.problem;
        doc["action"] = e.action;
        doc["expected_output"] = {
            {"summary_problem", e.summary_problem},
            {"summary_action", e.summary_action},
            {"failed_component", e.failed_component},
            {"category", e.category},
        };
        out += doc.dump() + "\n";
    }
    return out;
}

const std::vector<Exemplar>& default_exemplars() {
    static const std::vector<Exemplar> exemplars = {
        {
            "#2 & 4 CYL ROCKER COVER GASKETS ARE LEAKING.",
            "REMOVED & REPLACED GASKETS.",
            "Rocker cover gasket leaks in cylinders 2 and 4 were reported.",
            "The leaking rocker cover gaskets were replaced on cylinders 2 and 4.",
            "Rocker Cover Gaskets (Cyl 2 & 4)",
            "Powerplant - Sealing & Gaskets",
        },
        {
            "ENGINE RAN ROUGH ON LEFT MAG DURING RUN-UP.",
            "FOUND #3 CYL LOWER SPARK PLUG FOULED. CLEANED & GAPPED PLUG, OPS CHECK GOOD.",
            "Rough running on the left magneto was observed during run-up.",
            "The fouled lower spark plug on cylinder 3 was cleaned and gapped.",
            "Lower Spark Plug (Cyl 3)",
            "Ignition System - Component Failure",
        },
        {
            "ENGINE DUE FOR WASH.",
            "WASHED ENGINE COMPARTMENT & REMOVED FOD FROM BAFFLES.",
            "The engine compartment was due for a wash.",
            "The engine compartment was washed and foreign object debris was removed.",
            "Engine Compartment",
            "Servicing - General Maintenance",
        },
    };
    return exemplars;
}

void validate_template(const PromptTemplate& t) {
    const auto need = [&](const std::string& field, std::string_view name, std::string_view placeholder) {
        if (field.find(placeholder) == std::string::npos) {
            throw InputError("template '" + t.variant_id + "': " + std::string(name) + " lacks " +
                             std::string(placeholder));
        }
    };
    if (text::trim(t.variant_id).empty()) throw InputError("template has an empty variant_id");
    need(t.instructions, "instructions", "{categories}");
    need(t.exemplar_block_format, "exemplar_block_format", "{output}");
    need(t.target_block_format, "target_block_format", "{combined_text}");
    need(t.target_block_format, "target_block_format", std::string(kRecordIdMarker) + "{record_id}");
}

PromptTemplate parse_template_json(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw InputError(std::string("template file is not valid JSON: ") + ex.what());
    }
    if (!doc.is_object()) throw InputError("template file must be a JSON object");
    PromptTemplate t;
    t.variant_id = require_string(doc, "variant_id", "template");
    t.instructions = require_string(doc, "instructions", "template");
    t.exemplar_block_format = require_string(doc, "exemplar_block_format", "template");
    t.target_block_format = require_string(doc, "target_block_format", "template");
    validate_template(t);
    return t;
}

PromptTemplate load_template(const std::string& path) {
    return parse_template_json(text::read_file(path));
}

std::string template_to_json(const PromptTemplate& t) {
    nlohmann::ordered_json doc;
    doc["variant_id"] = t.variant_id;
    doc["instructions"] = t.instructions;
    doc["exemplar_block_format"] = t.exemplar_block_format;
    doc["target_block_format"] = t.target_block_format;
    return doc.dump(2) + "\n";
}

const std::vector<PromptTemplate>& builtin_templates() {
    static const std::vector<PromptTemplate> templates = [] {
        std::vector<PromptTemplate> v;
        v.push_back({
            "default",
            "You structure aircraft maintenance log entries.\n"
            "Read the Problem and Action Taken text of a log entry and answer with a single JSON "
            "object that has exactly these keys:\n"
            "  \"summary_problem\": one sentence stating the reported problem,\n"
            "  \"summary_action\": one sentence stating the corrective action taken,\n"
            "  \"failed_component\": the specific component involved, with its location if given,\n"
            "  \"category\": exactly one label copied from the list below.\n"
            "Allowed categories:\n"
            "{categories}\n"
            "Answer with the JSON object only.",
            "Example {index}:\nProblem: {problem}\nAction Taken: {action}\nOutput:\n{output}",
            "Record ID: {record_id}\n{combined_text}",
        });
        v.push_back({
            "terse",
            "Convert the maintenance log entry to JSON with keys summary_problem, summary_action, "
            "failed_component, category.\n"
            "category must be one of:\n"
            "{categories}",
            "Problem: {problem}\nAction Taken: {action}\nOutput:\n{output}",
            "Record ID: {record_id}\n{combined_text}",
        });
        for (const auto& t : v) validate_template(t);
        return v;
    }();
    return templates;
}

const PromptTemplate& default_template() {
    return builtin_templates().front();
}

const PromptTemplate* find_builtin_template(std::string_view variant_id) {
    for (const auto& t : builtin_templates()) {
        if (t.variant_id == variant_id) return &t;
    }
    return nullptr;
}

std::string build_extraction_prompt(const CleanRecord& record, const std::vector<Exemplar>& exemplars,
                                    const PromptTemplate& tmpl, const Ontology& ontology) {
    std::string prompt = text::substitute(tmpl.instructions, {{"categories", category_list(ontology)}});
    for (std::size_t i = 0; i < exemplars.size(); ++i) {
        validate_exemplar(exemplars[i], ontology, i);
        prompt += "\n\n";
        prompt += text::substitute(tmpl.exemplar_block_format,
                                   {
                                       {"index", std::to_string(i + 1)},
                                       {"problem", clean_text(exemplars[i].problem)},
                                       {"action", clean_text(exemplars[i].action)},
                                       {"output", render_exemplar_output(exemplars[i])},
                                   });
    }
    prompt += "\n\n";
    prompt += text::substitute(tmpl.target_block_format, {
                                                             {"record_id", record.record.id},
                                                             {"combined_text", record.combined_text},
                                                         });
    prompt += "\nOutput:";
    return prompt;
}

std::string build_judge_prompt(const CleanRecord& record, const StructuredEvent& event) {
    if (!event.valid()) {
        throw InputError("cannot judge anomalous event '" + event.record_id + "'");
    }
    std::string p;
    p += "You review structured summaries of aircraft maintenance log entries.\n"
         "Compare the generated fields with the original log text and rate each criterion on "
         "an integer scale from 1 (poor) to 5 (excellent):\n"
         "  summary_accuracy: do the two summaries faithfully state the problem and the action?\n"
         "  component_accuracy: is the failed component correctly identified?\n"
         "  category_relevance: is the category appropriate for this event?\n"
         "Answer with only a JSON object of the form "
         "{\"summary_accuracy\": <1-5>, \"component_accuracy\": <1-5>, \"category_relevance\": <1-5>}.\n\n";
    p += std::string(kRecordIdMarker) + record.record.id + "\n";
    p += "Original Problem: " + clean_text(record.record.problem_text) + "\n";
    p += "Original Action Taken: " + clean_text(record.record.action_text) + "\n\n";
    p += "Generated fields:\n";
    p += "summary_problem: " + clean_text(event.summary_problem) + "\n";
    p += "summary_action: " + clean_text(event.summary_action) + "\n";
    p += "failed_component: " + clean_text(event.failed_component) + "\n";
    p += "category: " + clean_text(event.category) + "\n";
    p += "Output:";
    return p;
}

} // namespace logsyn
