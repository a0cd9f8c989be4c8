#pragma once

#include "logsyn/domain.hpp"
#include "logsyn/ingestion.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

/// Line prefix that carries the record id inside every prompt. The scripted
/// backend keys its fixtures off this line.
inline constexpr std::string_view kRecordIdMarker = "Record ID: ";

/// The four schema keys, in emission order.
inline constexpr std::string_view kSchemaKeys[] = {
    "summary_problem", "summary_action", "failed_component", "category"};

struct Exemplar {
    std::string problem;
    std::string action;
    std::string summary_problem;
    std::string summary_action;
    std::string failed_component;
    std::string category;
};

/// Renders the exemplar's output object with keys in schema order, one key
/// per line, in the layout shown to the model.
std::string render_exemplar_output(const Exemplar& exemplar);

/// Throws InputError naming `index` when the exemplar has empty fields or a
/// category that is not an exact ontology label.
void validate_exemplar(const Exemplar& exemplar, const Ontology& ontology, std::size_t index);

/// JSONL, one {"problem", "action", "expected_output": {...}} per line. Extra
/// keys such as "source" are ignored. `expected_output` must hold exactly the
/// four schema keys.
std::vector<Exemplar> parse_exemplars_jsonl(std::string_view content);
std::vector<Exemplar> load_exemplars(const std::string& path);
std::string exemplars_to_jsonl(const std::vector<Exemplar>& exemplars);

/// The gasket exemplar from the source logs plus two constructed ones
/// (ignition and servicing).
const std::vector<Exemplar>& default_exemplars();

/// Placeholders: instructions take {categories}; exemplar blocks take
/// {index}, {problem}, {action}, {output}; target blocks take {record_id} and
/// {combined_text}. The builder appends the "Output:" cue after the target.
struct PromptTemplate {
    std::string variant_id;
    std::string instructions;
    std::string exemplar_block_format;
    std::string target_block_format;
};

/// Throws InputError when a required placeholder or the variant id is missing.
void validate_template(const PromptTemplate& tmpl);

PromptTemplate parse_template_json(std::string_view json_text);
PromptTemplate load_template(const std::string& path);
std::string template_to_json(const PromptTemplate& tmpl);

/// Built-in variants: "default" and "terse".
const PromptTemplate& default_template();
const std::vector<PromptTemplate>& builtin_templates();
const PromptTemplate* find_builtin_template(std::string_view variant_id);

/// Instructions (with every ontology label listed), then each exemplar, then
/// the target record, ending in "Output:". Zero exemplars gives the
/// zero-shot prompt.
std::string build_extraction_prompt(const CleanRecord& record, const std::vector<Exemplar>& exemplars,
                                    const PromptTemplate& tmpl, const Ontology& ontology);

/// Throws InputError for an anomalous event.
std::string build_judge_prompt(const CleanRecord& record, const StructuredEvent& event);

} // namespace logsyn
