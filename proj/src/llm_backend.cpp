#include "logsyn/llm_backend.hpp"

#include "logsyn/errors.hpp"
#include "logsyn/prompting.hpp"
#include "logsyn/text.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <thread>

namespace logsyn {

void CompletionParams::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw InputError("temperature must be within [0, 2], got " + std::to_string(temperature));
    }
    if (max_output_tokens <= 0) throw InputError("max_output_tokens must be positive");
    if (timeout.count() <= 0) throw InputError("timeout must be positive");
    if (model.empty()) throw InputError("model name is empty");
}

std::chrono::milliseconds RetryPolicy::delay_for(int retry_index) const {
    const double scaled =
        static_cast<double>(initial_delay.count()) * std::pow(multiplier, std::max(0, retry_index));
    const double capped = std::min(scaled, static_cast<double>(max_delay.count()));
    return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

void RetryPolicy::wait(int retry_index) const {
    const auto d = delay_for(retry_index);
    if (sleep) {
        sleep(d);
    } else {
        std::this_thread::sleep_for(d);
    }
}

std::string record_id_from_prompt(std::string_view prompt) {
    std::string found;
    std::size_t start = 0;
    while (start <= prompt.size()) {
        auto end = prompt.find('\n', start);
        if (end == std::string_view::npos) end = prompt.size();
        const auto line = prompt.substr(start, end - start);
        if (line.substr(0, kRecordIdMarker.size()) == kRecordIdMarker) {
            found = text::trim(line.substr(kRecordIdMarker.size()));
        }
        start = end + 1;
    }
    return found;
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::vector<std::string>> fixtures)
    : ScriptedBackend(std::move(fixtures), Options{}) {}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::vector<std::string>> fixtures,
                                 Options options)
    : fixtures_(std::move(fixtures)), options_(std::move(options)) {
    if (fixtures_.empty()) throw InputError("scripted backend needs at least one fixture");
    for (const auto& [key, seq] : fixtures_) {
        if (seq.empty()) throw InputError("fixture '" + key + "' has an empty response sequence");
    }
    if (!options_.key_fn) options_.key_fn = record_id_from_prompt;
}

BackendResult ScriptedBackend::complete(std::string_view prompt, const CompletionParams&) {
    const auto t0 = std::chrono::steady_clock::now();
    if (prompt.empty()) throw BackendError("empty prompt");
    const std::string key = options_.key_fn(prompt);

    BackendResult result;
    const auto it = fixtures_.find(key);
    if (it == fixtures_.end()) {
        if (options_.strict) throw BackendError("scripted backend: no fixture for key '" + key + "'");
        result.text = options_.fallback_response;
    } else {
        std::size_t k;
        {
            std::lock_guard lock(mutex_);
            k = calls_[key]++;
        }
        const auto& seq = it->second;
        result.text = seq[std::min(k, seq.size() - 1)];
    }
    if (result.text.empty()) result.attempt_errors.push_back("empty completion");
    result.latency = std::chrono::steady_clock::now() - t0;
    return result;
}

std::size_t ScriptedBackend::calls_for(const std::string& key) const {
    std::lock_guard lock(mutex_);
    const auto it = calls_.find(key);
    return it == calls_.end() ? 0 : it->second;
}

std::map<std::string, std::vector<std::string>> parse_fixtures_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("fixture file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("fixture file must be a JSON object");
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [key, value] : doc.items()) {
        if (value.is_string()) {
            out[key] = {value.get<std::string>()};
        } else if (value.is_array() && !value.empty() &&
                   std::all_of(value.begin(), value.end(), [](const auto& v) { return v.is_string(); })) {
            out[key] = value.get<std::vector<std::string>>();
        } else {
            throw InputError("fixture '" + key + "' must be a string or non-empty array of strings");
        }
    }
    return out;
}

std::map<std::string, std::vector<std::string>> load_fixtures(const std::string& path) {
    return parse_fixtures_json(text::read_file(path));
}

std::string fixtures_to_json(const std::map<std::string, std::vector<std::string>>& fixtures) {
    std::vector<std::string> keys;
    for (const auto& kv : fixtures) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return text::id_less(a, b); });
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& k : keys) {
        const auto& seq = fixtures.at(k);
        doc[k] = seq.size() == 1 ? nlohmann::ordered_json(seq.front()) : nlohmann::ordered_json(seq);
    }
    return doc.dump(2) + "\n";
}

} // namespace logsyn
