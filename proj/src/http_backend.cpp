#include "logsyn/errors.hpp"
#include "logsyn/llm_backend.hpp"

#include <cstdlib>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <regex>

namespace logsyn {

HttpBackendConfig HttpBackendConfig::from_environment() {
    HttpBackendConfig config;
    if (const char* base = std::getenv("LOGSYN_API_BASE"); base && *base) config.api_base = base;
    if (const char* key = std::getenv("LOGSYN_API_KEY"); key && *key) config.api_key = key;
    return config;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(config_.api_base, m, url_re)) {
        throw InputError("invalid API base URL: '" + config_.api_base + "'");
    }
    scheme_host_port_ = m[1].str();
    std::string prefix = m[2].matched ? m[2].str() : "";
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_ = prefix + "/chat/completions";
    if (config_.retry.max_retries < 0) throw InputError("transport_retries must be >= 0");
}

BackendResult HttpBackend::complete(std::string_view prompt, const CompletionParams& params) {
    if (prompt.empty()) throw BackendError("empty prompt");
    params.validate();

    nlohmann::json body = {
        {"model", params.model},
        {"temperature", params.temperature},
        {"max_tokens", params.max_output_tokens},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
    };
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(params.timeout);
    const auto timeout_us =
        std::chrono::duration_cast<std::chrono::microseconds>(params.timeout - timeout_s);

    BackendResult result;
    const auto t0 = std::chrono::steady_clock::now();
    for (int attempt = 0;; ++attempt) {
        httplib::Client client(scheme_host_port_);
        client.set_connection_timeout(timeout_s.count(), timeout_us.count());
        client.set_read_timeout(timeout_s.count(), timeout_us.count());
        client.set_write_timeout(timeout_s.count(), timeout_us.count());

        std::string error;
        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            error = "transport: " + httplib::to_string(res.error());
        } else if (res->status == 401 || res->status == 403) {
            throw AuthError("completion endpoint rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
        } else if (res->status == 429) {
            error = "HTTP 429 rate limited";
        } else if (res->status >= 500) {
            error = "HTTP " + std::to_string(res->status);
        } else if (res->status != 200) {
            throw BackendError("completion endpoint returned HTTP " + std::to_string(res->status) +
                               ": " + res->body.substr(0, 200));
        } else {
            try {
                const auto doc = nlohmann::json::parse(res->body);
                const auto& content = doc.at("choices").at(0).at("message").at("content");
                result.text = content.is_string() ? content.get<std::string>() : std::string();
                if (result.text.empty()) result.attempt_errors.push_back("empty completion");
                result.latency = std::chrono::steady_clock::now() - t0;
                return result;
            } catch (const nlohmann::json::exception& e) {
                error = std::string("unparseable response envelope: ") + e.what();
            }
        }

        result.attempt_errors.push_back(error);
        if (attempt >= config_.retry.max_retries) {
            std::string msg = "completion failed after " + std::to_string(attempt + 1) + " attempts:";
            for (const auto& e : result.attempt_errors) msg += " [" + e + "]";
            throw BackendError(msg);
        }
        config_.retry.wait(attempt);
    }
}

} // namespace logsyn
