#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace logsyn {

struct CompletionParams {
    std::string model = "gpt-4";
    double temperature = 0.1;
    int max_output_tokens = 512;
    std::chrono::milliseconds timeout{60'000};

    /// Throws InputError when temperature is outside [0, 2] or limits are
    /// non-positive.
    void validate() const;
};

struct BackendResult {
    std::string text;
    std::chrono::nanoseconds latency{0};
    std::vector<std::string> attempt_errors;
};

/// A completion endpoint. Implementations must tolerate concurrent
/// complete() calls.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    /// Returns the model text, or throws BackendError once transport retries
    /// are spent and AuthError on 401/403. Content problems are never errors
    /// here.
    virtual BackendResult complete(std::string_view prompt, const CompletionParams& params) = 0;

    virtual std::string name() const = 0;
};

/// Exponential backoff for transport failures (network errors, HTTP 429 and
/// 5xx). Delay k is min(initial * multiplier^k, max), so delays never shrink.
struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_delay{500};
    double multiplier = 2.0;
    std::chrono::milliseconds max_delay{8'000};
    std::function<void(std::chrono::milliseconds)> sleep;

    std::chrono::milliseconds delay_for(int retry_index) const;
    void wait(int retry_index) const;
};

/// Extracts the value of the last "Record ID: " line in a prompt, or "".
std::string record_id_from_prompt(std::string_view prompt);

/// Fixture key (normally a record id) to response sequence.
using FixtureMap = std::map<std::string, std::vector<std::string>>;

/// Deterministic fixture-driven backend. Each key maps to a response
/// sequence: the k-th call for a key returns the k-th entry, and the last
/// entry repeats once the sequence is used up.
class ScriptedBackend : public CompletionBackend {
public:
    using KeyFn = std::function<std::string(std::string_view prompt)>;

    struct Options {
        bool strict = true;           // unknown key -> BackendError
        std::string fallback_response; // used when !strict
        KeyFn key_fn = record_id_from_prompt;
    };

    explicit ScriptedBackend(std::map<std::string, std::vector<std::string>> fixtures);
    ScriptedBackend(std::map<std::string, std::vector<std::string>> fixtures, Options options);

    BackendResult complete(std::string_view prompt, const CompletionParams& params) override;
    std::string name() const override { return "scripted"; }

    std::size_t calls_for(const std::string& key) const;

private:
    std::map<std::string, std::vector<std::string>> fixtures_;
    Options options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::size_t> calls_;
};

/// Fixture file: JSON object mapping key -> string or array of strings.
std::map<std::string, std::vector<std::string>> parse_fixtures_json(std::string_view json_text);
std::map<std::string, std::vector<std::string>> load_fixtures(const std::string& path);
std::string fixtures_to_json(const std::map<std::string, std::vector<std::string>>& fixtures);

struct HttpBackendConfig {
    /// Endpoint root such as "https://api.openai.com/v1"; "/chat/completions"
    /// is appended.
    std::string api_base = "https://api.openai.com/v1";
    std::string api_key;
    RetryPolicy retry;

    /// Reads LOGSYN_API_BASE and LOGSYN_API_KEY when set.
    static HttpBackendConfig from_environment();
};

/// Chat-completions style client: one user message carrying the whole prompt.
class HttpBackend : public CompletionBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    BackendResult complete(std::string_view prompt, const CompletionParams& params) override;
    std::string name() const override { return "http"; }

private:
    HttpBackendConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

} // namespace logsyn
