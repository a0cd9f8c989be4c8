#include "logsyn/errors.hpp"
#include "logsyn/llm_backend.hpp"

#include <atomic>
#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <thread>

using namespace logsyn;

namespace {

// Local chat-completions stand-in whose status sequence is scripted per test.
class FakeServer {
public:
    explicit FakeServer(std::vector<int> statuses) : statuses_(std::move(statuses)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            const auto n = hits_++;
            last_auth_ = req.get_header_value("Authorization");
            last_body_ = req.body;
            const int status = statuses_[std::min<std::size_t>(n, statuses_.size() - 1)];
            res.status = status;
            if (status == 200) {
                res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"{\"ok\":true}"}}]})",
                                "application/json");
            } else {
                res.set_content("{}", "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int hits() const { return hits_; }
    std::string last_auth_;
    std::string last_body_;

private:
    httplib::Server server_;
    std::vector<int> statuses_;
    std::atomic<int> hits_{0};
    int port_ = 0;
    std::thread thread_;
};

HttpBackendConfig config_for(const FakeServer& server, std::vector<std::chrono::milliseconds>* sleeps) {
    HttpBackendConfig c;
    c.api_base = server.base();
    c.api_key = "test-key";
    c.retry.sleep = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); };
    return c;
}

} // namespace

TEST(HttpBackend, RetriesServerErrorsThenSucceeds) {
    FakeServer server({500, 500, 200});
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackend backend(config_for(server, &sleeps));
    const auto r = backend.complete("Record ID: 1\nOutput:", CompletionParams{});
    EXPECT_EQ(r.text, "{\"ok\":true}");
    EXPECT_EQ(r.attempt_errors.size(), 2u);
    EXPECT_EQ(server.hits(), 3);
    ASSERT_EQ(sleeps.size(), 2u);
    EXPECT_LE(sleeps[0], sleeps[1]);
    EXPECT_EQ(server.last_auth_, "Bearer test-key");
    const auto body = nlohmann::json::parse(server.last_body_);
    EXPECT_EQ(body["model"], "gpt-4");
    EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.1);
    EXPECT_EQ(body["messages"][0]["content"], "Record ID: 1\nOutput:");
}

TEST(HttpBackend, UnauthorizedIsImmediateAuthError) {
    FakeServer server({401});
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackend backend(config_for(server, &sleeps));
    EXPECT_THROW(backend.complete("p", CompletionParams{}), AuthError);
    EXPECT_EQ(server.hits(), 1);
    EXPECT_TRUE(sleeps.empty());
}

TEST(HttpBackend, RetryBudgetIsBounded) {
    FakeServer server({503});
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackend backend(config_for(server, &sleeps));
    EXPECT_THROW(backend.complete("p", CompletionParams{}), BackendError);
    EXPECT_EQ(server.hits(), 4);  // one call plus three retries
    ASSERT_EQ(sleeps.size(), 3u);
    for (std::size_t i = 1; i < sleeps.size(); ++i) EXPECT_LE(sleeps[i - 1], sleeps[i]);
}

TEST(HttpBackend, ClientErrorIsNotRetried) {
    FakeServer server({400, 200});
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackend backend(config_for(server, &sleeps));
    EXPECT_THROW(backend.complete("p", CompletionParams{}), BackendError);
    EXPECT_EQ(server.hits(), 1);
}

TEST(HttpBackend, UnreachableHostExhaustsRetries) {
    std::vector<std::chrono::milliseconds> sleeps;
    HttpBackendConfig c;
    c.api_base = "http://127.0.0.1:1/v1";
    c.retry.max_retries = 1;
    c.retry.sleep = [&sleeps](std::chrono::milliseconds d) { sleeps.push_back(d); };
    HttpBackend backend(c);
    CompletionParams params;
    params.timeout = std::chrono::milliseconds(500);
    EXPECT_THROW(backend.complete("p", params), BackendError);
    EXPECT_EQ(sleeps.size(), 1u);
}

TEST(HttpBackend, RejectsBadBaseUrl) {
    HttpBackendConfig c;
    c.api_base = "ftp://example";
    EXPECT_THROW(HttpBackend{c}, InputError);
}
