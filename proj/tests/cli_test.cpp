#include "logsyn/cli.hpp"
#include "logsyn/corpus.hpp"
#include "logsyn/csv.hpp"
#include "logsyn/extraction.hpp"
#include "logsyn/text.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <thread>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace logsyn;
using logsyn::testkit::TempDir;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "logsyn");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
        gen_ = dir_.file("gen");
        const auto r = run({"gen-corpus", "--seed", "1", "--n", "10", "--out", gen_});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    std::string p(const std::string& rel) const { return gen_ + "/" + rel; }

    TempDir dir_;
    std::string gen_;
};

} // namespace

TEST_F(CliTest, StructureWritesEventsAndManifest) {
    const auto out = dir_.file("run");
    const auto r = run({"structure", "--config", p("run.json"), "--backend", "scripted", "--fixtures",
                        p("fixtures.json"), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto events = text::read_file(out + "/events.jsonl");
    EXPECT_EQ(count_lines(events), 10u);
    const auto manifest = nlohmann::json::parse(text::read_file(out + "/manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "structure");
    EXPECT_EQ(manifest["template_variant"], "default");
    EXPECT_EQ(manifest["model"], "gpt-4");
    EXPECT_EQ(manifest["shots"], 3);
    EXPECT_EQ(manifest["exemplar_file_hash"].get<std::string>().size(), 64u);
    EXPECT_EQ(manifest["counts"]["valid"], 10);
    EXPECT_EQ(manifest["timestamp"], "2023-11-14T22:13:20Z");

    // Rerun is byte-identical.
    const auto again = run({"structure", "--config", p("run.json"), "--out", out});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(text::read_file(out + "/events.jsonl"), events);
}

TEST_F(CliTest, ReportCountsSumToValidLines) {
    const auto events = dir_.file("run");
    ASSERT_EQ(run({"structure", "--config", p("run.json"), "--out", events}).code, 0);
    const auto report = dir_.file("report");
    const auto r = run({"report", "--events", events + "/events.jsonl", "--out", report});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto dist = nlohmann::json::parse(text::read_file(report + "/distribution.json"));
    std::int64_t sum = 0;
    for (const auto& [k, v] : dist["counts"].items()) sum += v.get<std::int64_t>();
    std::int64_t valid = 0;
    for (const auto& e : parse_events_jsonl(text::read_file(events + "/events.jsonl"), default_ontology())) {
        valid += e.valid() ? 1 : 0;
    }
    EXPECT_EQ(sum, valid);
    for (auto f : {"distribution.csv", "sankey.json", "pathways.csv", "manifest.json"}) {
        EXPECT_TRUE(std::filesystem::exists(report + "/" + f)) << f;
    }
}

TEST_F(CliTest, EvaluateWithRuleBaseline) {
    const auto events = dir_.file("run");
    ASSERT_EQ(run({"structure", "--config", p("run.json"), "--out", events}).code, 0);
    const auto zero = dir_.file("zero");
    ASSERT_EQ(run({"structure", "--config", p("run.json"), "--shots", "0", "--out", zero}).code, 0);
    const auto eval = dir_.file("eval");
    const auto r = run({"evaluate", "--config", p("run.json"), "--events", events + "/events.jsonl", "--zero-shot",
                        zero + "/events.jsonl", "--gold", p("gold.csv"), "--baseline", "rules", "--out", eval});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv::read(text::read_file(eval + "/comparison.csv"));
    ASSERT_GE(rows.front().fields.size(), 3u);
    EXPECT_EQ(rows.front().fields, (std::vector<std::string>{"Metric", "few-shot", "zero-shot", "rule-based"}));
    EXPECT_TRUE(std::filesystem::exists(eval + "/comparison.json"));
}

TEST_F(CliTest, JudgeWritesSummary) {
    const auto events = dir_.file("run");
    ASSERT_EQ(run({"structure", "--config", p("run.json"), "--out", events}).code, 0);
    const auto out = dir_.file("judge");
    const auto r = run({"judge", "--config", p("run.json"), "--events", events + "/events.jsonl", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = nlohmann::json::parse(text::read_file(out + "/judge_summary.json"));
    EXPECT_EQ(summary["n"], 10);
    EXPECT_EQ(count_lines(text::read_file(out + "/judgements.jsonl")), 10u);
}

TEST_F(CliTest, IngestPrintsCounts) {
    const auto r = run({"ingest", "--input", p("corpus.csv"), "--id-column", "ID", "--out", dir_.file("ing")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("accepted 10"), std::string::npos);
    EXPECT_NE(r.out.find("rejected 0"), std::string::npos);
}

TEST_F(CliTest, PromptVariantAndShotBounds) {
    const auto out = dir_.file("terse");
    auto r = run({"structure", "--config", p("run.json"), "--prompt-variant", "terse", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(text::read_file(out + "/manifest.json"))["template_variant"], "terse");
    r = run({"structure", "--config", p("run.json"), "--shots", "4", "--out", out});
    EXPECT_EQ(r.code, 2);
    r = run({"structure", "--config", p("run.json"), "--prompt-variant", "nope", "--out", out});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, InputFilesAreNotModified) {
    const auto before = text::read_file(p("corpus.csv")) + text::read_file(p("fixtures.json"));
    ASSERT_EQ(run({"structure", "--config", p("run.json"), "--out", dir_.file("r")}).code, 0);
    EXPECT_EQ(text::read_file(p("corpus.csv")) + text::read_file(p("fixtures.json")), before);
}

TEST(CliExitCodes, UsageAndInputErrors) {
    auto r = run({"bogus"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"structure", "--no-such-flag"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);

    TempDir dir;
    r = run({"structure", "--config", dir.file("missing.json")});
    EXPECT_EQ(r.code, 2);
    r = run({"report", "--events", dir.file("missing.jsonl"), "--out", dir.file("o")});
    EXPECT_EQ(r.code, 2);
    text::write_file(dir.file("bad.json"), "{ nope");
    EXPECT_EQ(run({"structure", "--config", dir.file("bad.json")}).code, 2);
    EXPECT_EQ(run({"gen-corpus", "--n", "0", "--out", dir.file("g")}).code, 2);
}

TEST(CliExitCodes, BackendFailuresAndAuth) {
    TempDir dir;
    ::setenv("SOURCE_DATE_EPOCH", "0", 1);
    ASSERT_EQ(run({"gen-corpus", "--n", "3", "--out", dir.file("g")}).code, 0);
    // A fixtures file keyed to other ids makes the strict scripted backend fail every call.
    text::write_file(dir.file("fx.json"), R"({"999": "x"})");
    const auto r = run({"structure", "--config", dir.file("g/run.json"), "--fixtures", dir.file("fx.json"), "--out",
                        dir.file("o")});
    // Per-record backend failures are anomalies, not a failed run.
    EXPECT_EQ(r.code, 0) << r.err;

    ::setenv("LOGSYN_API_BASE", "http://127.0.0.1:1/v1", 1);
    const auto http = run({"structure", "--config", dir.file("g/run.json"), "--backend", "http", "--transport-retries",
                           "0", "--timeout-seconds", "0.5", "--out", dir.file("h")});
    ::unsetenv("LOGSYN_API_BASE");
    EXPECT_EQ(http.code, 0) << http.err;
    const auto events = parse_events_jsonl(text::read_file(dir.file("h/events.jsonl")), default_ontology());
    for (const auto& e : events) EXPECT_EQ(e.anomaly_reason, AnomalyReason::BackendError);

    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    ::setenv("LOGSYN_API_BASE", ("http://127.0.0.1:" + std::to_string(port) + "/v1").c_str(), 1);
    const auto denied = run({"structure", "--config", dir.file("g/run.json"), "--backend", "http", "--parallelism",
                             "1", "--out", dir.file("a")});
    ::unsetenv("LOGSYN_API_BASE");
    server.stop();
    t.join();
    EXPECT_EQ(denied.code, 3);
    EXPECT_NE(denied.err.find("auth"), std::string::npos);
}
