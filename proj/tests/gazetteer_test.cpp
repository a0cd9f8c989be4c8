#include "logsyn/errors.hpp"
#include "logsyn/gazetteer.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace logsyn;
using logsyn::testkit::make_record;

TEST(RuleBasedClassify, Examples) {
    const auto& g = default_gazetteer();
    EXPECT_EQ(rule_based_classify(make_record("1", "rocker cover gasket is leaking", ""), g),
              "Powerplant - Sealing & Gaskets");
    EXPECT_EQ(rule_based_classify(make_record("2", "fouled spark plug", ""), g), "Ignition System - Component Failure");
    EXPECT_EQ(rule_based_classify(make_record("3", "runs funny sometimes", ""), g), "Performance - Operational Issue");
}

TEST(RuleBasedClassify, EveryExamplePhraseHitsItsLeaf) {
    const auto& g = default_gazetteer();
    const std::vector<std::pair<std::string, std::string>> phrases{
        {"Low compression", "Powerplant - Mechanical"},
        {"Piston/ring failure", "Powerplant - Mechanical"},
        {"Sticking valves", "Powerplant - Mechanical"},
        {"Leaking rocker cover gasket", "Powerplant - Sealing & Gaskets"},
        {"Intake manifold leak", "Powerplant - Sealing & Gaskets"},
        {"Oil seal failure", "Powerplant - Sealing & Gaskets"},
        {"Cracked engine baffle", "Powerplant - Structural Components"},
        {"Worn engine mount", "Powerplant - Structural Components"},
        {"Broken bracket", "Powerplant - Structural Components"},
        {"Loose rocker cover screws", "Powerplant - Fasteners & Hardware"},
        {"Broken hose clamp", "Powerplant - Fasteners & Hardware"},
        {"Sheared rivets", "Powerplant - Fasteners & Hardware"},
        {"Fouled spark plug", "Ignition System - Component Failure"},
        {"Magneto failure", "Ignition System - Component Failure"},
        {"Faulty ignition lead", "Ignition System - Component Failure"},
        {"Fuel servo malfunction", "Fuel System - Delivery & Control"},
        {"Clogged injector nozzle", "Fuel System - Delivery & Control"},
        {"Incorrect idle mixture", "Fuel System - Delivery & Control"},
        {"Rough running engine", "Performance - Operational Issue"},
        {"Power loss", "Performance - Operational Issue"},
        {"Hard start", "Performance - Operational Issue"},
        {"Vibration", "Performance - Operational Issue"},
        {"FOD removal", "Servicing - General Maintenance"},
        {"Engine wash", "Servicing - General Maintenance"},
        {"Scheduled compression check", "Servicing - General Maintenance"},
    };
    for (const auto& [phrase, label] : phrases) {
        EXPECT_EQ(g.classify(phrase), label) << phrase;
    }
}

TEST(RuleBasedClassify, SampleLogRows) {
    const auto& g = default_gazetteer();
    EXPECT_EQ(rule_based_classify(make_record("1", "Had engine choke & briefly lose power on departure.",
                                              "Performed engine run-up, found cyl 2 lower plug fouled."),
                                  g),
              "Ignition System - Component Failure");
    EXPECT_EQ(rule_based_classify(make_record("2", "#4 rocker cover is leaking.",
                                              "Removed & replaced #4 rocker cover gasket."),
                                  g),
              "Powerplant - Sealing & Gaskets");
    // Printed with the first row's problem text; the action alone decides.
    EXPECT_EQ(rule_based_classify(make_record("3", "Had engine choke & briefly lose power on departure.",
                                              "Stop drilled crack."),
                                  g),
              "Powerplant - Structural Components");
}

TEST(Gazetteer, FirstRuleWins) {
    const auto& o = default_ontology();
    const Gazetteer g({{{"leak"}, "Powerplant - Sealing & Gaskets"}, {{"leak", "crack"}, "Powerplant - Structural Components"}},
                      std::string(kGazetteerFallback), o);
    EXPECT_EQ(g.classify("crack and leak"), "Powerplant - Sealing & Gaskets");
    EXPECT_EQ(g.classify("crack"), "Powerplant - Structural Components");
    EXPECT_EQ(g.classify("nothing"), kGazetteerFallback);
}

TEST(Gazetteer, Validation) {
    const auto& o = default_ontology();
    EXPECT_THROW(Gazetteer({{{}, "Powerplant - Mechanical"}}, std::string(kGazetteerFallback), o), InputError);
    EXPECT_THROW(Gazetteer({{{"x"}, "Avionics - Radios"}}, std::string(kGazetteerFallback), o), InputError);
    EXPECT_THROW(Gazetteer({{{"x"}, "Powerplant - Mechanical"}}, "Nope - Nope", o), InputError);
}

TEST(Gazetteer, JsonRoundTrip) {
    const auto& g = default_gazetteer();
    const auto back = parse_gazetteer_json(gazetteer_to_json(g), default_ontology());
    ASSERT_EQ(back.rules().size(), g.rules().size());
    for (std::size_t i = 0; i < g.rules().size(); ++i) {
        EXPECT_EQ(back.rules()[i].label, g.rules()[i].label);
        EXPECT_EQ(back.rules()[i].keywords, g.rules()[i].keywords);
    }
    EXPECT_THROW(parse_gazetteer_json(R"({"rules": 3})", default_ontology()), InputError);
}

TEST(RuleBasedEvents, ValidAndComplete) {
    const std::vector<CleanRecord> records{make_record("1", "oil seal failure", "REPLACED SEAL."),
                                           make_record("2", "runs funny", "")};
    const auto events = rule_based_events(records, default_gazetteer());
    ASSERT_EQ(events.size(), 2u);
    for (const auto& e : events) {
        EXPECT_TRUE(e.valid());
        EXPECT_NO_THROW(check_event_invariants(e, default_ontology()));
    }
    EXPECT_EQ(events[0].action_category, ActionCategory::ComponentReplacement);
    EXPECT_EQ(events[1].category, "Performance - Operational Issue");
}
