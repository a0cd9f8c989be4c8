#include "logsyn/csv.hpp"
#include "logsyn/errors.hpp"

#include <gtest/gtest.h>

using namespace logsyn;

TEST(Csv, QuotedFieldsWithCommasQuotesAndNewlines) {
    const auto rows = csv::read("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x, y", "say \"hi\""}));
    EXPECT_EQ(rows[2].fields, (std::vector<std::string>{"multi\nline", "z"}));
    EXPECT_EQ(rows[2].line, 3u);
}

TEST(Csv, SkipsBomAndBlankLines) {
    const auto rows = csv::read("\xEF\xBB\xBFID,Problem\n\n1,x\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].fields[0], "ID");
}

TEST(Csv, TrailingEmptyField) {
    const auto rows = csv::read("a,b\n1,\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", ""}));
}

TEST(Csv, UnterminatedQuoteIsInputError) {
    EXPECT_THROW(csv::read("a\n\"open\n"), InputError);
}

TEST(Csv, FormatRoundTrips) {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
    const auto rows = csv::read(csv::format_row(fields));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].fields, fields);
}
