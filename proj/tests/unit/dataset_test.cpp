#include <gtest/gtest.h>

#include <filesystem>

#include "ctxattn/dataset.hpp"
#include "ctxattn/errors.hpp"

namespace ctxattn::io {
namespace {

TEST(Csv, QuotedFieldsAndEscapes) {
    const auto rows = parse_csv("a,b\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",z\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x, y", "say \"hi\""}));
    EXPECT_EQ(rows[2].fields[0], "multi\nline");
    EXPECT_EQ(rows[2].line, 3u);
}

TEST(Csv, MalformedRowReportsLine) {
    try {
        parse_csv("text,label\nok,a\n\"open,b\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_csv("text,label\nok,a\nbad\"quote,b\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Dataset, ParsesAndSortsLabels) {
    const auto d = parse_dataset("\xEF\xBB\xBFtext,label\n\"I hate, you\",sexism\nnice,none\nok,none\n");
    ASSERT_EQ(d.examples.size(), 3u);
    EXPECT_EQ(d.examples[0].text, "I hate, you");
    EXPECT_EQ(d.label_names, (std::vector<std::string>{"none", "sexism"}));
    EXPECT_EQ(d.class_counts, (std::vector<std::size_t>{2, 1}));
    EXPECT_FALSE(d.known_corpus.has_value());
    EXPECT_EQ(histogram_text(d), "  none: 2\n  sexism: 1\n  total: 3\n");
}

TEST(Dataset, Rejections) {
    EXPECT_THROW(parse_dataset(""), FormatError);
    EXPECT_THROW(parse_dataset("text,label\n"), FormatError);
    EXPECT_THROW(parse_dataset("body,label\nx,y\n"), FormatError);
    try {
        parse_dataset("text,label\na,b\nc,d,e\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_dataset("text,label\na,\n"), FormatError);
}

TEST(Dataset, RecognizesReferenceClassCounts) {
    std::string csv = "text,label\n";
    for (int i = 0; i < 1924; ++i) csv += "t,racism\n";
    for (int i = 0; i < 3058; ++i) csv += "t,sexism\n";
    for (int i = 0; i < 10862; ++i) csv += "t,none\n";
    const auto d = parse_dataset(csv);
    EXPECT_EQ(d.examples.size(), 15844u);
    ASSERT_TRUE(d.known_corpus.has_value());
    EXPECT_TRUE(match_known_corpus({19326, 1498, 4288}).has_value());
    EXPECT_TRUE(match_known_corpus({15127, 5235}).has_value());
    EXPECT_FALSE(match_known_corpus({15127, 5234}).has_value());
}

TEST(Dataset, FileRoundTripAndMissingFile) {
    const auto path = std::filesystem::temp_directory_path() / "ctxattn_dataset_test.csv";
    write_file_atomic(path, "text,label\nhello,x\n");
    EXPECT_EQ(load_dataset(path).examples.size(), 1u);
    std::filesystem::remove(path);
    EXPECT_THROW(load_dataset(path), IoError);
}

}  // namespace
}  // namespace ctxattn::io
