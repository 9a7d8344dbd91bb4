#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "vinsta/llm/json_extract.hpp"

namespace vinsta::llm {
namespace {

TEST(Pythonish, Rewrites) {
  EXPECT_EQ(pythonish_to_json("{'a': True, 'b': None, 'c': [1, 2,], }"),
            R"({"a": true, "b": null, "c": [1, 2]})");
  EXPECT_EQ(pythonish_to_json(R"({'q': "say \"hi\"", 'r': 'it\'s "x"'})"),
            R"({"q": "say \"hi\"", "r": "it's \"x\""})");
  // Identifiers containing True are left alone.
  EXPECT_EQ(pythonish_to_json("{'TrueValue': 1}"), R"({"TrueValue": 1})");
}

TEST(Extract, DocumentedExamples) {
  EXPECT_EQ(extract_int_field("Sure. {'answerability': 3}", "answerability", 1, 3), 3);
  EXPECT_EQ(extract_option_field("I pick {\"best_answer\": \"c\"}", "best_answer"), std::optional<std::size_t>(2));
  EXPECT_EQ(extract_int_field("{'confidence': 7}", "confidence", 1, 3), std::nullopt);
  EXPECT_EQ(extract_json_field("no json here", "x"), std::nullopt);
}

TEST(Extract, LastObjectWithTheKeyWins) {
  EXPECT_EQ(extract_int_field("{'a': 1} {'a': 2} {'b': 3}", "a", 1, 3), 2);
}

TEST(Extract, NeverThrowsOnJunk) {
  const std::string junk[] = {"{", "}", "{'", "{\"a\":", "{{{{{{", std::string(1000, '{'), "'a': ", "\\"};
  for (const auto& s : junk) {
    EXPECT_NO_THROW(extract_json_field(s, "a"));
    EXPECT_NO_THROW(extract_int_field(s, "a", 1, 3));
    EXPECT_NO_THROW(extract_option_field(s, "a"));
  }
}

TEST(Extract, Corpus) {
  std::ifstream in(testing::data_dir() / "parse_corpus.jsonl");
  ASSERT_TRUE(in);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const auto row = nlohmann::json::parse(line);
    const std::string completion = row["completion"];
    const std::string key = row["key"];
    const std::string kind = row["kind"];
    const auto& expected = row["expected"];
    SCOPED_TRACE(completion);
    if (kind == "int") {
      const auto got = extract_int_field(completion, key, row["lo"], row["hi"]);
      if (expected.is_null()) {
        EXPECT_EQ(got, std::nullopt);
      } else {
        EXPECT_EQ(got, expected.get<int>());
      }
    } else if (kind == "option") {
      const auto got = extract_option_field(completion, key);
      if (expected.is_null()) {
        EXPECT_EQ(got, std::nullopt);
      } else {
        EXPECT_EQ(got, expected.get<std::size_t>());
      }
    } else {
      const auto got = extract_json_field(completion, key);
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(*got, expected);
    }
    ++count;
  }
  EXPECT_EQ(count, 50);
}

}  // namespace
}  // namespace vinsta::llm
