#include <gtest/gtest.h>

#include <sstream>

#include "transfer/corpus.hpp"

using namespace transfer;

namespace {

std::string record(const std::string& lang, const std::string& align = "0-0 1-1",
                   const std::string& l2_tree = "(S (NN a) (VB b))") {
  return R"j({"lang":")j" + lang + R"j(","l2":["a","b"],"l1":["a","b"],"l2_tree":")j" + l2_tree +
         R"j(","l1_tree":"(S (NN a) (VB b))","align":")j" + align + "\"}";
}

}  // namespace

TEST(Corpus, ReadsValidRecords) {
  std::istringstream in(record("de") + "\n" + record("de") + "\n\n" + record("fr") + "\n");
  CorpusReader r(in, 1);
  SentencePair p;
  int n = 0;
  while (r.next(p)) ++n;
  EXPECT_EQ(n, 3);
  EXPECT_EQ(r.stats().total_pairs, 3u);
  EXPECT_EQ(r.stats().retained_languages(), (std::vector<std::string>{"de", "fr"}));
  EXPECT_EQ(r.line(), 4u);
}

TEST(Corpus, RecordLineNumbers) {
  std::istringstream in("\n" + record("de") + "\n");
  CorpusReader r(in, 1);
  SentencePair p;
  ASSERT_TRUE(r.next(p));
  EXPECT_EQ(p.line, 2u);
}

TEST(Corpus, OutOfRangeAlignmentIsSkipped) {
  std::istringstream in(record("de", "0-0 9-1") + "\n" + record("de") + "\n");
  CorpusReader r(in, 1);
  SentencePair p;
  int n = 0;
  while (r.next(p)) ++n;
  EXPECT_EQ(n, 1);
  EXPECT_EQ(r.stats().invalid_records, 1u);
}

TEST(Corpus, StrictModeNamesTheLine) {
  std::istringstream in(record("de") + "\n" + "{not json\n");
  CorpusReader r(in, 1, true);
  SentencePair p;
  ASSERT_TRUE(r.next(p));
  try {
    r.next(p);
    FAIL() << "strict reader accepted a malformed line";
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 2:", 0), 0u) << e.what();
  }
}

TEST(Corpus, MinPairsThreshold) {
  std::string text;
  for (int i = 0; i < 5; ++i) text += record("small") + "\n";
  for (int i = 0; i < 20; ++i) text += record("big") + "\n";
  std::istringstream in(text);
  CorpusReader r(in, 10);
  SentencePair p;
  while (r.next(p)) {
  }
  EXPECT_EQ(r.stats().retained_languages(), (std::vector<std::string>{"big"}));
  EXPECT_FALSE(r.stats().retained("small"));
}

TEST(Corpus, LeafCountMismatchIsInvalid) {
  EXPECT_THROW(parse_record(record("de", "0-0", "(S (NN a))")), Error);
}

TEST(Corpus, AlignmentMayBeAbsentOrNull) {
  auto p = parse_record(R"j({"lang":"de","l2":["a"],"l1":["a"],"l2_tree":"(NN a)","align":null})j");
  EXPECT_FALSE(p.has_alignment);
  EXPECT_FALSE(p.l1_tree.has_value());
  auto q = parse_record(R"j({"lang":"de","l2":["a"],"l1":["a"],"l2_tree":"(NN a)"})j");
  EXPECT_FALSE(q.has_alignment);
}

TEST(Corpus, JsonRoundTrip) {
  auto p = parse_record(record("de", "0-1 1-0"));
  auto q = parse_record(to_json(p).dump());
  EXPECT_EQ(to_json(p), to_json(q));
  EXPECT_EQ(q.alignment, p.alignment);
  EXPECT_EQ(q.l2_tree, p.l2_tree);
}

TEST(Corpus, MissingFieldsAreErrors) {
  EXPECT_THROW(parse_record(R"j({"lang":"de","l2":["a"],"l1":["a"]})j"), Error);
  EXPECT_THROW(parse_record(R"j([1,2])j"), Error);
  EXPECT_THROW(parse_record(R"j({"lang":"","l2":["a"],"l1":["a"],"l2_tree":"(NN a)"})j"), Error);
}
