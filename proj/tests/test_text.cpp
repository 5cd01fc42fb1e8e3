#include <doctest.h>

#include <sstream>
#include <string>

#include "lexsimp/stemmer.hpp"
#include "lexsimp/text.hpp"
#include "support.hpp"

using namespace lexsimp;

TEST_CASE("fnv1a64 reference values") {
  CHECK(text::fnv1a64("") == 14695981039346656037ULL);
  CHECK(text::fnv1a64("a") == 12638187200555641996ULL);
}

TEST_CASE("hash_unit matches the python oracle") {
  CHECK(text::hash_unit("big") == 0.993);
  CHECK(text::hash_unit("large") == 0.324);
  CHECK(text::hash_unit("huge") == 0.962);
  CHECK(text::hash_unit("vast") == 0.487);
}

TEST_CASE("utf8 validation") {
  CHECK(text::is_valid_utf8("plain ascii"));
  CHECK(text::is_valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(text::is_valid_utf8("\xc3"));
  CHECK_FALSE(text::is_valid_utf8("\xff\xfe"));
  CHECK_FALSE(text::is_valid_utf8("\xc0\xaf"));  // overlong
}

TEST_CASE("lowercasing") {
  CHECK(text::to_lower("MANDATORY") == "mandatory");
  CHECK(text::to_lower("\xc3\x89" "COLE") == "\xc3\xa9" "cole");
  CHECK(text::simple_lower(U'É') == U'é');
}

TEST_CASE("decode and encode round trip") {
  const std::string s = "na\xc3\xafve \xe2\x80\x99 \xf0\x9f\x99\x82";
  CHECK(text::encode_utf8(text::decode_utf8(s)) == s);
  CHECK(text::decode_utf8(s).size() == 9);
}

TEST_CASE("word tokens") {
  CHECK(text::is_word_token("simple"));
  CHECK(text::is_word_token("don't"));
  CHECK(text::is_word_token("e-mail"));
  CHECK(text::is_word_token("na\xc3\xafve"));
  CHECK_FALSE(text::is_word_token(""));
  CHECK_FALSE(text::is_word_token("2022"));
  CHECK_FALSE(text::is_word_token(","));
  CHECK_FALSE(text::is_word_token("-ab"));
  CHECK_FALSE(text::is_word_token("ab-"));
  CHECK_FALSE(text::is_word_token("two words"));
}

TEST_CASE("byte offsets and tokens") {
  const std::string s = "\xc3\xa9t\xc3\xa9  ok, fine.";
  CHECK(text::byte_offset(s, 0) == 0);
  CHECK(text::byte_offset(s, 1) == 2);
  CHECK(text::byte_offset(s, 3) == 5);
  CHECK(text::byte_offset(s, 100) == s.size());

  const auto toks = text::whitespace_tokens(s);
  REQUIRE(toks.size() == 3);
  CHECK(s.substr(toks[1].begin, toks[1].end - toks[1].begin) == "ok,");
  const auto core = text::word_core(s, toks[1]);
  CHECK(s.substr(core.begin, core.end - core.begin) == "ok");
  const auto dots = text::whitespace_tokens("-- ...");
  const auto empty = text::word_core("-- ...", dots[1]);
  CHECK(empty.begin == empty.end);
}

TEST_CASE("porter stemmer matches the reference table") {
  std::istringstream table(testing::slurp(testing::data_path("porter_reference.tsv")));
  std::string line;
  int rows = 0;
  while (std::getline(table, line)) {
    const auto tab = line.find('\t');
    const std::string word = line.substr(0, tab);
    const std::string stem = line.substr(tab + 1);
    INFO(word);
    CHECK(porter_stem(word) == stem);
    ++rows;
  }
  CHECK(rows > 1500);
}

TEST_CASE("porter stemmer leaves short and non-ascii words alone") {
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("caf\xc3\xa9s") == "caf\xc3\xa9s");
  CHECK(porter_stem("Running") == "Running");
}

TEST_CASE("morphological variants") {
  CHECK(is_morphological_variant("compulsory", "compulsory"));
  CHECK(is_morphological_variant("require", "required"));
  CHECK(is_morphological_variant("requirement", "required"));
  CHECK(is_morphological_variant("fast", "faster"));
  CHECK(is_morphological_variant("walk", "walking"));
  CHECK(is_morphological_variant("boxes", "box"));
  CHECK_FALSE(is_morphological_variant("compulsory", "mandatory"));
  CHECK_FALSE(is_morphological_variant("big", "large"));
}
