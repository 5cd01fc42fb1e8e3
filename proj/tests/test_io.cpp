#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "lexsimp/error.hpp"
#include "lexsimp/io.hpp"
#include "support.hpp"

using namespace lexsimp;

namespace {

io::Dataset parse(const std::string& body, bool gold) {
  std::istringstream in(body);
  return io::parse_dataset(in, "mem", gold);
}

io::Settings config(const std::string& body, std::optional<RunId> run = std::nullopt) {
  std::istringstream in(body);
  return io::parse_config(in, "mem.cfg", run);
}

}  // namespace

TEST_CASE("dataset rows") {
  const auto ds = parse("A b c.\tc\n", false);
  REQUIRE(ds.size() == 1);
  CHECK_FALSE(ds.has_gold());
  CHECK(ds.instances[0].complex_word() == "c");

  const auto extra = parse("A b c.\tc\tignored\r\n\nX y.\ty\n", false);
  CHECK(extra.size() == 2);
  CHECK(extra.line_numbers == std::vector<std::size_t>{1, 3});
  CHECK(extra.warnings.size() == 1);
}

TEST_CASE("dataset errors carry the line number") {
  try {
    parse("ok line\tok\nonly one column\n", false);
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("A b.\tb\n", true), ParseError);
  CHECK_THROWS_AS(parse("A b.\t\tb\n", false), ParseError);
  CHECK_THROWS_AS(parse("A b.\tzzz\n", true), ParseError);
  CHECK_THROWS_AS(parse("A \xff.\tA\n", false), EncodingError);
  CHECK_THROWS_AS(io::read_dataset("/nonexistent/file.tsv", false), IoError);
}

TEST_CASE("trial fixture gold") {
  const auto ds = io::read_dataset(testing::data_path("trial_compulsory.tsv"), true);
  REQUIRE(ds.size() == 1);
  CHECK(ds.gold[0].suggestions().size() == 25);
  CHECK(ds.gold[0].count("mandatory") == 11);
  CHECK(ds.gold[0].gold_set().size() == 9);
  CHECK(ds.instances[0].complex_word() == "compulsory");
}

TEST_CASE("predictions format and round trip") {
  const std::vector<Instance> inst{Instance("A b c.", "b"), Instance("D e f.", "e")};
  std::vector<std::string> warnings;
  const std::string body = io::format_predictions(inst, {{"x", "y", "z"}, {}}, &warnings);
  CHECK(body == "A b c.\tb\tx\ty\tz\nD e f.\te\n");
  CHECK(warnings.size() == 1);

  testing::TempDir dir;
  const std::string path = dir.file("pred.tsv");
  io::write_predictions(inst, {{"caf\xc3\xa9", "na\xc3\xafve"}, {"w"}}, path);
  const auto rows = io::read_predictions(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].candidates == std::vector<std::string>{"caf\xc3\xa9", "na\xc3\xafve"});
  CHECK(rows[1].word == "e");
  CHECK(rows[1].line == 2);
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

  CHECK_THROWS_AS(io::format_predictions(inst, {{"a\tb"}, {}}), DataError);
  CHECK_THROWS_AS(io::format_predictions(inst, {{}}), DataError);
}

TEST_CASE("lexicons from TSV") {
  std::istringstream in("Mandatory\t2.1\nbig\t1e3\nbig\t7\n\n");
  std::vector<std::string> warnings;
  const Lexicon lex = io::parse_lexicon("wp_crowd", in, "mem", &warnings);
  CHECK(lex.lookup("mandatory") == 2.1);
  CHECK(lex.lookup("big") == 7.0);
  CHECK(warnings.size() == 1);
  std::istringstream bad("word\tnope\n");
  CHECK_THROWS_AS(io::parse_lexicon("x", bad, "mem"), ParseError);
  std::istringstream inf("word\tinf\n");
  CHECK_THROWS_AS(io::parse_lexicon("x", inf, "mem"), ParseError);
}

TEST_CASE("vec embeddings") {
  testing::TempDir dir;
  testing::spit(dir.file("a.vec"), "2 3\nbig 1 0 0\nlarge 0.5 0.5 0\n");
  const TableEmbedding emb = io::read_vec_embeddings(dir.file("a.vec"));
  CHECK(emb.dimension() == 3);
  CHECK(emb.embed("large") == std::vector<double>{0.5, 0.5, 0.0});
  CHECK(emb.embed("zzz") == std::vector<double>{0.0, 0.0, 0.0});

  testing::spit(dir.file("b.vec"), "big 1 0\nlarge 1\n");
  CHECK_THROWS_AS(io::read_vec_embeddings(dir.file("b.vec")), ParseError);
}

TEST_CASE("config presets and overrides") {
  const auto m1 = config("run=mantis1\n");
  CHECK(m1.run.run_id == RunId::mantis1);
  CHECK(m1.run.feature_weights.at(Feature::b) == 1);
  CHECK(m1.run.feature_weights.at(Feature::sim) == 3);
  CHECK(m1.run.feature_weights.at(Feature::freq) == 1);
  CHECK(m1.run.prune_by_equivalence);

  CHECK(config("k_generate=30\n").run.k_generate == 30);

  const auto custom = config("# comment\nweights.sim = 2\nrun = lsbert\nk_output=5\nproviders=remote\n"
                             "remote.endpoint=tcp://127.0.0.1:9000\njobs=4\n");
  CHECK(custom.run.feature_weights.at(Feature::sim) == 2);
  CHECK(custom.run.k_output == 5);
  CHECK(custom.providers == "remote");
  CHECK(custom.remote_endpoint == "tcp://127.0.0.1:9000");
  CHECK(custom.jobs == 4);

  CHECK(config("run=lsbert\n", RunId::mantis2).run.run_id == RunId::mantis2);
}

TEST_CASE("config errors name the key") {
  try {
    config("weights.sim=abc\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "weights.sim");
  }
  CHECK_THROWS_AS(config("run=mantis9\n"), ConfigError);
  CHECK_THROWS_AS(config("k_output=0\n"), ConfigError);
  CHECK_THROWS_AS(config("mystery=1\n"), ConfigError);
  CHECK_THROWS_AS(config("jobs=1\njobs=2\n"), ConfigError);
  CHECK_THROWS_AS(config("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(config("weights.zzz=1\n"), ConfigError);
  CHECK_THROWS_AS(config("prune_by_equivalence=maybe\n"), ConfigError);
}

TEST_CASE("config file paths resolve against the config directory") {
  testing::TempDir dir;
  testing::spit(dir.file("run.cfg"), "lexicon.freq=freq.tsv\nembeddings.vec=/abs/e.vec\n");
  const auto s = io::read_config(dir.file("run.cfg"));
  CHECK(s.freq_lexicon == dir.file("freq.tsv"));
  CHECK(s.embeddings_vec == "/abs/e.vec");
}

TEST_CASE("feature score directory") {
  const auto table = io::read_feature_table(testing::data_path("scores"), 4);
  CHECK(table.size() == 5);
  CHECK(table.at("wp_crowd").size() == 4);
  CHECK(table.at("freq")[0].count("manadatory") == 0);

  testing::TempDir dir;
  testing::spit(dir.file("f.tsv"), "shared\t1\n2\tshared\t5\n");
  const auto t = io::read_feature_table(dir.file(""), 2);
  CHECK(t.at("f")[0].at("shared") == 1.0);
  CHECK(t.at("f")[1].at("shared") == 5.0);
  testing::spit(dir.file("g.tsv"), "9\tx\t1\n");
  CHECK_THROWS_AS(io::read_feature_table(dir.file(""), 2), ParseError);
}

TEST_CASE("metric tables") {
  std::istringstream in("team\ta\tb\nx\t1\t2\ny\t3\t4\n");
  const auto t = io::parse_metric_table(in, "mem", 1);
  CHECK(t.metrics == std::vector<std::string>{"a", "b"});
  CHECK(t.rows[1] == std::vector<double>{3, 4});
  std::istringstream ragged("team\ta\tb\nx\t1\n");
  CHECK_THROWS_AS(io::parse_metric_table(ragged, "mem", 1), ParseError);
  std::istringstream text("team\ta\nx\tbad\n");
  CHECK_THROWS_AS(io::parse_metric_table(text, "mem", 1), ParseError);
}
