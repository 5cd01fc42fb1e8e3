#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexsimp/core.hpp"
#include "lexsimp/providers.hpp"

namespace lexsimp::io {

// All files are UTF-8 TSV without headers or quoting. CRLF line endings are
// accepted on input; output always uses LF.

/// `sentence<TAB>word[<TAB>gold...]` rows.
struct Dataset {
  std::string source;
  std::vector<Instance> instances;
  std::vector<GoldAnnotations> gold;  // empty, or one per instance
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> warnings;

  bool has_gold() const { return !gold.empty(); }
  std::size_t size() const { return instances.size(); }
};

/// With expect_gold, every row needs at least one gold column. Without it,
/// extra columns are ignored. Blank lines are skipped with a warning.
/// Throws ParseError, EncodingError or IoError.
Dataset read_dataset(const std::string& path, bool expect_gold);
Dataset parse_dataset(std::istream& in, const std::string& source, bool expect_gold);

struct PredictionRow {
  std::string sentence;
  std::string word;
  std::vector<std::string> candidates;
  std::size_t line = 0;
};

/// `sentence<TAB>word<TAB>cand1...` rows; zero candidates allowed.
std::vector<PredictionRow> read_predictions(const std::string& path);
std::vector<PredictionRow> parse_predictions(std::istream& in, const std::string& source);

/// One row per instance, in order. Returns warnings (e.g. empty candidate
/// lists). The file is written to a temporary name and renamed into place.
std::vector<std::string> write_predictions(const std::vector<Instance>& instances,
                                           const std::vector<std::vector<std::string>>& outputs,
                                           const std::string& path);
std::string format_predictions(const std::vector<Instance>& instances,
                               const std::vector<std::vector<std::string>>& outputs,
                               std::vector<std::string>* warnings = nullptr);

/// `word<TAB>value` rows. Duplicate words: last wins, with a warning.
Lexicon read_lexicon(const std::string& name, const std::string& path, std::vector<std::string>* warnings = nullptr);
Lexicon parse_lexicon(const std::string& name, std::istream& in, const std::string& source,
                      std::vector<std::string>* warnings = nullptr);

/// fastText/word2vec text format; an optional "count dim" header line.
TableEmbedding read_vec_embeddings(const std::string& path);

/// Reads `<feature>.tsv` files from `dir` into a FeatureTable for a trial of
/// `instances` rows. A row is either `word<TAB>value` (applies to every
/// instance) or `index<TAB>word<TAB>value` (1-based instance index; overrides
/// the shared value for that instance).
std::map<std::string, std::vector<std::map<std::string, double>>> read_feature_table(const std::string& dir,
                                                                                  std::size_t instances);

/// A results table: a header row, then one row per system. The first
/// `label_columns` columns are labels; the rest are numeric metric columns.
struct MetricTable {
  std::vector<std::string> metrics;
  std::vector<std::string> labels;  // label columns joined by a space
  std::vector<std::vector<double>> rows;
};

MetricTable read_metric_table(const std::string& path, std::size_t label_columns);
MetricTable parse_metric_table(std::istream& in, const std::string& source, std::size_t label_columns);

/// Everything a simplify run needs beyond the dataset.
struct Settings {
  RunConfig run = RunConfig::preset(RunId::lsbert);
  std::string providers = "stub";  // stub | remote
  std::optional<std::string> remote_endpoint;
  std::optional<std::string> freq_lexicon;
  std::optional<std::string> wp_crowd_lexicon;
  std::optional<std::string> wp_corp_lexicon;
  std::optional<std::string> embeddings_vec;
  int jobs = 1;
};

/// Flat `key=value` lines; `#` starts a comment line. Keys:
///   run, k_generate, k_output, context_window, prune_by_equivalence,
///   weights.<feature>, providers, remote.endpoint, lexicon.freq,
///   lexicon.wp_crowd, lexicon.wp_corp, embeddings.vec, jobs
/// `run` selects the preset first; the other keys then override it. A
/// `run_override` replaces the file's `run` key.
/// Throws ConfigError naming the offending key. read_config resolves relative
/// lexicon and embedding paths against the config file's directory.
Settings read_config(const std::string& path, std::optional<RunId> run_override = std::nullopt);
Settings parse_config(std::istream& in, const std::string& source,
                      std::optional<RunId> run_override = std::nullopt);

/// Splits on '\n', strips a trailing '\r' from each line.
std::vector<std::string> split_lines(std::istream& in);
std::vector<std::string> split_tabs(const std::string& line);

}  // namespace lexsimp::io
