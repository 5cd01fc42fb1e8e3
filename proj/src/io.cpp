#include "lexsimp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lexsimp/error.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp::io {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

/// Fields of a data row; trailing empty fields are dropped, inner ones rejected.
std::vector<std::string> row_fields(const std::string& line, const std::string& source, std::size_t lineno) {
  if (!text::is_valid_utf8(line)) {
    throw EncodingError(source + ":" + std::to_string(lineno) + ": invalid UTF-8");
  }
  std::vector<std::string> fields = split_tabs(line);
  while (!fields.empty() && fields.back().empty()) fields.pop_back();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].empty()) throw ParseError(source, lineno, "empty field " + std::to_string(i + 1));
  }
  return fields;
}

std::optional<double> parse_double(const std::string& s) {
  // strtod accepts the exponent and sign forms lexicon files use.
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> split_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

Dataset parse_dataset(std::istream& in, const std::string& source, bool expect_gold) {
  Dataset ds;
  ds.source = source;
  const std::vector<std::string> lines = split_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (is_blank(lines[i])) {
      ds.warnings.push_back(source + ":" + std::to_string(lineno) + ": blank line skipped");
      continue;
    }
    std::vector<std::string> fields = row_fields(lines[i], source, lineno);
    if (fields.size() < 2) {
      throw ParseError(source, lineno, "expected sentence<TAB>word, found " + std::to_string(fields.size()) + " column");
    }
    if (expect_gold && fields.size() < 3) {
      throw ParseError(source, lineno, "expected at least one gold substitute column");
    }
    try {
      ds.instances.emplace_back(fields[0], fields[1]);
    } catch (const DataError& e) {
      throw ParseError(source, lineno, e.what());
    }
    if (expect_gold) {
      ds.gold.push_back(derive_gold(std::vector<std::string>(fields.begin() + 2, fields.end())));
    }
    ds.line_numbers.push_back(lineno);
  }
  return ds;
}

Dataset read_dataset(const std::string& path, bool expect_gold) {
  std::ifstream in = open_input(path);
  return parse_dataset(in, path, expect_gold);
}

std::vector<PredictionRow> parse_predictions(std::istream& in, const std::string& source) {
  std::vector<PredictionRow> rows;
  const std::vector<std::string> lines = split_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (is_blank(lines[i])) continue;
    std::vector<std::string> fields = row_fields(lines[i], source, lineno);
    if (fields.size() < 2) throw ParseError(source, lineno, "expected sentence<TAB>word[<TAB>candidates]");
    PredictionRow row;
    row.sentence = std::move(fields[0]);
    row.word = std::move(fields[1]);
    row.candidates.assign(std::make_move_iterator(fields.begin() + 2), std::make_move_iterator(fields.end()));
    row.line = lineno;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PredictionRow> read_predictions(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_predictions(in, path);
}

std::string format_predictions(const std::vector<Instance>& instances,
                               const std::vector<std::vector<std::string>>& outputs,
                               std::vector<std::string>* warnings) {
  if (instances.size() != outputs.size()) {
    throw DataError("write_predictions: " + std::to_string(instances.size()) + " instances but " +
                    std::to_string(outputs.size()) + " outputs");
  }
  std::string out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out += instances[i].sentence();
    out += '\t';
    out += instances[i].complex_word();
    for (const std::string& c : outputs[i]) {
      if (c.empty() || c.find_first_of("\t\r\n") != std::string::npos) {
        throw DataError("candidate '" + c + "' cannot be written to a TSV field");
      }
      out += '\t';
      out += c;
    }
    out += '\n';
    if (outputs[i].empty() && warnings) {
      warnings->push_back("instance " + std::to_string(i + 1) + " ('" + instances[i].complex_word() +
                          "') has no candidates");
    }
  }
  return out;
}

std::vector<std::string> write_predictions(const std::vector<Instance>& instances,
                                           const std::vector<std::vector<std::string>>& outputs,
                                           const std::string& path) {
  std::vector<std::string> warnings;
  const std::string body = format_predictions(instances, outputs, &warnings);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << body;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot move predictions into '" + path + "': " + ec.message());
  }
  return warnings;
}

Lexicon parse_lexicon(const std::string& name, std::istream& in, const std::string& source,
                      std::vector<std::string>* warnings) {
  std::map<std::string, double> table;
  std::map<std::string, std::size_t> first_seen;
  const std::vector<std::string> lines = split_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (is_blank(lines[i])) continue;
    const std::vector<std::string> fields = row_fields(lines[i], source, lineno);
    if (fields.size() != 2) throw ParseError(source, lineno, "expected word<TAB>value");
    const auto value = parse_double(fields[1]);
    if (!value) throw ParseError(source, lineno, "value '" + fields[1] + "' is not a finite number");
    const std::string word = text::to_lower(fields[0]);
    if (auto [it, inserted] = first_seen.emplace(word, lineno); !inserted && warnings) {
      warnings->push_back(source + ":" + std::to_string(lineno) + ": duplicate entry '" + word +
                          "' overrides line " + std::to_string(it->second));
      it->second = lineno;
    }
    table[word] = *value;
  }
  return Lexicon(name, table);
}

Lexicon read_lexicon(const std::string& name, const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in = open_input(path);
  return parse_lexicon(name, in, path, warnings);
}

TableEmbedding read_vec_embeddings(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, std::vector<double>, std::less<>> table;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> v;
    std::string tok;
    while (fields >> tok) {
      const auto x = parse_double(tok);
      if (!x) throw ParseError(path, lineno, "bad vector component '" + tok + "'");
      v.push_back(*x);
    }
    // "count dim" header
    if (lineno == 1 && v.size() == 1 && parse_int(word)) continue;
    if (dim == 0) dim = v.size();
    if (v.size() != dim || dim == 0) throw ParseError(path, lineno, "vector length differs from " + std::to_string(dim));
    table.emplace(text::to_lower(word), std::move(v));
  }
  return TableEmbedding(dim, std::move(table));
}

std::map<std::string, std::vector<std::map<std::string, double>>> read_feature_table(const std::string& dir,
                                                                                  std::size_t instances) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .tsv feature files in '" + dir + "'");

  std::map<std::string, std::vector<std::map<std::string, double>>> table;
  for (const fs::path& file : files) {
    const std::string source = file.string();
    std::ifstream in = open_input(source);
    std::map<std::string, double> shared;
    std::vector<std::map<std::string, double>> specific(instances);
    const std::vector<std::string> lines = split_lines(in);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::size_t lineno = i + 1;
      if (is_blank(lines[i])) continue;
      const std::vector<std::string> fields = row_fields(lines[i], source, lineno);
      if (fields.size() != 2 && fields.size() != 3) {
        throw ParseError(source, lineno, "expected word<TAB>value or index<TAB>word<TAB>value");
      }
      const auto value = parse_double(fields.back());
      if (!value) throw ParseError(source, lineno, "value '" + fields.back() + "' is not a finite number");
      if (fields.size() == 2) {
        shared[text::to_lower(fields[0])] = *value;
        continue;
      }
      const auto index = parse_int(fields[0]);
      if (!index || *index < 1 || static_cast<std::size_t>(*index) > instances) {
        throw ParseError(source, lineno, "instance index '" + fields[0] + "' out of range");
      }
      specific[static_cast<std::size_t>(*index) - 1][text::to_lower(fields[1])] = *value;
    }
    std::vector<std::map<std::string, double>> merged(instances, shared);
    for (std::size_t i = 0; i < instances; ++i) {
      for (const auto& [word, v] : specific[i]) merged[i][word] = v;
    }
    table.emplace(file.stem().string(), std::move(merged));
  }
  return table;
}

MetricTable parse_metric_table(std::istream& in, const std::string& source, std::size_t label_columns) {
  MetricTable table;
  const std::vector<std::string> lines = split_lines(in);
  bool header = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (is_blank(lines[i])) continue;
    const std::vector<std::string> fields = split_tabs(lines[i]);
    if (header) {
      if (fields.size() <= label_columns) throw ParseError(source, lineno, "header has no metric columns");
      table.metrics.assign(fields.begin() + static_cast<std::ptrdiff_t>(label_columns), fields.end());
      header = false;
      continue;
    }
    if (fields.size() != label_columns + table.metrics.size()) {
      throw ParseError(source, lineno, "expected " + std::to_string(label_columns + table.metrics.size()) +
                                           " columns, found " + std::to_string(fields.size()));
    }
    std::string label;
    for (std::size_t c = 0; c < label_columns; ++c) {
      if (c) label += ' ';
      label += fields[c];
    }
    std::vector<double> row;
    for (std::size_t c = label_columns; c < fields.size(); ++c) {
      const auto v = parse_double(fields[c]);
      if (!v) throw ParseError(source, lineno, "value '" + fields[c] + "' is not a finite number");
      row.push_back(*v);
    }
    table.labels.push_back(std::move(label));
    table.rows.push_back(std::move(row));
  }
  if (header) throw ParseError(source, 1, "missing header row");
  return table;
}

MetricTable read_metric_table(const std::string& path, std::size_t label_columns) {
  std::ifstream in = open_input(path);
  return parse_metric_table(in, path, label_columns);
}

Settings parse_config(std::istream& in, const std::string& source, std::optional<RunId> run_override) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> keys;
  const std::vector<std::string> lines = split_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    const std::size_t first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) throw ConfigError(raw, source + ":" + std::to_string(i + 1) + ": expected key=value");
    auto trim = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(raw.substr(0, eq));
    std::string value = trim(raw.substr(eq + 1));
    if (!keys.insert(key).second) throw ConfigError(key, "given more than once");
    entries.emplace_back(std::move(key), std::move(value));
  }

  Settings settings;
  for (const auto& [key, value] : entries) {
    if (key != "run") continue;
    const auto id = parse_run(value);
    if (!id) throw ConfigError(key, "unknown run '" + value + "' (lsbert, mantis1, mantis2, mantis3)");
    settings.run = RunConfig::preset(*id);
  }
  if (run_override) settings.run = RunConfig::preset(*run_override);

  auto positive = [](const std::string& key, const std::string& value) {
    const auto v = parse_int(value);
    if (!v || *v < 1) throw ConfigError(key, "expected a positive integer, got '" + value + "'");
    return *v;
  };
  for (const auto& [key, value] : entries) {
    if (key == "run") continue;
    if (key == "k_generate") {
      settings.run.k_generate = positive(key, value);
    } else if (key == "k_output") {
      settings.run.k_output = positive(key, value);
    } else if (key == "context_window_m") {
      settings.run.context_window_m = positive(key, value);
    } else if (key == "jobs") {
      settings.jobs = positive(key, value);
    } else if (key == "prune_by_equivalence") {
      if (value == "true" || value == "1" || value == "yes") {
        settings.run.prune_by_equivalence = true;
      } else if (value == "false" || value == "0" || value == "no") {
        settings.run.prune_by_equivalence = false;
      } else {
        throw ConfigError(key, "expected true or false, got '" + value + "'");
      }
    } else if (key.starts_with("weights.")) {
      const auto feature = parse_feature(key.substr(8));
      if (!feature) throw ConfigError(key, "unknown feature");
      const auto w = parse_int(value);
      if (!w || *w < 0) throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
      settings.run.feature_weights[*feature] = *w;
    } else if (key == "providers") {
      if (value != "stub" && value != "remote") throw ConfigError(key, "expected stub or remote");
      settings.providers = value;
    } else if (key == "remote.endpoint") {
      settings.remote_endpoint = value;
    } else if (key == "lexicon.freq") {
      settings.freq_lexicon = value;
    } else if (key == "lexicon.wp_crowd") {
      settings.wp_crowd_lexicon = value;
    } else if (key == "lexicon.wp_corp") {
      settings.wp_corp_lexicon = value;
    } else if (key == "embeddings.vec") {
      settings.embeddings_vec = value;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return settings;
}

Settings read_config(const std::string& path, std::optional<RunId> run_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  Settings settings = parse_config(in, path, run_override);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (auto* file : {&settings.freq_lexicon, &settings.wp_crowd_lexicon, &settings.wp_corp_lexicon,
                     &settings.embeddings_vec}) {
    if (*file && std::filesystem::path(**file).is_relative()) **file = (base / **file).string();
  }
  return settings;
}

}  // namespace lexsimp::io
