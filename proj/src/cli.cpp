#include "lexsimp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>

#include "lexsimp/error.hpp"
#include "lexsimp/eval.hpp"
#include "lexsimp/io.hpp"
#include "lexsimp/pipeline.hpp"
#include "lexsimp/ranking.hpp"
#include "lexsimp/remote.hpp"

namespace lexsimp::cli {

namespace {

struct SimplifyArgs {
  std::string test;
  std::string run;
  std::string out;
  std::string config;
  std::string providers;
  std::string endpoint;
  int jobs = 0;
};

struct EvaluateArgs {
  std::string gold;
  std::string pred;
  std::vector<int> ks;
  std::vector<int> top1_ks;
  std::string report;
  bool pretty = false;
};

struct SelectArgs {
  std::string trial;
  std::string scores;
  int top = 2;
};

struct CorrelateArgs {
  std::string table;
  std::size_t label_columns = 3;
};

ProviderSet build_providers(const io::Settings& settings, const std::string& endpoint_flag, std::ostream& err) {
  ProviderSet set;
  std::vector<std::string> warnings;
  if (settings.providers == "remote") {
    std::string endpoint = endpoint_flag;
    if (endpoint.empty()) {
      if (const char* env = std::getenv(kEndpointEnv); env && *env) endpoint = env;
    }
    if (endpoint.empty() && settings.remote_endpoint) endpoint = *settings.remote_endpoint;
    if (endpoint.empty()) {
      throw ConfigError("remote.endpoint", std::string("remote providers need --endpoint, ") + kEndpointEnv +
                                               " or remote.endpoint");
    }
    auto client = std::make_shared<remote::Client>(remote::connect(endpoint));
    set.lm = std::make_shared<remote::RemoteMaskedLM>(client);
    set.nli = std::make_shared<remote::RemoteNLI>(client);
    set.embeddings = std::make_shared<remote::RemoteEmbedding>(client);
  } else if (settings.providers == "stub") {
    set = make_stub_providers();
  } else {
    throw ConfigError("providers", "unknown provider kind '" + settings.providers + "'");
  }
  if (settings.embeddings_vec) {
    set.embeddings = std::make_shared<TableEmbedding>(io::read_vec_embeddings(*settings.embeddings_vec));
  }
  if (settings.freq_lexicon) set.freq = io::read_lexicon("freq", *settings.freq_lexicon, &warnings);
  if (settings.wp_crowd_lexicon) set.wp_crowd = io::read_lexicon("wp_crowd", *settings.wp_crowd_lexicon, &warnings);
  if (settings.wp_corp_lexicon) set.wp_corp = io::read_lexicon("wp_corp", *settings.wp_corp_lexicon, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return set;
}

int cmd_simplify(const SimplifyArgs& args, std::ostream& err) {
  const RunId run = *parse_run(args.run);
  io::Settings settings;
  if (args.config.empty()) {
    settings.run = RunConfig::preset(run);
  } else {
    settings = io::read_config(args.config, run);
  }
  if (run == RunId::mantis1) settings.run.prune_by_equivalence = true;
  if (!args.providers.empty()) settings.providers = args.providers;
  if (args.jobs > 0) settings.jobs = args.jobs;

  const io::Dataset data = io::read_dataset(args.test, false);
  for (const auto& w : data.warnings) err << "warning: " << w << '\n';

  const Simplifier simplifier(build_providers(settings, args.endpoint, err), settings.run);
  const std::size_t total = data.size();
  const auto results =
      simplifier.simplify_all(data.instances, settings.jobs, [&](std::size_t i, const Instance& inst, const InstanceResult& r) {
        err << "[" << (i + 1) << "/" << total << "] " << inst.complex_word() << ": "
            << r.output.candidates.size() << " candidates\n";
        if (r.warning) err << "warning: instance " << (i + 1) << ": " << *r.warning << '\n';
      });

  std::vector<std::vector<std::string>> outputs;
  outputs.reserve(results.size());
  for (const auto& r : results) outputs.push_back(r.output.candidates);
  for (const auto& w : io::write_predictions(data.instances, outputs, args.out)) err << "warning: " << w << '\n';
  err << "wrote " << total << " predictions to " << args.out << '\n';
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& args, bool ks_given, bool top1_given, std::ostream& out, std::ostream& err) {
  const io::Dataset gold = io::read_dataset(args.gold, true);
  for (const auto& w : gold.warnings) err << "warning: " << w << '\n';
  const std::vector<io::PredictionRow> pred = io::read_predictions(args.pred);

  const std::size_t n = std::min(gold.size(), pred.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Instance& g = gold.instances[i];
    if (g.sentence() != pred[i].sentence || g.complex_word() != pred[i].word) {
      throw DataError(args.pred + ":" + std::to_string(pred[i].line) + ": instance does not match " + args.gold + ":" +
                      std::to_string(gold.line_numbers[i]) + " (expected target '" + g.complex_word() + "', found '" +
                      pred[i].word + "')");
    }
  }
  if (gold.size() != pred.size()) {
    throw DataError(args.pred + ": " + std::to_string(pred.size()) + " instances, but " + args.gold + " has " +
                    std::to_string(gold.size()));
  }

  std::vector<int> ks = ks_given ? args.ks : std::vector<int>(eval::kDefaultKs.begin(), eval::kDefaultKs.end());
  std::vector<int> top1_ks;
  if (top1_given) {
    top1_ks = args.top1_ks;
  } else if (!ks_given) {
    top1_ks.assign(eval::kDefaultTop1Ks.begin(), eval::kDefaultTop1Ks.end());
  }
  std::vector<std::vector<std::string>> predictions;
  predictions.reserve(pred.size());
  for (const auto& row : pred) predictions.push_back(row.candidates);

  const eval::MetricReport report = eval::evaluate(gold.gold, predictions, ks, top1_ks);
  const std::string tsv = eval::format_tsv(report);
  out << (args.pretty ? eval::format_table(report) : tsv);
  if (!args.report.empty()) {
    std::ofstream file(args.report, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write '" + args.report + "'");
    file << tsv;
    if (!file.flush()) throw IoError("write to '" + args.report + "' failed");
  }
  return kExitOk;
}

int cmd_select_features(const SelectArgs& args, std::ostream& out, std::ostream& err) {
  const io::Dataset trial = io::read_dataset(args.trial, true);
  for (const auto& w : trial.warnings) err << "warning: " << w << '\n';
  std::vector<TrialItem> items;
  items.reserve(trial.size());
  for (std::size_t i = 0; i < trial.size(); ++i) items.push_back({trial.instances[i], trial.gold[i]});
  const FeatureTable table = io::read_feature_table(args.scores, trial.size());

  const FeatureSelection selection = select_features(items, table, args.top);
  for (const auto& w : selection.warnings) err << "warning: " << w << '\n';
  for (const auto& f : selection.ranked) {
    char value[32];
    std::snprintf(value, sizeof value, "%.4f", f.mean_spearman);
    out << f.feature << '\t' << value << '\t' << f.instances << '\n';
  }
  return kExitOk;
}

int cmd_correlate_metrics(const CorrelateArgs& args, std::ostream& out) {
  const io::MetricTable table = io::read_metric_table(args.table, args.label_columns);
  out << eval::format_correlation(eval::metric_correlation_report(table.metrics, table.rows));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexical simplification: candidate generation, ranking and evaluation", "lexsimp"};
  app.require_subcommand(1, 1);

  SimplifyArgs simplify;
  auto* sc_simplify = app.add_subcommand("simplify", "Generate and rank substitutes for a test file");
  sc_simplify->add_option("--test", simplify.test, "sentence<TAB>word TSV")->required();
  sc_simplify->add_option("--run", simplify.run, "Run preset")
      ->required()
      ->check(CLI::IsMember({"lsbert", "mantis1", "mantis2", "mantis3"}));
  sc_simplify->add_option("--out", simplify.out, "Prediction file to write")->required();
  sc_simplify->add_option("--config", simplify.config, "key=value config file");
  sc_simplify->add_option("--providers", simplify.providers, "Model backends")->check(CLI::IsMember({"stub", "remote"}));
  sc_simplify->add_option("--endpoint", simplify.endpoint, "Remote endpoint (tcp://host:port or exec:<cmd>)");
  sc_simplify->add_option("--jobs", simplify.jobs, "Instances processed in parallel")->check(CLI::PositiveNumber);

  EvaluateArgs evaluate;
  auto* sc_evaluate = app.add_subcommand("evaluate", "Score predictions against gold annotations");
  sc_evaluate->add_option("--gold", evaluate.gold, "sentence<TAB>word<TAB>gold... TSV")->required();
  sc_evaluate->add_option("--pred", evaluate.pred, "Prediction TSV")->required();
  auto* k_opt = sc_evaluate->add_option("--k", evaluate.ks, "Cutoffs for MAP and Potential")
                    ->delimiter(',')
                    ->check(CLI::PositiveNumber);
  auto* top1_opt = sc_evaluate->add_option("--top1-k", evaluate.top1_ks, "Cutoffs for Accuracy@K@top1")
                       ->delimiter(',')
                       ->check(CLI::PositiveNumber);
  sc_evaluate->add_option("--report", evaluate.report, "Also write the TSV report here");
  sc_evaluate->add_flag("--pretty", evaluate.pretty, "Aligned table instead of TSV");

  SelectArgs select;
  auto* sc_select = app.add_subcommand("select-features", "Rank features by Spearman correlation with gold counts");
  sc_select->add_option("--trial", select.trial, "Trial TSV with gold columns")->required();
  sc_select->add_option("--scores", select.scores, "Directory of <feature>.tsv score files")->required();
  sc_select->add_option("--top", select.top, "Number of features to report")->check(CLI::PositiveNumber);

  CorrelateArgs correlate;
  auto* sc_correlate = app.add_subcommand("correlate-metrics", "Pearson correlation between metric columns");
  sc_correlate->add_option("--table", correlate.table, "Results TSV with a header row")->required();
  sc_correlate->add_option("--label-columns", correlate.label_columns, "Leading non-metric columns");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const CLI::App* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (sc_simplify->parsed()) return cmd_simplify(simplify, err);
    if (sc_evaluate->parsed()) return cmd_evaluate(evaluate, k_opt->count() > 0, top1_opt->count() > 0, out, err);
    if (sc_select->parsed()) return cmd_select_features(select, out, err);
    if (sc_correlate->parsed()) return cmd_correlate_metrics(correlate, out);
  } catch (const ProviderFailure& e) {
    err << "provider error: " << e.what() << '\n';
    return kExitProvider;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lexsimp::cli
