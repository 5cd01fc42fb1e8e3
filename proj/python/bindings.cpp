#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lexsimp/cli.hpp"
#include "lexsimp/error.hpp"
#include "lexsimp/eval.hpp"
#include "lexsimp/pipeline.hpp"
#include "lexsimp/ranking.hpp"
#include "lexsimp/stemmer.hpp"

namespace py = pybind11;
using namespace lexsimp;

namespace {

RunId run_or_throw(const std::string& name) {
  const auto run = parse_run(name);
  if (!run) throw py::value_error("unknown run '" + name + "'");
  return *run;
}

py::dict gold_dict(const GoldAnnotations& g) {
  py::dict d;
  d["freq_table"] = std::map<std::string, int>(g.freq_table().begin(), g.freq_table().end());
  d["gold_set"] = g.gold_set();
  d["top1_set"] = g.top1_set();
  return d;
}

std::vector<std::string> simplify_one(const std::string& sentence, const std::string& word, const std::string& run,
                                      int k_output) {
  RunConfig cfg = RunConfig::preset(run_or_throw(run));
  cfg.k_output = k_output;
  const Simplifier simplifier(make_stub_providers(), cfg);
  return simplifier.simplify(Instance(sentence, word)).output.candidates;
}

py::dict evaluate(const std::vector<std::vector<std::string>>& gold,
                  const std::vector<std::vector<std::string>>& predictions, std::optional<std::vector<int>> ks,
                  std::optional<std::vector<int>> top1_ks) {
  std::vector<GoldAnnotations> annotations;
  annotations.reserve(gold.size());
  for (const auto& g : gold) annotations.push_back(derive_gold(g));
  const auto report = eval::evaluate(annotations, predictions, ks ? *ks : eval::kDefaultKs,
                                     top1_ks ? *top1_ks : eval::kDefaultTop1Ks);
  py::dict out;
  for (const auto& [name, value] : report.values) out[py::str(name)] = value;
  return out;
}

py::dict correlate(const std::vector<std::string>& metrics, const std::vector<std::vector<double>>& rows) {
  const auto r = eval::metric_correlation_report(metrics, rows);
  py::dict d;
  d["metrics"] = r.metrics;
  d["matrix"] = r.matrix;
  d["mean"] = r.mean;
  d["sd"] = r.sd;
  return d;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = cli::run(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_lexsimp, m) {
  m.doc() = "Lexical simplification ranking and evaluation";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ProviderFailure>(m, "ProviderFailure", PyExc_RuntimeError);

  m.def("derive_gold", [](const std::vector<std::string>& s) { return gold_dict(derive_gold(s)); },
        py::arg("suggestions"));
  m.def("porter_stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"));
  m.def(
      "rank_feature",
      [](const std::vector<std::optional<double>>& scores, bool higher_is_better) {
        return rank_feature(scores, higher_is_better ? Direction::higher_better : Direction::lower_better);
      },
      py::arg("scores"), py::arg("higher_is_better") = true);
  m.def("prune_by_mean_eq", [](const std::vector<double>& eq) { return prune_by_mean_eq(eq); }, py::arg("eq"));
  m.def("simplify", &simplify_one, py::arg("sentence"), py::arg("word"), py::arg("run") = "lsbert",
        py::arg("k_output") = 10, "Ranked substitutes for one instance using the offline stub providers.");
  m.def("evaluate", &evaluate, py::arg("gold"), py::arg("predictions"), py::arg("ks") = py::none(),
        py::arg("top1_ks") = py::none());
  m.def("correlate", &correlate, py::arg("metrics"), py::arg("rows"));
  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command line tool; returns (exit code, stdout, stderr).");
}
