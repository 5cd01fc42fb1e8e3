#include "lexsimp/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "lexsimp/error.hpp"
#include "lexsimp/stats.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp::eval {

namespace {

void check_k(int k) {
  if (k < 1) throw DataError("K must be at least 1, got " + std::to_string(k));
}

std::size_t cutoff(std::span<const std::string> pred, int k) {
  return std::min(pred.size(), static_cast<std::size_t>(k));
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void check_predictions(std::span<const std::string> pred) {
  std::set<std::string, std::less<>> seen;
  for (const std::string& p : pred) {
    if (!seen.insert(text::to_lower(p)).second) {
      throw DataError("duplicate prediction '" + p + "'");
    }
  }
}

int potential_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k) {
  check_k(k);
  const std::size_t n = cutoff(pred, k);
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.contains(text::to_lower(pred[i]))) return 1;
  }
  return 0;
}

int accuracy_at_k_top1(std::span<const std::string> pred, const GoldAnnotations& gold, int k) {
  check_k(k);
  const std::size_t n = cutoff(pred, k);
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.in_top1(text::to_lower(pred[i]))) return 1;
  }
  return 0;
}

double average_precision_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k) {
  check_k(k);
  const std::size_t n = cutoff(pred, k);
  int hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!gold.contains(text::to_lower(pred[i]))) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(k);
}

double precision_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k) {
  check_k(k);
  const std::size_t n = cutoff(pred, k);
  int hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.contains(text::to_lower(pred[i]))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

int accuracy_at_1(std::span<const std::string> pred, const GoldAnnotations& gold) {
  return !pred.empty() && gold.contains(text::to_lower(pred.front())) ? 1 : 0;
}

std::optional<double> MetricReport::get(std::string_view metric) const {
  for (const auto& [name, v] : values) {
    if (name == metric) return v;
  }
  return std::nullopt;
}

MetricReport evaluate(std::span<const GoldAnnotations> gold, std::span<const std::vector<std::string>> predictions,
                      std::span<const int> ks, std::span<const int> top1_ks) {
  if (gold.size() != predictions.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " instances but predictions have " +
                    std::to_string(predictions.size()));
  }
  for (int k : ks) check_k(k);
  for (int k : top1_ks) check_k(k);
  for (const auto& p : predictions) check_predictions(p);

  MetricReport report;
  report.instances = gold.size();
  report.ks.assign(ks.begin(), ks.end());
  report.top1_ks.assign(top1_ks.begin(), top1_ks.end());
  const double n = gold.empty() ? 1.0 : static_cast<double>(gold.size());

  auto mean_of = [&](auto&& per_instance) {
    double total = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) total += per_instance(predictions[i], gold[i]);
    return total / n;
  };

  if (std::find(ks.begin(), ks.end(), 1) != ks.end()) {
    report.values.emplace_back("ACC@1", mean_of([](const auto& p, const auto& g) { return accuracy_at_1(p, g); }));
  }
  for (int k : top1_ks) {
    report.values.emplace_back("Accuracy@" + std::to_string(k) + "@top1",
                               mean_of([k](const auto& p, const auto& g) { return accuracy_at_k_top1(p, g, k); }));
  }
  for (int k : ks) {
    report.values.emplace_back("MAP@" + std::to_string(k),
                               mean_of([k](const auto& p, const auto& g) { return average_precision_at_k(p, g, k); }));
  }
  for (int k : ks) {
    report.values.emplace_back("Potential@" + std::to_string(k),
                               mean_of([k](const auto& p, const auto& g) { return potential_at_k(p, g, k); }));
  }
  return report;
}

std::string format_tsv(const MetricReport& report) {
  std::string out;
  for (const auto& [name, v] : report.values) {
    out += name;
    out += '\t';
    out += fixed(v, 4);
    out += '\n';
  }
  return out;
}

std::string format_table(const MetricReport& report) {
  std::size_t width = 6;
  for (const auto& [name, v] : report.values) width = std::max(width, name.size());
  std::string out = "metric" + std::string(width - 6 + 2, ' ') + "value\n";
  out += std::string(width + 2 + 6, '-') + "\n";
  for (const auto& [name, v] : report.values) {
    out += name + std::string(width - name.size() + 2, ' ') + fixed(v, 4) + "\n";
  }
  out += "(" + std::to_string(report.instances) + " instances)\n";
  return out;
}

CorrelationReport metric_correlation_report(const std::vector<std::string>& metrics,
                                            const std::vector<std::vector<double>>& rows) {
  if (metrics.size() < 2) throw DataError("correlation needs at least two metric columns");
  if (rows.size() < 3) throw DataError("correlation needs at least three rows");
  for (const auto& row : rows) {
    if (row.size() != metrics.size()) throw DataError("row width does not match the metric header");
  }
  const std::size_t m = metrics.size();
  std::vector<std::vector<double>> columns(m, std::vector<double>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < m; ++c) columns[c][r] = rows[r][c];
  }

  CorrelationReport report;
  report.metrics = metrics;
  report.matrix.assign(m, std::vector<double>(m, 1.0));
  std::vector<double> upper;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto r = stats::pearson(columns[a], columns[b]);
      if (!r) {
        const std::size_t bad = stats::sample_sd(columns[a]) == 0.0 ? a : b;
        throw DegenerateColumn("metric column '" + metrics[bad] + "' has zero variance");
      }
      report.matrix[a][b] = report.matrix[b][a] = *r;
      upper.push_back(*r);
    }
  }
  report.mean = stats::mean(upper);
  report.sd = stats::sample_sd(upper);
  return report;
}

std::string format_correlation(const CorrelationReport& report) {
  std::size_t width = 6;
  for (const auto& name : report.metrics) width = std::max(width, name.size());
  auto pad = [width](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  auto end_row = [](std::string& s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    s += '\n';
  };
  std::string out = pad("");
  for (const auto& name : report.metrics) out += pad(name);
  end_row(out);
  for (std::size_t a = 0; a < report.metrics.size(); ++a) {
    out += pad(report.metrics[a]);
    for (std::size_t b = 0; b < report.metrics.size(); ++b) out += pad(fixed(report.matrix[a][b], 3));
    end_row(out);
  }
  out += "mean\t" + fixed(report.mean, 3) + "\n";
  out += "sd\t" + fixed(report.sd, 3) + "\n";
  return out;
}

}  // namespace lexsimp::eval
