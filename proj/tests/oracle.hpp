#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. They share no code with src/ beyond the plain data types.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// |{j : s_j strictly better than s_i}| + 1; absent scores share |present| + 1.
inline std::vector<int> naive_rank(const std::vector<std::optional<double>>& s, bool higher_better) {
  int present = 0;
  for (const auto& x : s) present += x.has_value() ? 1 : 0;
  std::vector<int> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) {
      out.push_back(present + 1);
      continue;
    }
    int better = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!s[j]) continue;
      if (higher_better ? *s[j] > *s[i] : *s[j] < *s[i]) ++better;
    }
    out.push_back(better + 1);
  }
  return out;
}

// ASCII-only lowercasing; the random metric tests draw from ASCII words.
inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Gold {
  std::vector<std::string> suggestions;

  std::set<std::string> set() const {
    std::set<std::string> out;
    for (const auto& s : suggestions) out.insert(lower(s));
    return out;
  }

  std::set<std::string> top1() const {
    std::map<std::string, int> counts;
    for (const auto& s : suggestions) counts[lower(s)]++;
    int best = 0;
    for (const auto& [w, n] : counts) best = std::max(best, n);
    std::set<std::string> out;
    for (const auto& [w, n] : counts) {
      if (n == best) out.insert(w);
    }
    return out;
  }
};

inline std::vector<std::string> head(const std::vector<std::string>& pred, int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k && i < static_cast<int>(pred.size()); ++i) out.push_back(lower(pred[i]));
  return out;
}

inline double potential(const std::vector<std::string>& pred, const Gold& gold, int k) {
  const auto g = gold.set();
  for (const auto& p : head(pred, k)) {
    if (g.count(p)) return 1.0;
  }
  return 0.0;
}

inline double acc_top1(const std::vector<std::string>& pred, const Gold& gold, int k) {
  const auto t = gold.top1();
  for (const auto& p : head(pred, k)) {
    if (t.count(p)) return 1.0;
  }
  return 0.0;
}

/// (1/K) * sum over i <= K of rel_i * precision@i, precision@i recounted from scratch.
inline double average_precision(const std::vector<std::string>& pred, const Gold& gold, int k) {
  const auto g = gold.set();
  const auto top = head(pred, k);
  double sum = 0.0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!g.count(top[i])) continue;
    int hits = 0;
    for (std::size_t j = 0; j <= i; ++j) hits += g.count(top[j]) ? 1 : 0;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(k);
}

inline double precision(const std::vector<std::string>& pred, const Gold& gold, int k) {
  const auto g = gold.set();
  int hits = 0;
  for (const auto& p : head(pred, k)) hits += g.count(p) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

/// Keep mask: drop scores strictly below the arithmetic mean, tested as
/// n * x < sum. Exact when the inputs are small dyadic fractions.
inline std::vector<bool> prune(const std::vector<double>& eq) {
  double sum = 0;
  for (double x : eq) sum += x;
  std::vector<bool> keep;
  for (double x : eq) keep.push_back(!(static_cast<double>(eq.size()) * x < sum));
  return keep;
}

}  // namespace oracle
