#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

#include "mhv/markov.hpp"

namespace mhv {

namespace {

// Maximum clique by Bron-Kerbosch with pivoting over a dense adjacency matrix.
class CliqueSearch {
 public:
  explicit CliqueSearch(const std::vector<std::vector<bool>>& adjacent) : adj_(adjacent) {}

  std::vector<int> run() {
    std::vector<int> all(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<int> current;
    expand(current, all, {});
    return best_;
  }

 private:
  void expand(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
    if (p.empty()) {
      if (x.empty() && r.size() > best_.size()) best_ = r;
      return;
    }
    if (r.size() + p.size() <= best_.size()) return;
    int pivot = p.front();
    std::size_t pivotDegree = 0;
    for (const auto* set : {&p, &x}) {
      for (int u : *set) {
        std::size_t d = 0;
        for (int v : p) d += adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ? 1 : 0;
        if (d >= pivotDegree) {
          pivotDegree = d;
          pivot = u;
        }
      }
    }
    const std::vector<int> candidates = p;
    for (int v : candidates) {
      if (adj_[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)]) continue;
      std::vector<int> np;
      std::vector<int> nx;
      for (int u : p) {
        if (adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) np.push_back(u);
      }
      for (int u : x) {
        if (adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) nx.push_back(u);
      }
      r.push_back(v);
      expand(r, std::move(np), std::move(nx));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  const std::vector<std::vector<bool>>& adj_;
  std::vector<int> best_;
};

}  // namespace

DissimilarityReport nDissimilarity(const LanguageOracle& language, int n) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  const auto strings = allStrings(language.alphabet, n);
  // suffixes in shortlex order; those of length <= b form a prefix of this list
  const auto& suffixes = strings;
  std::vector<std::size_t> upTo(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < suffixes.size(); ++i) upTo[suffixes[i].size()] = i + 1;

  // One representative per (length, behaviour on every allowed suffix).
  struct Class {
    std::string representative;
    std::vector<bool> profile;
  };
  std::vector<Class> classes;
  std::map<std::pair<std::size_t, std::vector<bool>>, std::size_t> seen;
  for (const auto& w : strings) {
    const std::size_t allowed = upTo[static_cast<std::size_t>(n) - w.size()];
    std::vector<bool> profile(allowed);
    for (std::size_t v = 0; v < allowed; ++v) profile[v] = language.contains(w + suffixes[v]);
    if (seen.try_emplace({w.size(), profile}, classes.size()).second) classes.push_back({w, std::move(profile)});
  }

  auto distinguisher = [&](const Class& a, const Class& b) -> std::optional<std::size_t> {
    const std::size_t limit = std::min(a.profile.size(), b.profile.size());
    for (std::size_t v = 0; v < limit; ++v) {
      if (a.profile[v] != b.profile[v]) return v;
    }
    return std::nullopt;
  };

  std::vector<std::vector<bool>> adjacent(classes.size(), std::vector<bool>(classes.size()));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      adjacent[i][j] = adjacent[j][i] = distinguisher(classes[i], classes[j]).has_value();
    }
  }
  auto clique = CliqueSearch(adjacent).run();
  std::sort(clique.begin(), clique.end());

  DissimilarityReport report;
  report.n = n;
  report.value = static_cast<int>(clique.size());
  for (int c : clique) report.witnesses.push_back(classes[static_cast<std::size_t>(c)].representative);
  for (std::size_t i = 0; i < clique.size(); ++i) {
    for (std::size_t j = i + 1; j < clique.size(); ++j) {
      const auto v = distinguisher(classes[static_cast<std::size_t>(clique[i])], classes[static_cast<std::size_t>(clique[j])]);
      report.distinctions.push_back({static_cast<int>(i), static_cast<int>(j), suffixes[*v]});
    }
  }
  return report;
}

}  // namespace mhv
