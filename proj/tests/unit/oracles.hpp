#pragma once

// Reference implementations used to check the library. Each one is written
// from the definitions, not from the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mhv/automaton.hpp"
#include "mhv/markov.hpp"
#include "mhv/rational.hpp"
#include "mhv/verifier.hpp"

namespace oracle {

using mhv::Rational;

inline bool isTwin(std::string_view x) {
  if (x.size() % 2 == 0) return false;
  const std::size_t h = x.size() / 2;
  if (x[h] != 'c') return false;
  for (std::size_t i = 0; i < h; ++i) {
    if (x[i] == 'c' || x[i] != x[h + 1 + i]) return false;
  }
  return true;
}

// a^s b a^y1 b ... a^yt b, all exponents positive, some prefix sum of the y's equals s.
inline bool isNh(std::string_view x) {
  std::vector<int> runs;
  int run = 0;
  for (char ch : x) {
    if (ch == 'a') {
      ++run;
    } else if (ch == 'b') {
      if (run == 0) return false;
      runs.push_back(run);
      run = 0;
    } else {
      return false;
    }
  }
  if (run != 0 || runs.size() < 2) return false;
  int sum = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    sum += runs[i];
    if (sum == runs[0]) return true;
  }
  return false;
}

inline std::vector<std::string> stringsUpTo(const std::string& alphabet, int maxLength) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (int len = 1; len <= maxLength; ++len) {
    std::vector<std::string> next;
    for (const auto& s : layer)
      for (char ch : alphabet) next.push_back(s + ch);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline char cell(std::string_view x, int pos) {
  return (pos <= 0 || pos > static_cast<int>(x.size())) ? mhv::kEndMarker : x[static_cast<std::size_t>(pos - 1)];
}

inline int clampPos(std::string_view x, int pos) { return std::clamp(pos, 0, static_cast<int>(x.size()) + 1); }

// Run-tree expansion: a branch may take at most `cap` steps.
inline bool runTreeAccepts(const mhv::MultiheadAutomaton& m, std::string_view x, std::uint64_t cap) {
  std::map<std::pair<int, std::vector<int>>, std::uint64_t> failedWithBudget;
  std::function<bool(int, std::vector<int>, std::uint64_t)> go = [&](int q, std::vector<int> heads,
                                                                     std::uint64_t budget) -> bool {
    if (m.isAccepting(q)) return true;
    if (budget == 0) return false;
    auto key = std::make_pair(q, heads);
    auto seen = failedWithBudget.find(key);
    if (seen != failedWithBudget.end() && seen->second >= budget) return false;
    std::string scanned;
    for (int h : heads) scanned += cell(x, h);
    for (const auto& t : m.transitionsFrom(q)) {
      bool match = true;
      for (std::size_t i = 0; i < scanned.size(); ++i)
        if (t.pattern[i] != mhv::kAnySymbol && t.pattern[i] != scanned[i]) match = false;
      if (!match) continue;
      std::vector<int> next = heads;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = clampPos(x, next[i] + t.moves[i]);
      if (go(t.next, next, budget - 1)) return true;
    }
    failedWithBudget[key] = std::max(failedWithBudget[key], budget);
    return false;
  };
  return go(m.start(), std::vector<int>(static_cast<std::size_t>(m.headCount()), 0), cap);
}

// Longest branch of a machine whose every branch is expected to halt; returns
// cap+1 if some branch survives cap steps.
inline std::uint64_t longestBranch(const mhv::MultiheadAutomaton& m, std::string_view x, std::uint64_t cap) {
  std::map<std::pair<int, std::vector<int>>, std::uint64_t> memo;
  std::set<std::pair<int, std::vector<int>>> onStack;
  std::function<std::uint64_t(int, const std::vector<int>&)> depth = [&](int q, const std::vector<int>& heads) {
    if (m.isAccepting(q)) return std::uint64_t{0};
    auto key = std::make_pair(q, heads);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (onStack.count(key)) return cap + 1;
    onStack.insert(key);
    std::string scanned;
    for (int h : heads) scanned += cell(x, h);
    std::uint64_t best = 0;
    for (const auto& t : m.transitionsFrom(q)) {
      bool match = true;
      for (std::size_t i = 0; i < scanned.size(); ++i)
        if (t.pattern[i] != mhv::kAnySymbol && t.pattern[i] != scanned[i]) match = false;
      if (!match) continue;
      std::vector<int> next = heads;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = clampPos(x, next[i] + t.moves[i]);
      best = std::max(best, std::min(cap + 1, 1 + depth(t.next, next)));
    }
    onStack.erase(key);
    memo[key] = best;
    return best;
  };
  return depth(m.start(), std::vector<int>(static_cast<std::size_t>(m.headCount()), 0));
}

// Step-by-step branch simulation; a branch outliving the configuration count is nonhalting.
inline mhv::Verdict simulateBranch(const mhv::VerifierMachine& v, std::string_view x, std::uint64_t coinIndex,
                                   const mhv::Certificate& cert) {
  const int B = v.coinBudget();
  const std::uint64_t cap = static_cast<std::uint64_t>(v.stateCount()) * (x.size() + 2) * (cert.size() + 1) *
                            static_cast<std::uint64_t>(B + 1) + 1;
  int q = v.start();
  int pos = 0;
  int used = 0;
  std::size_t certPos = 0;
  for (std::uint64_t step = 0; step <= cap; ++step) {
    if (v.kind(q) == mhv::StateKind::Accept) return mhv::Verdict::Accept;
    if (v.kind(q) == mhv::StateKind::Reject) return mhv::Verdict::Reject;
    int bit = -1;
    if (v.kind(q) == mhv::StateKind::CoinToss) {
      if (used >= B) throw mhv::CoinBudgetExceeded("oracle: budget");
      bit = static_cast<int>((coinIndex >> (B - 1 - used)) & 1U);
      ++used;
    }
    mhv::SymbolId response = mhv::kNullSymbol;
    if (v.communicates(q)) response = certPos < cert.size() ? cert.symbols[certPos++] : mhv::kPadSymbol;
    const auto* t = v.transition(q, cell(x, pos), response, bit);
    if (t == nullptr) return mhv::Verdict::Reject;
    q = t->next;
    pos = clampPos(x, pos + t->move);
  }
  return mhv::Verdict::Nonhalt;
}

inline mhv::OutcomeDistribution distribution(const mhv::VerifierMachine& v, std::string_view x,
                                             const mhv::Certificate& cert) {
  const std::uint64_t total = std::uint64_t{1} << v.coinBudget();
  std::uint64_t counts[3] = {0, 0, 0};
  for (std::uint64_t i = 0; i < total; ++i) ++counts[static_cast<int>(simulateBranch(v, x, i, cert))];
  auto frac = [&](std::uint64_t c) {
    Rational r(static_cast<unsigned long>(c), static_cast<unsigned long>(total));
    r.canonicalize();
    return r;
  };
  return {frac(counts[0]), frac(counts[1]), frac(counts[2])};
}

// Every certificate over tokens 2.. (NULL and PAD excluded) up to maxLength.
inline Rational bruteBest(const mhv::VerifierMachine& v, std::string_view x, int maxLength,
                          mhv::Verdict target = mhv::Verdict::Accept) {
  Rational best = 0;
  std::vector<mhv::SymbolId> symbols;
  for (int s = 2; s < v.symbolCount(); ++s) symbols.push_back(s);
  std::function<void(mhv::Certificate&)> go = [&](mhv::Certificate& cert) {
    const auto d = distribution(v, x, cert);
    const Rational& value = target == mhv::Verdict::Accept ? d.accept
                            : target == mhv::Verdict::Reject ? d.reject
                                                             : d.nonhalt;
    if (value > best) best = value;
    if (static_cast<int>(cert.size()) == maxLength) return;
    for (auto s : symbols) {
      cert.symbols.push_back(s);
      go(cert);
      cert.symbols.pop_back();
    }
  };
  mhv::Certificate cert;
  go(cert);
  return best;
}

struct Bracket {
  double lower = 0;
  double upper = 1;
};

// Mass propagation over (state, position) for a fixed number of steps.
inline Bracket truncatedAcceptance(const mhv::TwoPFA& a, std::string_view x, int steps) {
  std::map<std::pair<int, int>, double> mass{{{a.start(), 0}, 1.0}};
  double accepted = 0;
  for (int s = 0; s < steps && !mass.empty(); ++s) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [config, p] : mass) {
      const auto [q, pos] = config;
      if (a.kind(q) == mhv::StateKind::Accept) {
        accepted += p;
        continue;
      }
      if (a.kind(q) == mhv::StateKind::Reject) continue;
      const bool coin = a.kind(q) == mhv::StateKind::CoinToss;
      for (int bit : coin ? std::vector<int>{0, 1} : std::vector<int>{-1}) {
        const auto* t = a.transition(q, cell(x, pos), mhv::kNullSymbol, bit);
        if (t == nullptr) continue;
        next[{t->next, clampPos(x, pos + t->move)}] += coin ? p / 2 : p;
      }
    }
    mass = std::move(next);
  }
  double pending = 0;
  for (const auto& [config, p] : mass) {
    if (a.kind(config.first) == mhv::StateKind::Accept) accepted += p;
    else if (a.kind(config.first) != mhv::StateKind::Reject) pending += p;
  }
  return {accepted, accepted + pending};
}

inline std::vector<double> powerIteration(const mhv::MarkovChain& chain, int start, int steps) {
  std::vector<double> dist(static_cast<std::size_t>(chain.size()), 0.0);
  dist[static_cast<std::size_t>(start)] = 1.0;
  for (int s = 0; s < steps; ++s) {
    std::vector<double> next(dist.size(), 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i)
      for (std::size_t j = 0; j < dist.size(); ++j) next[j] += dist[i] * chain.rows[i][j].get_d();
    dist = std::move(next);
  }
  return dist;
}

inline bool dissimilar(const std::function<bool(std::string_view)>& in, const std::string& alphabet,
                       const std::string& w, const std::string& u, int n) {
  const int room = n - static_cast<int>(std::max(w.size(), u.size()));
  if (room < 0) return false;
  for (const auto& v : stringsUpTo(alphabet, room))
    if (in(w + v) != in(u + v)) return true;
  return false;
}

// Plain backtracking maximum clique over all strings of length <= n.
inline int bruteDissimilarity(const std::function<bool(std::string_view)>& in, const std::string& alphabet, int n) {
  const auto words = stringsUpTo(alphabet, n);
  const std::size_t size = words.size();
  std::vector<std::vector<bool>> adj(size, std::vector<bool>(size, false));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) adj[i][j] = adj[j][i] = dissimilar(in, alphabet, words[i], words[j], n);
  int best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    best = std::max(best, static_cast<int>(chosen.size()));
    for (std::size_t i = from; i < size; ++i) {
      if (chosen.size() + (size - i) <= static_cast<std::size_t>(best)) return;
      bool ok = true;
      for (auto c : chosen) ok = ok && adj[c][i];
      if (!ok) continue;
      chosen.push_back(i);
      extend(i + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  return best;
}

inline mhv::MultiheadAutomaton randomOneHead(std::mt19937& rng, int states, const std::string& alphabet) {
  mhv::MultiheadAutomaton m(alphabet, {mhv::HeadMode::TwoWay});
  std::uniform_int_distribution<int> pick(0, states - 1);
  std::uniform_int_distribution<int> move(-1, 1);
  std::uniform_int_distribution<int> fanout(0, 2);
  for (int q = 0; q < states; ++q) m.addState("q" + std::to_string(q), q == states - 1);
  const std::string symbols = alphabet + mhv::kEndMarker;
  for (int q = 0; q < states - 1; ++q) {
    for (char s : symbols) {
      const int count = fanout(rng);
      for (int c = 0; c < count; ++c) {
        const int target = pick(rng);
        int mv = move(rng);
        if (s == mhv::kEndMarker) mv = 0;
        m.addTransition(q, std::string(1, s), target, {mv});
      }
    }
  }
  m.setStart(0);
  return m;
}

// A random 2pfa with `states` working states plus accept and reject; end-marker
// moves are redrawn until the machine validates.
inline mhv::TwoPFA randomTwoPfa(std::mt19937& rng, int states, const std::string& alphabet) {
  std::uniform_int_distribution<int> target(0, states + 1);
  std::uniform_int_distribution<int> move(-1, 1);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> missing(0, 9);
  for (;;) {
    mhv::TwoPFA a(alphabet, mhv::HeadMode::TwoWay, 0);
    std::vector<bool> tosses;
    for (int q = 0; q < states; ++q) {
      tosses.push_back(coin(rng) == 0);
      a.addState("s" + std::to_string(q), tosses.back() ? mhv::StateKind::CoinToss : mhv::StateKind::Deterministic);
    }
    a.addState("acc", mhv::StateKind::Accept);
    a.addState("rej", mhv::StateKind::Reject);
    const std::string symbols = alphabet + mhv::kEndMarker;
    for (int q = 0; q < states; ++q) {
      for (char s : symbols) {
        for (int bit : tosses[static_cast<std::size_t>(q)] ? std::vector<int>{0, 1} : std::vector<int>{-1}) {
          if (missing(rng) == 0) continue;
          a.addTransition(q, s, mhv::kNullSymbol, bit, target(rng), move(rng));
        }
      }
    }
    a.setCoinBudget(62);
    a.setStart(0);
    if (mhv::validate(a).ok()) return a;
  }
}

inline mhv::MarkovChain randomChain(std::mt19937& rng, int size, int absorbing) {
  std::uniform_int_distribution<int> weight(0, 3);
  mhv::MarkovChain chain;
  chain.rows.assign(static_cast<std::size_t>(size), std::vector<Rational>(static_cast<std::size_t>(size), 0));
  for (int i = 0; i < size; ++i) {
    if (i >= size - absorbing) {
      chain.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
      continue;
    }
    std::vector<int> w(static_cast<std::size_t>(size));
    int total = 0;
    for (auto& x : w) total += (x = weight(rng));
    w[static_cast<std::size_t>(size - 1)] += 1;
    ++total;
    for (int j = 0; j < size; ++j) {
      Rational r(w[static_cast<std::size_t>(j)], total);
      r.canonicalize();
      chain.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r;
    }
  }
  return chain;
}

}  // namespace oracle
