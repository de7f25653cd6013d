#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mhv/rational.hpp"
#include "mhv/showcase.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

/// A 2pfa is a verifier that never communicates; its coin budget is ignored
/// and every coin-tossing step branches with probability 1/2.
using TwoPFA = VerifierMachine;

struct MarkovChain {
  std::vector<std::vector<Rational>> rows;

  int size() const { return static_cast<int>(rows.size()); }
  bool isAbsorbing(int state) const;
  bool rowStochastic() const;
};

/// Probability of absorption into each state when started at `start`
/// (zero for non-absorbing states). Mass that can never reach an absorbing
/// state is dropped, so the entries sum to 1 exactly when every state reaches
/// some absorbing state.
std::vector<Rational> absorption(const MarkovChain& chain, int start);

/// Exact acceptance probability over the (state, position) chain on ¢w¢.
Rational acceptanceProbability2pfa(const TwoPFA& machine, std::string_view w);

/// The 2c-state boundary chain. State i < c-1 is "nonhalting state i of the
/// normalized machine on the last cell of ¢x"; c-1+i is the same state on the
/// first cell of y¢; 2c-2 collects rejection and loops, 2c-1 is acceptance.
/// Normalized state 0 walks left to the left end-marker and then starts the
/// original machine, so chain state 0 is the start.
struct SplitChain {
  MarkovChain chain;
  int c = 0;
  std::vector<std::string> stateNames;  // names of the c-1 nonhalting normalized states

  int start() const { return 0; }
  int rejectState() const { return 2 * c - 2; }
  int acceptState() const { return 2 * c - 1; }
};

/// Requires |x| >= 1 and |y| >= 1.
SplitChain buildSplitChain(const TwoPFA& machine, std::string_view x, std::string_view y);

/// Row-major fractions, one row per line.
std::string formatChain(const MarkovChain& chain);

struct Distinction {
  int first = 0;   // indices into witnesses
  int second = 0;
  std::string suffix;
};

struct DissimilarityReport {
  int n = 0;
  int value = 0;
  std::vector<std::string> witnesses;
  std::vector<Distinction> distinctions;
};

/// Maximum number of pairwise n-dissimilar strings, by exact clique search
/// over classes of strings with equal length and equal suffix behaviour.
DissimilarityReport nDissimilarity(const LanguageOracle& language, int n);

}  // namespace mhv
