#include <doctest.h>

#include <cmath>
#include <random>

#include "mhv/markov.hpp"
#include "mhv/showcase.hpp"
#include "oracles.hpp"

using namespace mhv;

namespace {

const char kCent = kEndMarker;

TwoPFA acceptAtOnce() {
  TwoPFA a("ab", HeadMode::TwoWay, 0);
  const auto s = a.addState("s", StateKind::Deterministic);
  const auto acc = a.addState("acc", StateKind::Accept);
  a.addTransition(s, kCent, kNullSymbol, acc, 0);
  return a;
}

TwoPFA fairCoin() {
  TwoPFA a("ab", HeadMode::TwoWay, 1);
  const auto s = a.addState("s", StateKind::CoinToss);
  const auto acc = a.addState("acc", StateKind::Accept);
  const auto rej = a.addState("rej", StateKind::Reject);
  a.addTransition(s, kCent, kNullSymbol, 1, acc, 0);
  a.addTransition(s, kCent, kNullSymbol, 0, rej, 0);
  return a;
}

// Bounces between the left end-marker and the first cell forever.
TwoPFA bounceLeft() {
  TwoPFA a("ab", HeadMode::TwoWay, 0);
  const auto s = a.addState("s", StateKind::Deterministic);
  const auto t = a.addState("t", StateKind::Deterministic);
  a.addState("acc", StateKind::Accept);
  a.addTransition(s, kCent, kNullSymbol, t, 1);
  for (char ch : std::string("ab")) a.addTransition(t, ch, kNullSymbol, s, -1);
  return a;
}

}  // namespace

TEST_CASE("absorption") {
  SUBCASE("absorbing start") {
    MarkovChain chain{{{1, 0}, {0, 1}}};
    const auto p = absorption(chain, 0);
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
  }
  SUBCASE("symmetric walk between two absorbers") {
    const Rational h(1, 2);
    MarkovChain chain{{{1, 0, 0}, {h, 0, h}, {0, 0, 1}}};
    const auto p = absorption(chain, 1);
    CHECK(p[0] == h);
    CHECK(p[2] == h);
  }
  SUBCASE("random six-state chains against power iteration") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      const auto chain = oracle::randomChain(rng, 6, 2);
      REQUIRE(chain.rowStochastic());
      const auto exact = absorption(chain, 0);
      const auto approx = oracle::powerIteration(chain, 0, 10000);
      Rational sum = 0;
      for (int s = 0; s < 6; ++s) {
        sum += exact[static_cast<std::size_t>(s)];
        if (chain.isAbsorbing(s)) CHECK(std::abs(exact[static_cast<std::size_t>(s)].get_d() - approx[static_cast<std::size_t>(s)]) < 1e-9);
      }
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("acceptanceProbability2pfa") {
  CHECK(acceptanceProbability2pfa(acceptAtOnce(), "ab") == 1);
  CHECK(acceptanceProbability2pfa(fairCoin(), "ab") == Rational(1, 2));
  CHECK(acceptanceProbability2pfa(bounceLeft(), "ab") == 0);
  SUBCASE("random machines lie inside truncated-enumeration brackets") {
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = oracle::randomTwoPfa(rng, 3, "ab");
      for (const auto& w : oracle::stringsUpTo("ab", 3)) {
        const double exact = acceptanceProbability2pfa(a, w).get_d();
        const auto bracket = oracle::truncatedAcceptance(a, w, 10000);
        INFO("trial " << trial << " w=" << w);
        CHECK(exact >= bracket.lower - 1e-9);
        // Mass still moving after many steps is on a loop and never accepts.
        CHECK(exact <= bracket.upper + 1e-9);
        CHECK(std::abs(exact - bracket.lower) < std::pow(2.0, -20));
      }
    }
  }
  SUBCASE("coin-budgeted silent verifier agrees with outcomeDistribution") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      auto a = oracle::randomTwoPfa(rng, 3, "ab");
      for (const auto& w : oracle::stringsUpTo("ab", 2)) {
        // Budget large enough is fine only when no branch outruns it.
        a.setCoinBudget(6);
        OutcomeDistribution d;
        try {
          d = outcomeDistribution(a, w, {});
        } catch (const CoinBudgetExceeded&) {
          continue;
        }
        CHECK(acceptanceProbability2pfa(a, w) == d.accept);
      }
    }
  }
}

TEST_CASE("split chain") {
  SUBCASE("immediate accept") {
    const auto split = buildSplitChain(acceptAtOnce(), "a", "b");
    CHECK(split.chain.rowStochastic());
    CHECK(absorption(split.chain, split.start())[static_cast<std::size_t>(split.acceptState())] == 1);
  }
  SUBCASE("loop inside the left region") {
    const auto split = buildSplitChain(bounceLeft(), "ab", "a");
    CHECK(absorption(split.chain, split.start())[static_cast<std::size_t>(split.rejectState())] == 1);
  }
  SUBCASE("empty halves are refused") {
    CHECK_THROWS_AS(buildSplitChain(acceptAtOnce(), "", "ab"), std::invalid_argument);
  }
  SUBCASE("absorption into acceptance equals the whole-input probability") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = oracle::randomTwoPfa(rng, 2 + trial % 2, "ab");
      for (const auto& w : oracle::stringsUpTo("ab", 4)) {
        for (std::size_t cut = 1; cut < w.size(); ++cut) {
          const auto split = buildSplitChain(a, w.substr(0, cut), w.substr(cut));
          CHECK(split.chain.size() == 2 * split.c);
          CHECK(split.chain.rowStochastic());
          const auto p = absorption(split.chain, split.start());
          CHECK(p[static_cast<std::size_t>(split.acceptState())] == acceptanceProbability2pfa(a, w));
        }
      }
    }
  }
}

TEST_CASE("nDissimilarity") {
  const auto all = *oracleByName("all");
  const auto even = *oracleByName("even");
  const auto twin = *oracleByName("twin");
  for (int n = 0; n <= 5; ++n) CHECK(nDissimilarity(all, n).value == 1);
  for (int n = 1; n <= 5; ++n) CHECK(nDissimilarity(even, n).value == 2);
  SUBCASE("agrees with backtracking over raw strings") {
    for (int n = 0; n <= 3; ++n) {
      CHECK(nDissimilarity(twin, n).value == oracle::bruteDissimilarity(oracle::isTwin, "abc", n));
      CHECK(nDissimilarity(*oracleByName("nh"), n + 1).value == oracle::bruteDissimilarity(oracle::isNh, "ab", n + 1));
    }
  }
  SUBCASE("report is self-consistent and monotone") {
    int previous = 0;
    for (int n = 0; n <= 6; ++n) {
      const auto report = nDissimilarity(twin, n);
      CHECK(report.value >= previous);
      previous = report.value;
      CHECK(static_cast<int>(report.witnesses.size()) == report.value);
      for (std::size_t i = 0; i < report.witnesses.size(); ++i)
        for (std::size_t j = i + 1; j < report.witnesses.size(); ++j)
          CHECK(oracle::dissimilar(oracle::isTwin, "abc", report.witnesses[i], report.witnesses[j], n));
      for (const auto& d : report.distinctions) {
        const auto& u = report.witnesses[static_cast<std::size_t>(d.first)];
        const auto& w = report.witnesses[static_cast<std::size_t>(d.second)];
        CHECK(static_cast<int>(std::max(u.size(), w.size()) + d.suffix.size()) <= n);
        CHECK(oracle::isTwin(u + d.suffix) != oracle::isTwin(w + d.suffix));
      }
    }
    CHECK(nDissimilarity(twin, 6).value >= 4);
  }
  SUBCASE("regular language stays within its class count") {
    // Strings over {a,b} ending in "ab": three Myhill-Nerode classes.
    LanguageOracle endsAb{"endsab", "ab", [](std::string_view x) { return x.size() >= 2 && x.substr(x.size() - 2) == "ab"; }};
    for (int n = 0; n <= 6; ++n) CHECK(nDissimilarity(endsAb, n).value <= 3);
  }
}
