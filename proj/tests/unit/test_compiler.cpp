#include <doctest.h>

#include "mhv/compiler.hpp"
#include "mhv/showcase.hpp"
#include "oracles.hpp"

using namespace mhv;

TEST_CASE("bitsForHeads and copiesFor") {
  CHECK(bitsForHeads(1) == 0);
  CHECK(bitsForHeads(2) == 1);
  CHECK(bitsForHeads(3) == 2);
  CHECK(bitsForHeads(4) == 2);
  CHECK(copiesFor(1, Rational(1, 4)) == 2);
  CHECK(copiesFor(2, Rational(9, 16)) == 2);
  CHECK(copiesFor(1, Rational(1, 5)) == 3);
}

TEST_CASE("track symbols round-trip") {
  const TrackSymbol step{std::string("a") + kEndMarker, 1, TrackControl::Step};
  CHECK(formatTrackSymbol(step) == "(a,CENT|1|STEP)");
  CHECK(parseTrackSymbol("(a,CENT|1|STEP)") == step);
  const TrackSymbol rewind{"", 0, TrackControl::Rewind};
  CHECK(parseTrackSymbol(formatTrackSymbol(rewind)) == rewind);
  CHECK_FALSE(parseTrackSymbol("garbage"));
}

TEST_CASE("compileWeak on the two-head recognizer") {
  const auto rec = buildTwinRecognizer2Head();
  const auto c = compileWeak(rec, Rational(1, 4));
  CHECK(c.r == 1);
  CHECK(c.m == 2);
  CHECK(c.verifier.coinBudget() == 2);
  CHECK(validate(c.verifier).ok());

  SUBCASE("honest certificate on aca") {
    const auto cert = honestCertificate(c, "aca");
    const auto d = outcomeDistribution(c.verifier, "aca", cert);
    CHECK(d.accept == 1);
    CHECK(d == oracle::distribution(c.verifier, "aca", cert));
  }
  SUBCASE("empty w") {
    const auto cert = honestCertificate(c, "c");
    CHECK(oracle::distribution(c.verifier, "c", cert).accept == 1);
    CHECK(static_cast<int>(cert.size()) <= honestLengthBound(c, 1));
  }
  SUBCASE("non-member") { CHECK_THROWS_AS(honestCertificate(c, "acb"), std::invalid_argument); }
  SUBCASE("honest runs stay within the step bound") {
    for (const auto& x : {"c", "aca", "abcab", "bacba"}) {
      const auto cert = honestCertificate(c, x);
      for (std::uint64_t i = 0; i < 4; ++i) {
        const auto out = runBranch(c.verifier, x, coinString(i, 2), cert);
        CHECK((out.verdict == Verdict::Accept));
        CHECK(out.steps <= honestStepBound(c, static_cast<int>(std::string_view(x).size())));
      }
    }
  }
}

TEST_CASE("compileWeak with three heads aliases surplus outcomes") {
  // Three one-way heads that must all read an a.
  MultiheadAutomaton m("ab", {HeadMode::OneWay, HeadMode::OneWay, HeadMode::OneWay});
  const auto s = m.addState("s");
  const auto t = m.addState("t");
  const auto f = m.addState("f", true);
  const std::string cent(1, kEndMarker);
  m.addTransition(s, cent + cent + cent, t, {1, 1, 1});
  m.addTransition(t, "aaa", f, {0, 0, 0});
  const auto c = compileWeak(m, Rational(9, 16));
  CHECK(c.r == 2);
  CHECK(c.m == 2);
  CHECK(validate(c.verifier).ok());
  CHECK(outcomeDistribution(c.verifier, "a", honestCertificate(c, "a")).accept == 1);
  CHECK(bestCertificate(c.verifier, "b", 8).pAccept <= Rational(9, 16));
}

TEST_CASE("compileStrong on the two-head recognizer") {
  const auto c = compileStrong(buildTwinRecognizer2Head());
  CHECK(c.r == 1);
  CHECK(c.verifier.coinBudget() == 3);
  CHECK(c.epsilon == Rational(3, 8));
  for (const auto& x : {"c", "aca", "abcab"}) {
    const auto d = outcomeDistribution(c.verifier, x, honestCertificate(c, x));
    CHECK(d.accept == Rational(3, 4));
    CHECK(d.nonhalt == 0);
  }
  for (const auto& x : {"ab", "acb", "cc"}) {
    const int bound = honestLengthBound(c, static_cast<int>(std::string_view(x).size()));
    CHECK(bestCertificate(c.verifier, x, bound).pAccept <= Rational(3, 8));
    CHECK(maximiseOutcome(c.verifier, x, bound, Verdict::Nonhalt).pAccept <= Rational(3, 8));
  }
}

TEST_CASE("small soundness sweep matches exhaustive certificates") {
  const auto c = compileWeak(buildTwinRecognizer2Head(), Rational(1, 4));
  // Exhaustive enumeration is only feasible for very short certificates.
  for (const auto& x : {"", "a", "ab"}) {
    CHECK(bestCertificate(c.verifier, x, 2).pAccept == oracle::bruteBest(c.verifier, x, 2));
  }
}
