#include <doctest.h>

#include "mhv/io.hpp"
#include "mhv/showcase.hpp"

using namespace mhv;

TEST_CASE("automaton round-trip") {
  const auto m = buildTwinRecognizer2Head();
  const auto text = serialize(m);
  CHECK(parseAutomaton(text) == m);
  CHECK(serialize(parseAutomaton(text)) == text);
}

TEST_CASE("verifier round-trip") {
  for (const auto& v : {buildTwinVerifier(), buildNhVerifier()}) {
    const auto text = serialize(v);
    const auto back = parseVerifier(text);
    CHECK(serialize(back) == text);
    CHECK(back.coinBudget() == 3);
    CHECK(validate(back).ok());
    CHECK(outcomeDistribution(back, "abab", {}) == outcomeDistribution(v, "abab", {}));
  }
}

TEST_CASE("compiled round-trip") {
  const auto c = compileWeak(buildTwinRecognizer2Head(), Rational(1, 4));
  const auto text = serialize(c);
  CHECK(isCompiled(text));
  const auto back = parseCompiled(text);
  CHECK(back.r == 1);
  CHECK(back.m == 2);
  CHECK(back.epsilon == Rational(1, 4));
  CHECK(back.source == c.source);
  CHECK(serialize(back.verifier) == serialize(c.verifier));
  CHECK(honestCertificate(back, "aca") == honestCertificate(c, "aca"));
}

TEST_CASE("parse errors name the line") {
  const std::string text =
      "type 1nfa\nheads 1\nmodes one-way\nalphabet ab\nstates q f\nstart q\naccept f\n"
      "trans q a -> nowhere +1\n";
  try {
    parseAutomaton(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
    CHECK(std::string(e.what()).find("line 8") != std::string::npos);
  }
}

TEST_CASE("comments and blank lines are skipped") {
  const std::string text =
      "# a one-head scanner\n\ntype 1nfa\nheads 1\nmodes one-way\nalphabet ab\n"
      "states q f\nstart q\naccept f\n# accept on b\ntrans q CENT -> q +1\ntrans q b -> f 0\n";
  const auto m = parseAutomaton(text);
  CHECK(accepts(m, "b"));
  CHECK_FALSE(accepts(m, "a"));
}

TEST_CASE("verifier coin budget is read") {
  const std::string text =
      "type verifier\nalphabet ab\nmode two-way\ncoins 3\nstate s D\nstate acc accept\nstart s\n"
      "trans s CENT NULL -> acc 0\n";
  const auto v = parseVerifier(text);
  CHECK(v.coinBudget() == 3);
  CHECK(outcomeDistribution(v, "", {}).accept == 1);
}

TEST_CASE("certificates, tracks and transcripts") {
  const auto v = buildTwinVerifier();
  const auto cert = parseCertificate(v, "a b\na");
  CHECK(cert.size() == 3);
  CHECK(formatCertificate(v, cert) == "a b a");
  CHECK_THROWS_AS(parseCertificate(v, "z"), ParseError);

  MultiTrackCertificate mtc;
  mtc.columns.push_back({TrackEntry::response(*v.findSymbol("a")), TrackEntry::halted(), TrackEntry::looping(),
                         TrackEntry::response(kPadSymbol), TrackEntry::halted(), TrackEntry::halted(),
                         TrackEntry::halted(), TrackEntry::halted()});
  const auto text = formatMultiTrack(v, mtc);
  CHECK(text.find("a;O;INF;PAD") == 0);
  CHECK(parseMultiTrack(v, text) == mtc);

  std::vector<Transcript> transcripts(2);
  transcripts[0].push_back({*v.findSymbol("REQ"), *v.findSymbol("b")});
  CHECK(parseTranscripts(v, formatTranscripts(v, transcripts)) == transcripts);
}
