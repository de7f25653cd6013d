#include <doctest.h>

#include "mhv/io.hpp"
#include "mhv/showcase.hpp"
#include "oracles.hpp"

using namespace mhv;

namespace {

Certificate spelled(const VerifierMachine& v, std::string_view word) {
  Certificate c;
  for (char ch : word) c.symbols.push_back(*v.findSymbol(std::string(1, ch)));
  return c;
}

void checkRealTime(const VerifierMachine& v) {
  CHECK((v.inputMode() == HeadMode::RealTime));
  for (const auto& [key, t] : v.transitions()) CHECK(t.move == 1);
  CHECK(validate(v).ok());
}

}  // namespace

TEST_CASE("language oracles") {
  CHECK(twinOracle("c"));
  CHECK(twinOracle("abcab"));
  CHECK_FALSE(twinOracle("abcba"));
  CHECK(nhOracle("abab"));
  CHECK(nhOracle("aababab"));
  CHECK_FALSE(nhOracle("aabab"));
  CHECK_FALSE(nhOracle("aabbab"));
  for (const auto& x : oracle::stringsUpTo("abc", 7)) CHECK(twinOracle(x) == oracle::isTwin(x));
  for (const auto& x : oracle::stringsUpTo("ab", 9)) CHECK(nhOracle(x) == oracle::isNh(x));
  CHECK_FALSE(oracleByName("nope"));
  CHECK(oracleByName("even")->contains("ab"));
}

TEST_CASE("TWIN verifier") {
  const auto v = buildTwinVerifier();
  checkRealTime(v);
  CHECK(v.coinBudget() == 3);
  CHECK(outcomeDistribution(v, "aca", spelled(v, "a")).accept == Rational(3, 4));
  CHECK(bestCertificate(v, "acb", 3).pAccept <= Rational(3, 8));
  CHECK(bestCertificate(v, "aa", 3).pAccept <= Rational(3, 8));
  CHECK(oracle::bruteBest(v, "aa", 3) <= Rational(3, 8));
}

TEST_CASE("TWIN verifier: members exactly 3/4, non-members at most 3/8") {
  const auto v = buildTwinVerifier();
  for (const auto& x : oracle::stringsUpTo("abc", 9)) {
    if (!oracle::isTwin(x)) continue;
    const auto w = x.substr(0, x.size() / 2);
    INFO("x=" << x);
    CHECK(outcomeDistribution(v, x, spelled(v, w)).accept == Rational(3, 4));
  }
  for (const auto& x : oracle::stringsUpTo("abc", 5)) {
    if (oracle::isTwin(x)) continue;
    INFO("x=" << x);
    CHECK(bestCertificate(v, x, static_cast<int>(x.size()) + 1).pAccept <= Rational(3, 8));
  }
}

TEST_CASE("NH verifier") {
  const auto v = buildNhVerifier();
  checkRealTime(v);
  const auto hash = *v.findSymbol("#");
  auto cert = [&](int s) {
    Certificate c = spelled(v, std::string(static_cast<std::size_t>(s), 'a'));
    c.symbols.push_back(hash);
    return c;
  };
  CHECK(outcomeDistribution(v, "abab", cert(1)).accept == Rational(3, 4));
  CHECK(oracle::distribution(v, "abab", cert(1)).accept == Rational(3, 4));
  CHECK(outcomeDistribution(v, "abab", cert(2)).accept <= Rational(3, 8));

  for (const auto& x : oracle::stringsUpTo("ab", 9)) {
    if (!oracle::isNh(x)) continue;
    const int s = static_cast<int>(x.find('b'));
    INFO("x=" << x);
    CHECK(outcomeDistribution(v, x, cert(s)).accept == Rational(3, 4));
  }
  for (const auto& x : oracle::stringsUpTo("ab", 6)) {
    if (oracle::isNh(x)) continue;
    INFO("x=" << x);
    CHECK(bestCertificate(v, x, static_cast<int>(x.size()) + 2).pAccept <= Rational(3, 8));
  }
}

TEST_CASE("two-head TWIN recognizer") {
  const auto m = buildTwinRecognizer2Head();
  CHECK(m.isDeterministic());
  CHECK(accepts(m, "abcab"));
  CHECK_FALSE(accepts(m, "cc"));
  std::set<std::string> expected;
  for (const auto& x : oracle::stringsUpTo("abc", 5))
    if (oracle::isTwin(x)) expected.insert(x);
  CHECK(enumerateLanguage(m, 5) == expected);
}
