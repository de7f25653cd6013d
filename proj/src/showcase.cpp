#include "mhv/showcase.hpp"

#include <map>
#include <tuple>

namespace mhv {

bool twinOracle(std::string_view x) {
  if (x.size() % 2 == 0) return false;
  const std::size_t mid = x.size() / 2;
  if (x[mid] != 'c') return false;
  for (std::size_t i = 0; i < mid; ++i) {
    if (x[i] != 'a' && x[i] != 'b') return false;
    if (x[i] != x[mid + 1 + i]) return false;
  }
  return true;
}

bool nhOracle(std::string_view x) {
  std::vector<std::size_t> blocks;
  std::size_t run = 0;
  for (char c : x) {
    if (c == 'a') {
      ++run;
    } else if (c == 'b') {
      if (run == 0) return false;
      blocks.push_back(run);
      run = 0;
    } else {
      return false;
    }
  }
  if (run != 0 || blocks.size() < 2) return false;
  std::size_t sum = 0;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    sum += blocks[i];
    if (sum == blocks[0]) return true;
  }
  return false;
}

std::optional<LanguageOracle> oracleByName(std::string_view name) {
  if (name == "twin") return LanguageOracle{"twin", "abc", twinOracle};
  if (name == "nh") return LanguageOracle{"nh", "ab", nhOracle};
  if (name == "even") return LanguageOracle{"even", "ab", [](std::string_view x) { return x.size() % 2 == 0; }};
  if (name == "all") return LanguageOracle{"all", "ab", [](std::string_view) { return true; }};
  return std::nullopt;
}

namespace {

constexpr int kAcceptTarget = -1;

// Two-branch real-time verifier skeleton. Each branch is a table of phases;
// the skeleton adds the branch coin on the left end-marker and the two
// rejection-gadget coins on cells 1 and 2.
class SplitBuilder {
 public:
  explicit SplitBuilder(std::string alphabet) : verifier_(std::move(alphabet), HeadMode::RealTime, 3) {
    request_ = verifier_.addSymbol("REQ");
  }

  SymbolId token(std::string name) { return verifier_.addSymbol(std::move(name)); }
  SymbolId request() const { return request_; }

  int phase(std::string name, bool communicates) {
    phases_.push_back({std::move(name), communicates});
    return static_cast<int>(phases_.size() - 1);
  }

  /// For non-communicating phases the response is always NULL.
  void rule(int from, char input, SymbolId response, int target) {
    rules_[{from, input, response}] = target;
  }
  void rule(int from, std::string_view inputs, SymbolId response, int target) {
    for (char c : inputs) rule(from, c, response, target);
  }

  VerifierMachine build(int firstBranch, int secondBranch) {
    accept_ = verifier_.addState("accept", StateKind::Accept);
    reject_ = verifier_.addState("reject", StateKind::Reject);
    const StateId split = verifier_.addState("split", StateKind::CoinToss);
    verifier_.setStart(split);
    verifier_.addTransition(split, kEndMarker, kNullSymbol, 0, state(firstBranch, 0, false), 1);
    verifier_.addTransition(split, kEndMarker, kNullSymbol, 1, state(secondBranch, 0, false), 1);
    return std::move(verifier_);
  }

 private:
  StateId state(int p, int tossed, bool anyOne) {
    if (tossed != 1) anyOne = false;
    const auto key = std::make_tuple(p, tossed, anyOne);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    std::string name = phases_[static_cast<std::size_t>(p)].name;
    if (tossed < 2) name += "." + std::to_string(tossed) + (anyOne ? "+" : "");
    const StateKind kind = tossed < 2 ? StateKind::CoinToss : StateKind::Deterministic;
    const StateId id =
        verifier_.addState(std::move(name), kind, phases_[static_cast<std::size_t>(p)].comm ? request_ : kNullSymbol);
    ids_.emplace(key, id);
    for (const auto& [ruleKey, target] : rules_) {
      const auto& [from, input, response] = ruleKey;
      if (from != p) continue;
      if (tossed == 2) {
        verifier_.addTransition(id, input, response, -1, next(target, 2, false), 1);
        continue;
      }
      for (int bit = 0; bit < 2; ++bit) {
        const bool seen = anyOne || bit == 1;
        const StateId to = tossed + 1 == 2 && !seen ? reject_ : next(target, tossed + 1, seen);
        verifier_.addTransition(id, input, response, bit, to, 1);
      }
    }
    return id;
  }

  StateId next(int target, int tossed, bool anyOne) {
    if (target != kAcceptTarget) return state(target, tossed, anyOne);
    return tossed == 2 ? accept_ : reject_;
  }

  struct Phase {
    std::string name;
    bool comm;
  };

  VerifierMachine verifier_;
  SymbolId request_;
  std::vector<Phase> phases_;
  std::map<std::tuple<int, char, SymbolId>, int> rules_;
  std::map<std::tuple<int, int, bool>, StateId> ids_;
  StateId accept_ = 0;
  StateId reject_ = 0;
};

}  // namespace

VerifierMachine buildTwinVerifier() {
  SplitBuilder b("abc");
  const SymbolId a = b.token("a");
  const SymbolId bb = b.token("b");

  const int prefix = b.phase("prefix", true);
  const int tail = b.phase("tail", false);
  b.rule(prefix, 'a', a, prefix);
  b.rule(prefix, 'b', bb, prefix);
  b.rule(prefix, 'c', kPadSymbol, tail);
  b.rule(tail, "ab", kNullSymbol, tail);
  b.rule(tail, kEndMarker, kNullSymbol, kAcceptTarget);

  const int seek = b.phase("seek", false);
  const int suffix = b.phase("suffix", true);
  b.rule(seek, "ab", kNullSymbol, seek);
  b.rule(seek, 'c', kNullSymbol, suffix);
  b.rule(suffix, 'a', a, suffix);
  b.rule(suffix, 'b', bb, suffix);
  b.rule(suffix, kEndMarker, kPadSymbol, kAcceptTarget);

  return b.build(prefix, seek);
}

VerifierMachine buildNhVerifier() {
  SplitBuilder b("ab");
  const SymbolId a = b.token("a");
  const SymbolId hash = b.token("#");

  // Branch 1: certificate a^s # against the leading block, then (a+b)+.
  const int lead0 = b.phase("lead0", true);
  const int lead = b.phase("lead", true);
  const int blockStart = b.phase("block", false);
  const int inBlock = b.phase("inblock", false);
  const int blockEnd = b.phase("blockend", false);
  b.rule(lead0, 'a', a, lead);
  b.rule(lead, 'a', a, lead);
  b.rule(lead, 'b', hash, blockStart);
  b.rule(blockStart, 'a', kNullSymbol, inBlock);
  b.rule(inBlock, 'a', kNullSymbol, inBlock);
  b.rule(inBlock, 'b', kNullSymbol, blockEnd);
  b.rule(blockEnd, 'a', kNullSymbol, inBlock);
  b.rule(blockEnd, kEndMarker, kNullSymbol, kAcceptTarget);

  // Branch 2: one certificate a per block a; at a b the response is either #
  // (done) or the a for the first cell of the next block.
  const int skip0 = b.phase("skip0", false);
  const int skip = b.phase("skip", false);
  const int fresh = b.phase("fresh", true);
  const int count = b.phase("count", true);
  const int primed = b.phase("primed", false);
  const int done = b.phase("done", false);
  const int doneInBlock = b.phase("donein", false);
  b.rule(skip0, 'a', kNullSymbol, skip);
  b.rule(skip, 'a', kNullSymbol, skip);
  b.rule(skip, 'b', kNullSymbol, fresh);
  b.rule(fresh, 'a', a, count);
  b.rule(count, 'a', a, count);
  b.rule(count, 'b', hash, done);
  b.rule(count, 'b', a, primed);
  b.rule(primed, 'a', kNullSymbol, count);
  b.rule(done, 'a', kNullSymbol, doneInBlock);
  b.rule(done, kEndMarker, kNullSymbol, kAcceptTarget);
  b.rule(doneInBlock, 'a', kNullSymbol, doneInBlock);
  b.rule(doneInBlock, 'b', kNullSymbol, done);

  return b.build(lead0, skip0);
}

MultiheadAutomaton buildTwinRecognizer2Head() {
  MultiheadAutomaton m("abc", {HeadMode::OneWay, HeadMode::OneWay});
  const StateId start = m.addState("start");
  const StateId seek = m.addState("seek");
  const StateId compare = m.addState("cmp");
  const StateId accept = m.addState("acc", true);
  m.setStart(start);
  const std::string cent(1, kEndMarker);
  m.addTransition(start, cent + cent, seek, {1, 1});
  m.addTransition(seek, "*a", seek, {0, 1});
  m.addTransition(seek, "*b", seek, {0, 1});
  m.addTransition(seek, "*c", compare, {0, 1});
  m.addTransition(compare, "aa", compare, {1, 1});
  m.addTransition(compare, "bb", compare, {1, 1});
  m.addTransition(compare, "c" + cent, accept, {0, 0});
  return m;
}

}  // namespace mhv
