#include "mhv/verifier.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <tuple>

namespace mhv {

std::string_view toString(StateKind kind) {
  switch (kind) {
    case StateKind::Deterministic: return "D";
    case StateKind::CoinToss: return "R";
    case StateKind::Accept: return "accept";
    case StateKind::Reject: return "reject";
  }
  return "?";
}

std::string_view toString(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    case Verdict::Nonhalt: return "nonhalt";
  }
  return "?";
}

VerifierMachine::VerifierMachine() : VerifierMachine("", HeadMode::TwoWay, 0) {}

VerifierMachine::VerifierMachine(std::string alphabet, HeadMode inputMode, int coinBudget)
    : alphabet_(std::move(alphabet)), inputMode_(inputMode), coinBudget_(coinBudget) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  symbols_ = {"NULL", "PAD"};
}

SymbolId VerifierMachine::addSymbol(std::string token) {
  if (auto existing = findSymbol(token)) return *existing;
  symbols_.push_back(std::move(token));
  return static_cast<SymbolId>(symbols_.size() - 1);
}

std::optional<SymbolId> VerifierMachine::findSymbol(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == token) return static_cast<SymbolId>(i);
  }
  return std::nullopt;
}

StateId VerifierMachine::addState(std::string name, StateKind kind, SymbolId comm) {
  states_.push_back(StateInfo{std::move(name), kind, comm});
  return static_cast<StateId>(states_.size() - 1);
}

void VerifierMachine::addTransition(StateId from, char input, SymbolId response, int bit, StateId to,
                                    int move) {
  if (from >= 0 && from < stateCount() && kind(from) != StateKind::CoinToss) bit = -1;
  transitions_[VerifierTransitionKey{from, input, response, bit}] = VerifierTransition{to, move};
}

bool VerifierMachine::inAlphabet(char symbol) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), symbol);
}

std::optional<StateId> VerifierMachine::findState(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].name == name) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

std::optional<StateId> VerifierMachine::acceptState() const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].kind == StateKind::Accept) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

std::optional<StateId> VerifierMachine::rejectState() const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].kind == StateKind::Reject) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

const VerifierTransition* VerifierMachine::transition(StateId state, char input, SymbolId response,
                                                      int bit) const {
  if (kind(state) != StateKind::CoinToss) bit = -1;
  auto it = transitions_.find(VerifierTransitionKey{state, input, response, bit});
  return it == transitions_.end() ? nullptr : &it->second;
}

bool VerifierMachine::hasCommunication() const {
  return std::any_of(states_.begin(), states_.end(), [](const StateInfo& s) { return s.comm != kNullSymbol; });
}

ValidationReport validate(const VerifierMachine& v) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string message) {
    report.violations.push_back(Violation{kind, std::move(message)});
  };
  if (v.stateCount() == 0) {
    add(ViolationKind::Structure, "verifier has no states");
    return report;
  }
  if (v.start() < 0 || v.start() >= v.stateCount()) {
    add(ViolationKind::UndeclaredState, "start state is not declared");
    return report;
  }
  if (v.coinBudget() < 0 || v.coinBudget() > 62) add(ViolationKind::Structure, "coin budget out of range");
  int accepts = 0;
  int rejects = 0;
  for (StateId s = 0; s < v.stateCount(); ++s) {
    if (v.kind(s) == StateKind::Accept) ++accepts;
    if (v.kind(s) == StateKind::Reject) ++rejects;
    if (v.commSymbol(s) < 0 || v.commSymbol(s) >= v.symbolCount()) {
      add(ViolationKind::UndeclaredSymbol, "state " + v.stateName(s) + " sends an undeclared symbol");
    } else if (v.isHalting(s) && v.communicates(s)) {
      add(ViolationKind::Structure, "halting state " + v.stateName(s) + " communicates");
    }
  }
  if (accepts > 1) add(ViolationKind::Structure, "more than one accept state");
  if (rejects > 1) add(ViolationKind::Structure, "more than one reject state");

  bool sound = report.ok();
  for (const auto& [key, t] : v.transitions()) {
    if (key.state < 0 || key.state >= v.stateCount() || t.next < 0 || t.next >= v.stateCount()) {
      add(ViolationKind::UndeclaredState, "transition references an undeclared state");
      sound = false;
      continue;
    }
    const std::string where = v.stateName(key.state) + " -> " + v.stateName(t.next);
    if (v.isHalting(key.state)) add(ViolationKind::Structure, "halting state has a transition: " + where);
    if (key.input != kEndMarker && !v.inAlphabet(key.input)) {
      add(ViolationKind::UndeclaredSymbol, where + ": input symbol is not in the alphabet");
    }
    if (key.response < 0 || key.response >= v.symbolCount()) {
      add(ViolationKind::UndeclaredSymbol, where + ": response symbol is not declared");
    }
    if (v.kind(key.state) == StateKind::CoinToss ? (key.bit != 0 && key.bit != 1) : key.bit != -1) {
      add(ViolationKind::Structure, where + ": coin bit does not match the state kind");
    }
    if (!moveAllowed(v.inputMode(), t.move)) {
      add(ViolationKind::Mode, where + ": move " + std::to_string(t.move) + " violates " +
                                   std::string(toString(v.inputMode())) + " mode");
    }
  }
  if (!sound || !report.ok()) return report;

  // Abstract (state, side) reachability: 0 = left marker, 1 = interior, 2 = right marker.
  const bool hasInterior = !v.alphabet().empty();
  std::vector<std::array<bool, 3>> seen(static_cast<std::size_t>(v.stateCount()), {false, false, false});
  std::deque<std::pair<StateId, int>> work{{v.start(), 0}};
  seen[static_cast<std::size_t>(v.start())][0] = true;
  std::set<VerifierTransitionKey> reported;
  while (!work.empty()) {
    auto [s, side] = work.front();
    work.pop_front();
    if (v.isHalting(s)) continue;
    for (auto it = v.transitions().lower_bound(VerifierTransitionKey{s, '\0', -1, -2});
         it != v.transitions().end() && it->first.state == s; ++it) {
      const auto& [key, t] = *it;
      const bool marker = key.input == kEndMarker;
      if ((side == 1) == marker) continue;
      const bool escapes = (side == 0 && t.move == -1) || (side == 2 && t.move == 1);
      if (escapes) {
        if (!v.isHalting(t.next) && reported.insert(key).second) {
          add(ViolationKind::EndMarkerEscape, v.stateName(s) + " -> " + v.stateName(t.next) +
                                                  ": input head leaves the tape");
        }
        continue;
      }
      std::vector<int> nextSides;
      if (t.move == 0) nextSides = {side};
      else if (t.move == 1) nextSides = {1, 2};
      else nextSides = {1, 0};
      for (int ns : nextSides) {
        if (ns == 1 && !hasInterior) continue;
        auto& flags = seen[static_cast<std::size_t>(t.next)];
        if (!flags[static_cast<std::size_t>(ns)]) {
          flags[static_cast<std::size_t>(ns)] = true;
          work.emplace_back(t.next, ns);
        }
      }
    }
  }
  return report;
}

void requireValid(const VerifierMachine& verifier) {
  const auto report = validate(verifier);
  if (!report.ok()) throw std::invalid_argument("invalid verifier:\n" + report.summary());
}

SymbolId ProverStrategy::respond(const std::vector<SymbolId>& sent) const {
  auto it = responses.find(sent);
  return it == responses.end() ? defaultResponse : it->second;
}

std::size_t ProverStrategy::longestPrefix() const {
  std::size_t longest = 0;
  for (const auto& [prefix, response] : responses) longest = std::max(longest, prefix.size());
  return longest;
}

std::vector<bool> coinString(std::uint64_t index, int budget) {
  std::vector<bool> coins(static_cast<std::size_t>(budget));
  for (int j = 0; j < budget; ++j) coins[static_cast<std::size_t>(j)] = ((index >> (budget - 1 - j)) & 1U) != 0;
  return coins;
}

std::vector<SymbolId> certificateAlphabet(const VerifierMachine& verifier) {
  std::vector<SymbolId> symbols;
  for (SymbolId id = 0; id < verifier.symbolCount(); ++id) {
    if (id != kNullSymbol && id != kPadSymbol) symbols.push_back(id);
  }
  return symbols;
}

namespace detail {

using Status = BranchCursor::Status;

BranchRunner::BranchRunner(const VerifierMachine& verifier, const Tape& tape, std::vector<bool> coins)
    : verifier_(verifier), tape_(tape), coins_(std::move(coins)) {}

void BranchRunner::enter(BranchCursor& cursor) const {
  switch (verifier_.kind(cursor.state)) {
    case StateKind::Accept: cursor.status = Status::Accepted; return;
    case StateKind::Reject: cursor.status = Status::Rejected; return;
    default: break;
  }
  cursor.status = verifier_.communicates(cursor.state) ? Status::Awaiting : Status::Running;
}

void BranchRunner::execute(BranchCursor& cursor, SymbolId response, std::uint64_t& steps) const {
  const char symbol = tape_.at(cursor.position);
  int bit = -1;
  if (verifier_.kind(cursor.state) == StateKind::CoinToss) {
    if (cursor.coinsUsed >= verifier_.coinBudget() ||
        cursor.coinsUsed >= static_cast<int>(coins_.size())) {
      throw CoinBudgetExceeded("coin budget exceeded in state " + verifier_.stateName(cursor.state));
    }
    bit = coins_[static_cast<std::size_t>(cursor.coinsUsed++)] ? 1 : 0;
  }
  ++steps;
  const VerifierTransition* t = verifier_.transition(cursor.state, symbol, response, bit);
  if (t == nullptr) {
    cursor.status = Status::Rejected;
    if (auto reject = verifier_.rejectState()) cursor.state = *reject;
    return;
  }
  cursor.state = t->next;
  cursor.position = tape_.clamp(cursor.position + t->move);
  enter(cursor);
}

void BranchRunner::settle(BranchCursor& cursor, std::uint64_t& steps) const {
  std::set<std::tuple<StateId, int, int>> visited;
  while (cursor.status == Status::Running) {
    if (!visited.emplace(cursor.state, cursor.position, cursor.coinsUsed).second) {
      cursor.status = Status::Looping;
      return;
    }
    execute(cursor, kNullSymbol, steps);
  }
}

BranchCursor BranchRunner::begin(std::uint64_t& steps) const {
  BranchCursor cursor{verifier_.start(), 0, 0, Status::Running};
  enter(cursor);
  settle(cursor, steps);
  return cursor;
}

void BranchRunner::deliver(BranchCursor& cursor, SymbolId response, std::uint64_t& steps) const {
  if (cursor.status != Status::Awaiting) return;
  execute(cursor, response, steps);
  settle(cursor, steps);
}

void BranchRunner::finishWithPad(BranchCursor& cursor, std::uint64_t& steps) const {
  std::set<std::tuple<StateId, int, int>> visited;
  while (cursor.status == Status::Awaiting) {
    if (!visited.emplace(cursor.state, cursor.position, cursor.coinsUsed).second) {
      cursor.status = Status::Looping;
      return;
    }
    deliver(cursor, kPadSymbol, steps);
  }
}

}  // namespace detail

namespace {

using detail::BranchCursor;
using detail::BranchRunner;
using Status = BranchCursor::Status;

Verdict verdictOf(Status status) {
  switch (status) {
    case Status::Accepted: return Verdict::Accept;
    case Status::Looping: return Verdict::Nonhalt;
    default: return Verdict::Reject;
  }
}

OutcomeDistribution fromCounts(std::uint64_t accept, std::uint64_t reject, std::uint64_t nonhalt, int budget) {
  const Rational weight = inversePowerOfTwo(static_cast<unsigned>(budget));
  auto scaled = [&](std::uint64_t count) {
    Rational r = Rational(mpz_class(std::to_string(count))) * weight;
    r.canonicalize();
    return r;
  };
  return OutcomeDistribution{scaled(accept), scaled(reject), scaled(nonhalt)};
}

}  // namespace

BranchOutcome runBranch(const VerifierMachine& verifier, std::string_view input, const std::vector<bool>& coins,
                        const Certificate& cert) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const BranchRunner runner(verifier, tape, coins);
  BranchOutcome outcome;
  BranchCursor cursor = runner.begin(outcome.steps);
  std::size_t certPos = 0;
  std::set<std::tuple<StateId, int, int>> padVisited;
  while (cursor.status == Status::Awaiting) {
    SymbolId response = kPadSymbol;
    if (certPos < cert.size()) {
      response = cert.symbols[certPos++];
    } else if (!padVisited.emplace(cursor.state, cursor.position, cursor.coinsUsed).second) {
      cursor.status = Status::Looping;
      break;
    }
    outcome.transcript.emplace_back(verifier.commSymbol(cursor.state), response);
    runner.deliver(cursor, response, outcome.steps);
  }
  outcome.verdict = verdictOf(cursor.status);
  outcome.coinsUsed = cursor.coinsUsed;
  return outcome;
}

OutcomeDistribution outcomeDistribution(const VerifierMachine& verifier, std::string_view input,
                                        const Certificate& cert) {
  const int budget = verifier.coinBudget();
  std::array<std::uint64_t, 3> counts{0, 0, 0};
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << budget); ++i) {
    const auto outcome = runBranch(verifier, input, coinString(i, budget), cert);
    ++counts[static_cast<std::size_t>(outcome.verdict)];
  }
  return fromCounts(counts[0], counts[1], counts[2], budget);
}

OutcomeDistribution interactTwoWay(const VerifierMachine& verifier, std::string_view input,
                                   const ProverStrategy& prover) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const int budget = verifier.coinBudget();
  const std::size_t horizon = prover.longestPrefix();
  std::array<std::uint64_t, 3> counts{0, 0, 0};
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << budget); ++i) {
    const BranchRunner runner(verifier, tape, coinString(i, budget));
    std::uint64_t steps = 0;
    BranchCursor cursor = runner.begin(steps);
    std::vector<SymbolId> sent;
    std::set<std::tuple<StateId, int, int>> steadyVisited;
    while (cursor.status == Status::Awaiting) {
      sent.push_back(verifier.commSymbol(cursor.state));
      // Beyond the strategy's longest key every answer is the default, so a
      // repeated configuration there is a genuine loop.
      if (sent.size() > horizon &&
          !steadyVisited.emplace(cursor.state, cursor.position, cursor.coinsUsed).second) {
        cursor.status = Status::Looping;
        break;
      }
      runner.deliver(cursor, prover.respond(sent), steps);
    }
    ++counts[static_cast<std::size_t>(verdictOf(cursor.status))];
  }
  return fromCounts(counts[0], counts[1], counts[2], budget);
}

bool derandomizeRecognizer(const VerifierMachine& verifier, std::string_view input) {
  if (verifier.hasCommunication()) {
    throw std::invalid_argument("derandomizeRecognizer needs a verifier without communication states");
  }
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const int budget = verifier.coinBudget();
  const std::uint64_t cutoff = static_cast<std::uint64_t>(verifier.stateCount()) *
                               static_cast<std::uint64_t>(tape.rightEnd() + 1) *
                               static_cast<std::uint64_t>(budget + 1);
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << budget); ++i) {
    const auto coins = coinString(i, budget);
    StateId state = verifier.start();
    int position = 0;
    int used = 0;
    for (std::uint64_t step = 0; step <= cutoff && !verifier.isHalting(state); ++step) {
      int bit = -1;
      if (verifier.kind(state) == StateKind::CoinToss) {
        if (used >= budget) throw CoinBudgetExceeded("coin budget exceeded in state " + verifier.stateName(state));
        bit = coins[static_cast<std::size_t>(used++)] ? 1 : 0;
      }
      const auto* t = verifier.transition(state, tape.at(position), kNullSymbol, bit);
      if (t == nullptr) break;
      state = t->next;
      position = tape.clamp(position + t->move);
    }
    if (verifier.kind(state) == StateKind::Accept) ++accepted;
  }
  return 2 * accepted > (std::uint64_t{1} << budget);
}

}  // namespace mhv
