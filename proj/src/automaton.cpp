#include "mhv/automaton.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mhv {

bool moveAllowed(HeadMode mode, int move) {
  switch (mode) {
    case HeadMode::TwoWay: return move >= -1 && move <= 1;
    case HeadMode::OneWay: return move == 0 || move == 1;
    case HeadMode::RealTime: return move == 1;
  }
  return false;
}

std::string_view toString(HeadMode mode) {
  switch (mode) {
    case HeadMode::TwoWay: return "two-way";
    case HeadMode::OneWay: return "one-way";
    case HeadMode::RealTime: return "real-time";
  }
  return "?";
}

std::optional<HeadMode> parseHeadMode(std::string_view text) {
  if (text == "two-way") return HeadMode::TwoWay;
  if (text == "one-way") return HeadMode::OneWay;
  if (text == "real-time") return HeadMode::RealTime;
  return std::nullopt;
}

bool MhTransition::matches(std::string_view scanned) const {
  if (scanned.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != kAnySymbol && pattern[i] != scanned[i]) return false;
  }
  return true;
}

MultiheadAutomaton::MultiheadAutomaton(std::string alphabet, std::vector<HeadMode> modes)
    : alphabet_(std::move(alphabet)), modes_(std::move(modes)) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
}

StateId MultiheadAutomaton::addState(std::string name, bool accepting) {
  names_.push_back(std::move(name));
  accepting_.push_back(accepting);
  transitions_.emplace_back();
  return static_cast<StateId>(names_.size() - 1);
}

void MultiheadAutomaton::setAccepting(StateId state, bool accepting) {
  accepting_.at(static_cast<std::size_t>(state)) = accepting;
}

void MultiheadAutomaton::addTransition(StateId from, std::string pattern, StateId to,
                                       std::vector<int> moves) {
  transitions_.at(static_cast<std::size_t>(from))
      .push_back(MhTransition{std::move(pattern), to, std::move(moves)});
}

bool MultiheadAutomaton::inAlphabet(char symbol) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), symbol);
}

std::optional<StateId> MultiheadAutomaton::findState(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

std::size_t MultiheadAutomaton::transitionCount() const {
  std::size_t total = 0;
  for (const auto& list : transitions_) total += list.size();
  return total;
}

std::vector<const MhTransition*> MultiheadAutomaton::matching(StateId state,
                                                              std::string_view scanned) const {
  std::vector<const MhTransition*> result;
  for (const auto& t : transitionsFrom(state)) {
    if (t.matches(scanned)) result.push_back(&t);
  }
  return result;
}

namespace {

bool patternsOverlap(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != kAnySymbol && b[i] != kAnySymbol && a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

bool MultiheadAutomaton::isDeterministic() const {
  for (const auto& list : transitions_) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        if (patternsOverlap(list[i].pattern, list[j].pattern)) return false;
      }
    }
  }
  return true;
}

std::string_view toString(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Mode: return "mode";
    case ViolationKind::EndMarkerEscape: return "end-marker escape";
    case ViolationKind::UndeclaredState: return "undeclared state";
    case ViolationKind::UndeclaredSymbol: return "undeclared symbol";
    case ViolationKind::Arity: return "arity";
    case ViolationKind::Structure: return "structure";
  }
  return "?";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << toString(v.kind) << ": " << v.message << '\n';
  return out.str();
}

namespace {

enum Side { kLeft = 0, kInterior = 1, kRight = 2 };

bool sideAccepts(Side side, char patternSymbol, bool hasInterior) {
  if (patternSymbol == kAnySymbol) return side != kInterior || hasInterior;
  if (side == kInterior) return patternSymbol != kEndMarker;
  return patternSymbol == kEndMarker;
}

std::vector<Side> sidesAfter(Side side, int move, bool hasInterior) {
  std::vector<Side> out;
  auto add = [&](Side s) {
    if (s == kInterior && !hasInterior) return;
    out.push_back(s);
  };
  if (move == 0) {
    add(side);
  } else if (move == 1) {
    add(kInterior);
    add(kRight);
  } else {
    add(kInterior);
    add(kLeft);
  }
  return out;
}

std::string describeTransition(const MultiheadAutomaton& m, StateId from, const MhTransition& t) {
  std::string pattern;
  for (char c : t.pattern) {
    if (!pattern.empty()) pattern += ',';
    pattern += c == kEndMarker ? std::string("CENT") : std::string(1, c);
  }
  std::string target = t.next >= 0 && t.next < m.stateCount() ? m.stateName(t.next) : "?";
  return m.stateName(from) + " [" + pattern + "] -> " + target;
}

}  // namespace

ValidationReport validate(const MultiheadAutomaton& machine) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string message) {
    report.violations.push_back(Violation{kind, std::move(message)});
  };
  const int k = machine.headCount();
  if (k < 1) add(ViolationKind::Structure, "automaton needs at least one head");
  if (machine.stateCount() == 0) {
    add(ViolationKind::Structure, "automaton has no states");
    return report;
  }
  if (machine.start() < 0 || machine.start() >= machine.stateCount()) {
    add(ViolationKind::UndeclaredState, "start state is not declared");
    return report;
  }
  for (char c : machine.alphabet()) {
    if (c == kEndMarker || c == kAnySymbol || c == '-' || c == ',' || c == ';' ||
        c <= ' ' || c > '~') {
      add(ViolationKind::Structure, std::string("reserved or unprintable alphabet symbol '") + c + "'");
    }
  }

  bool structurallySound = report.ok();
  for (StateId q = 0; q < machine.stateCount(); ++q) {
    for (const auto& t : machine.transitionsFrom(q)) {
      const std::string what = describeTransition(machine, q, t);
      if (static_cast<int>(t.pattern.size()) != k || static_cast<int>(t.moves.size()) != k) {
        add(ViolationKind::Arity, what + ": expected " + std::to_string(k) + " heads");
        structurallySound = false;
        continue;
      }
      if (t.next < 0 || t.next >= machine.stateCount()) {
        add(ViolationKind::UndeclaredState, what + ": target state is not declared");
        structurallySound = false;
      }
      for (int h = 0; h < k; ++h) {
        char c = t.pattern[static_cast<std::size_t>(h)];
        if (c != kEndMarker && c != kAnySymbol && !machine.inAlphabet(c)) {
          add(ViolationKind::UndeclaredSymbol, what + ": symbol '" + std::string(1, c) +
                                                   "' is not in the alphabet");
          structurallySound = false;
        }
        if (!moveAllowed(machine.modes()[static_cast<std::size_t>(h)], t.moves[static_cast<std::size_t>(h)])) {
          add(ViolationKind::Mode, what + ": move " + std::to_string(t.moves[static_cast<std::size_t>(h)]) +
                                       " on head " + std::to_string(h + 1) + " violates " +
                                       std::string(toString(machine.modes()[static_cast<std::size_t>(h)])) +
                                       " mode");
        }
      }
    }
  }
  if (!structurallySound) return report;

  const bool hasInterior = !machine.alphabet().empty();
  std::set<std::pair<StateId, const MhTransition*>> reported;
  for (int h = 0; h < k; ++h) {
    std::vector<std::array<bool, 3>> seen(static_cast<std::size_t>(machine.stateCount()),
                                          std::array<bool, 3>{false, false, false});
    std::deque<std::pair<StateId, Side>> work;
    seen[static_cast<std::size_t>(machine.start())][kLeft] = true;
    work.emplace_back(machine.start(), kLeft);
    while (!work.empty()) {
      auto [q, side] = work.front();
      work.pop_front();
      if (machine.isAccepting(q)) continue;
      for (const auto& t : machine.transitionsFrom(q)) {
        if (!sideAccepts(side, t.pattern[static_cast<std::size_t>(h)], hasInterior)) continue;
        const int move = t.moves[static_cast<std::size_t>(h)];
        const bool escapes = (side == kLeft && move == -1) || (side == kRight && move == 1);
        if (escapes) {
          if (!machine.isAccepting(t.next) && reported.insert({q, &t}).second) {
            add(ViolationKind::EndMarkerEscape,
                describeTransition(machine, q, t) + ": head " + std::to_string(h + 1) +
                    (side == kLeft ? " moves left off the left" : " moves right off the right") +
                    " end-marker");
          }
          continue;
        }
        for (Side next : sidesAfter(side, move, hasInterior)) {
          auto& flags = seen[static_cast<std::size_t>(t.next)];
          if (!flags[next]) {
            flags[next] = true;
            work.emplace_back(t.next, next);
          }
        }
      }
    }
  }
  return report;
}

void requireInputOverAlphabet(std::string_view alphabet, std::string_view input) {
  for (char c : input) {
    if (alphabet.find(c) == std::string_view::npos) {
      throw std::invalid_argument(std::string("input symbol '") + c + "' is not in the alphabet");
    }
  }
}

MHConfiguration startConfiguration(const MultiheadAutomaton& machine) {
  return MHConfiguration{machine.start(), std::vector<int>(static_cast<std::size_t>(machine.headCount()), 0)};
}

namespace {

std::string scannedTuple(const Tape& tape, const std::vector<int>& heads) {
  std::string scanned;
  scanned.reserve(heads.size());
  for (int p : heads) scanned.push_back(tape.at(p));
  return scanned;
}

MHConfiguration applyTransition(const Tape& tape, const MHConfiguration& config, const MhTransition& t) {
  MHConfiguration next{t.next, config.heads};
  for (std::size_t h = 0; h < next.heads.size(); ++h) next.heads[h] = tape.clamp(next.heads[h] + t.moves[h]);
  return next;
}

// Mixed-radix code for a configuration; the radix is n+2 per head.
class ConfigCodec {
 public:
  ConfigCodec(const MultiheadAutomaton& machine, const Tape& tape)
      : radix_(static_cast<std::uint64_t>(tape.rightEnd() + 1)), heads_(machine.headCount()) {
    if (configurationBound(machine, tape.length()) == std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("configuration space too large to index");
    }
  }

  std::uint64_t encode(const MHConfiguration& c) const {
    std::uint64_t code = static_cast<std::uint64_t>(c.state);
    for (int p : c.heads) code = code * radix_ + static_cast<std::uint64_t>(p);
    return code;
  }

  MHConfiguration decode(std::uint64_t code) const {
    MHConfiguration c;
    c.heads.assign(static_cast<std::size_t>(heads_), 0);
    for (int h = heads_ - 1; h >= 0; --h) {
      c.heads[static_cast<std::size_t>(h)] = static_cast<int>(code % radix_);
      code /= radix_;
    }
    c.state = static_cast<StateId>(code);
    return c;
  }

 private:
  std::uint64_t radix_;
  int heads_;
};

}  // namespace

std::vector<MHConfiguration> successors(const MultiheadAutomaton& machine, const Tape& tape,
                                        const MHConfiguration& config) {
  std::vector<MHConfiguration> result;
  if (machine.isAccepting(config.state)) return result;
  const std::string scanned = scannedTuple(tape, config.heads);
  for (const MhTransition* t : machine.matching(config.state, scanned)) {
    MHConfiguration next = applyTransition(tape, config, *t);
    if (std::find(result.begin(), result.end(), next) == result.end()) result.push_back(std::move(next));
  }
  return result;
}

std::optional<AcceptingRun> acceptingPath(const MultiheadAutomaton& machine, std::string_view input) {
  requireInputOverAlphabet(machine.alphabet(), input);
  const Tape tape(input);
  const ConfigCodec codec(machine, tape);

  struct Parent {
    std::uint64_t from;
    int choice;
  };
  std::unordered_map<std::uint64_t, Parent> parent;
  std::deque<std::uint64_t> frontier;
  const MHConfiguration start = startConfiguration(machine);
  const std::uint64_t startCode = codec.encode(start);
  parent.emplace(startCode, Parent{startCode, -1});
  frontier.push_back(startCode);

  while (!frontier.empty()) {
    const std::uint64_t code = frontier.front();
    frontier.pop_front();
    const MHConfiguration config = codec.decode(code);
    if (machine.isAccepting(config.state)) {
      AcceptingRun run;
      run.final = config;
      std::uint64_t cursor = code;
      while (cursor != startCode) {
        const Parent& p = parent.at(cursor);
        run.steps.push_back(PathStep{codec.decode(p.from), p.choice});
        cursor = p.from;
      }
      std::reverse(run.steps.begin(), run.steps.end());
      return run;
    }
    const std::string scanned = scannedTuple(tape, config.heads);
    const auto options = machine.matching(config.state, scanned);
    for (std::size_t choice = 0; choice < options.size(); ++choice) {
      const std::uint64_t next = codec.encode(applyTransition(tape, config, *options[choice]));
      if (parent.emplace(next, Parent{code, static_cast<int>(choice)}).second) frontier.push_back(next);
    }
  }
  return std::nullopt;
}

bool accepts(const MultiheadAutomaton& machine, std::string_view input) {
  return acceptingPath(machine, input).has_value();
}

std::uint64_t configurationBound(const MultiheadAutomaton& machine, int inputLength) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t bound = static_cast<std::uint64_t>(machine.stateCount());
  const auto radix = static_cast<std::uint64_t>(inputLength + 2);
  for (int h = 0; h < machine.headCount(); ++h) {
    if (bound > kMax / radix / 2) return kMax;
    bound *= radix;
  }
  return bound;
}

std::vector<std::string> allStrings(std::string_view alphabet, int maxLength) {
  std::vector<std::string> result{""};
  std::size_t begin = 0;
  for (int len = 1; len <= maxLength; ++len) {
    const std::size_t end = result.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) result.push_back(result[i] + c);
    }
    begin = end;
  }
  return result;
}

std::set<std::string> enumerateLanguage(const MultiheadAutomaton& machine, int maxLength) {
  std::set<std::string> language;
  for (const auto& x : allStrings(machine.alphabet(), maxLength)) {
    if (accepts(machine, x)) language.insert(x);
  }
  return language;
}

}  // namespace mhv
