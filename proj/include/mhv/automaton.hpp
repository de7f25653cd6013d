#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mhv {

/// The end-marker that flanks every input. Both ends use the same symbol;
/// positions 0 and n+1 tell them apart. Spelled CENT in files.
inline constexpr char kEndMarker = '\x02';

/// Matches any tape symbol (including the end-marker) in a transition pattern.
inline constexpr char kAnySymbol = '*';

using StateId = int;

enum class HeadMode { TwoWay, OneWay, RealTime };

bool moveAllowed(HeadMode mode, int move);
std::string_view toString(HeadMode mode);
std::optional<HeadMode> parseHeadMode(std::string_view text);

/// Read-only view of ¢x¢. Positions run from 0 (left marker) to n+1.
class Tape {
 public:
  explicit Tape(std::string_view input) : input_(input) {}

  char at(int position) const {
    if (position <= 0 || position > length()) return kEndMarker;
    return input_[static_cast<std::size_t>(position - 1)];
  }
  int length() const { return static_cast<int>(input_.size()); }
  int rightEnd() const { return length() + 1; }
  int clamp(int position) const {
    return position < 0 ? 0 : (position > rightEnd() ? rightEnd() : position);
  }
  const std::string& input() const { return input_; }

 private:
  std::string input_;
};

struct MhTransition {
  std::string pattern;     // one symbol per head, from Σ ∪ {¢, *}
  StateId next = 0;
  std::vector<int> moves;  // one of {-1, 0, +1} per head

  bool matches(std::string_view scanned) const;
  bool operator==(const MhTransition&) const = default;
};

struct MHConfiguration {
  StateId state = 0;
  std::vector<int> heads;

  auto operator<=>(const MHConfiguration&) const = default;
};

/// k-head finite automaton over an end-marked tape. Transitions are kept per
/// source state in construction order; that order defines the choice index
/// of each nondeterministic option.
class MultiheadAutomaton {
 public:
  MultiheadAutomaton() = default;
  MultiheadAutomaton(std::string alphabet, std::vector<HeadMode> modes);

  StateId addState(std::string name, bool accepting = false);
  void setStart(StateId state) { start_ = state; }
  void setAccepting(StateId state, bool accepting);
  void addTransition(StateId from, std::string pattern, StateId to, std::vector<int> moves);

  const std::string& alphabet() const { return alphabet_; }
  bool inAlphabet(char symbol) const;
  int headCount() const { return static_cast<int>(modes_.size()); }
  const std::vector<HeadMode>& modes() const { return modes_; }

  int stateCount() const { return static_cast<int>(names_.size()); }
  const std::string& stateName(StateId state) const { return names_.at(static_cast<std::size_t>(state)); }
  std::optional<StateId> findState(std::string_view name) const;
  bool isAccepting(StateId state) const { return accepting_.at(static_cast<std::size_t>(state)); }
  StateId start() const { return start_; }

  const std::vector<MhTransition>& transitionsFrom(StateId state) const {
    return transitions_.at(static_cast<std::size_t>(state));
  }
  std::size_t transitionCount() const;

  /// Transitions applicable to a concrete scanned tuple, in choice order.
  std::vector<const MhTransition*> matching(StateId state, std::string_view scanned) const;

  /// True iff no concrete (state, tuple) has more than one applicable transition.
  bool isDeterministic() const;

  bool operator==(const MultiheadAutomaton&) const = default;

 private:
  std::string alphabet_;
  std::vector<HeadMode> modes_;
  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  std::vector<std::vector<MhTransition>> transitions_;
  StateId start_ = 0;
};

enum class ViolationKind { Mode, EndMarkerEscape, UndeclaredState, UndeclaredSymbol, Arity, Structure };

std::string_view toString(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

/// Static checks. End-marker escapes are found by a per-head abstract
/// reachability over (state, {left end, interior, right end}); transitions
/// into accepting states are exempt because the machine halts there.
ValidationReport validate(const MultiheadAutomaton& machine);

/// Throws std::invalid_argument if x uses a symbol outside Σ.
void requireInputOverAlphabet(std::string_view alphabet, std::string_view input);

MHConfiguration startConfiguration(const MultiheadAutomaton& machine);

/// One-step successors, deduplicated, in choice order. Accepting
/// configurations are terminal.
std::vector<MHConfiguration> successors(const MultiheadAutomaton& machine, const Tape& tape,
                                        const MHConfiguration& config);

bool accepts(const MultiheadAutomaton& machine, std::string_view input);

struct PathStep {
  MHConfiguration config;
  int choice = 0;  // index among matching(config.state, scanned)
};

struct AcceptingRun {
  std::vector<PathStep> steps;
  MHConfiguration final;

  std::size_t length() const { return steps.size(); }
};

/// A shortest accepting run found breadth-first; ties go to the earlier choice.
std::optional<AcceptingRun> acceptingPath(const MultiheadAutomaton& machine, std::string_view input);

/// Number of configurations on an input of length n: |Q|(n+2)^k.
std::uint64_t configurationBound(const MultiheadAutomaton& machine, int inputLength);

/// Every string over the alphabet with length <= maxLength, shortlex order.
std::vector<std::string> allStrings(std::string_view alphabet, int maxLength);

std::set<std::string> enumerateLanguage(const MultiheadAutomaton& machine, int maxLength);

/// Adds k sweeping clock heads (a base-2(n+1) odometer) plus a mod-|Q| step
/// counter in the finite control; every branch of the result halts, and the
/// language is unchanged because the clock outlasts |Q|(n+2)^k steps.
MultiheadAutomaton addClock(const MultiheadAutomaton& machine);

/// Exact worst-case branch length of addClock(machine) on inputs of length n:
/// |Q| * (1 + P + ... + P^k) - 1 steps with P = 2(n+1).
std::uint64_t clockedStepLimit(const MultiheadAutomaton& original, int inputLength);

/// The declared c in c*(n+2)^k: |Q| * 2^k, which covers clockedStepLimit.
std::uint64_t clockConstant(const MultiheadAutomaton& original);

}  // namespace mhv
