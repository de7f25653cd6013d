#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mhv/automaton.hpp"
#include "mhv/rational.hpp"

namespace mhv {

using SymbolId = int;

/// The null communication symbol: a state carrying it does not communicate.
inline constexpr SymbolId kNullSymbol = 0;
/// Response seen when a one-way certificate has run out.
inline constexpr SymbolId kPadSymbol = 1;

enum class StateKind { Deterministic, CoinToss, Accept, Reject };

std::string_view toString(StateKind kind);

struct VerifierTransition {
  StateId next = 0;
  int move = 0;

  bool operator==(const VerifierTransition&) const = default;
};

struct VerifierTransitionKey {
  StateId state;
  char input;
  SymbolId response;
  int bit;  // -1 for deterministic states

  auto operator<=>(const VerifierTransitionKey&) const = default;
};

/// Finite-state verifier with coin-tossing and deterministic states, a
/// per-state communication symbol, one input head and a coin budget.
/// A missing transition entry halts and rejects.
class VerifierMachine {
 public:
  VerifierMachine();
  VerifierMachine(std::string alphabet, HeadMode inputMode, int coinBudget);

  /// Returns the id of an existing token or registers a new one.
  SymbolId addSymbol(std::string token);
  std::optional<SymbolId> findSymbol(std::string_view token) const;
  const std::string& symbolName(SymbolId id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  int symbolCount() const { return static_cast<int>(symbols_.size()); }

  StateId addState(std::string name, StateKind kind, SymbolId comm = kNullSymbol);
  void setStart(StateId state) { start_ = state; }
  void addTransition(StateId from, char input, SymbolId response, int bit, StateId to, int move);
  void addTransition(StateId from, char input, SymbolId response, StateId to, int move) {
    addTransition(from, input, response, -1, to, move);
  }

  const std::string& alphabet() const { return alphabet_; }
  bool inAlphabet(char symbol) const;
  HeadMode inputMode() const { return inputMode_; }
  int coinBudget() const { return coinBudget_; }
  void setCoinBudget(int budget) { coinBudget_ = budget; }

  int stateCount() const { return static_cast<int>(states_.size()); }
  const std::string& stateName(StateId s) const { return states_.at(static_cast<std::size_t>(s)).name; }
  std::optional<StateId> findState(std::string_view name) const;
  StateKind kind(StateId s) const { return states_.at(static_cast<std::size_t>(s)).kind; }
  SymbolId commSymbol(StateId s) const { return states_.at(static_cast<std::size_t>(s)).comm; }
  bool communicates(StateId s) const { return commSymbol(s) != kNullSymbol; }
  bool isHalting(StateId s) const { return kind(s) == StateKind::Accept || kind(s) == StateKind::Reject; }
  StateId start() const { return start_; }
  std::optional<StateId> acceptState() const;
  std::optional<StateId> rejectState() const;

  /// bit is ignored for deterministic states.
  const VerifierTransition* transition(StateId state, char input, SymbolId response, int bit) const;
  const std::map<VerifierTransitionKey, VerifierTransition>& transitions() const { return transitions_; }

  bool hasCommunication() const;

  bool operator==(const VerifierMachine&) const = default;

 private:
  struct StateInfo {
    std::string name;
    StateKind kind;
    SymbolId comm;
    bool operator==(const StateInfo&) const = default;
  };

  std::string alphabet_;
  HeadMode inputMode_ = HeadMode::TwoWay;
  int coinBudget_ = 0;
  std::vector<std::string> symbols_;
  std::vector<StateInfo> states_;
  std::map<VerifierTransitionKey, VerifierTransition> transitions_;
  StateId start_ = 0;
};

/// Same shape as automaton validation: structure, head mode, and an abstract
/// (state, side) reachability for end-marker escapes. Transitions into the
/// halting states are exempt from the escape check.
ValidationReport validate(const VerifierMachine& verifier);

/// Throws std::invalid_argument carrying the report when validation fails.
void requireValid(const VerifierMachine& verifier);

struct Certificate {
  std::vector<SymbolId> symbols;

  std::size_t size() const { return symbols.size(); }
  bool operator==(const Certificate&) const = default;
};

/// Transcript-indexed prover: the response to the k-th communication depends
/// only on the k symbols the verifier has sent so far.
struct ProverStrategy {
  std::map<std::vector<SymbolId>, SymbolId> responses;
  SymbolId defaultResponse = kPadSymbol;

  SymbolId respond(const std::vector<SymbolId>& sent) const;
  std::size_t longestPrefix() const;
};

enum class Verdict { Accept, Reject, Nonhalt };

std::string_view toString(Verdict verdict);

struct BranchOutcome {
  Verdict verdict = Verdict::Reject;
  std::uint64_t steps = 0;
  int coinsUsed = 0;
  std::vector<std::pair<SymbolId, SymbolId>> transcript;  // (sent, received)
};

struct OutcomeDistribution {
  Rational accept;
  Rational reject;
  Rational nonhalt;

  Rational total() const { return accept + reject + nonhalt; }
  bool operator==(const OutcomeDistribution&) const = default;
};

class CoinBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coin string i of a B-coin machine: the first coin is the most significant bit.
std::vector<bool> coinString(std::uint64_t index, int budget);

/// One deterministic branch for fixed coins and certificate. A repeated
/// (state, input position, certificate position, coins used) is nonhalt;
/// past the certificate's end the response is PAD.
BranchOutcome runBranch(const VerifierMachine& verifier, std::string_view input,
                        const std::vector<bool>& coins, const Certificate& cert);

/// Exact distribution over all 2^B coin strings, each weighted 2^-B.
OutcomeDistribution outcomeDistribution(const VerifierMachine& verifier, std::string_view input,
                                        const Certificate& cert);

struct BestCertificate {
  Rational pAccept;
  Certificate cert;
};

/// Maximum acceptance probability over all certificates of length <= maxLength
/// (symbols from Γ minus NULL and PAD), with the shortlex-least maximiser.
BestCertificate bestCertificate(const VerifierMachine& verifier, std::string_view input, int maxLength);

/// Same search with a different objective: the certificate maximising the
/// probability of the given verdict (used to bound nonhalting mass).
BestCertificate maximiseOutcome(const VerifierMachine& verifier, std::string_view input, int maxLength,
                                Verdict target);

/// Like outcomeDistribution, with each response computed by the prover from
/// the symbols sent so far on that branch.
OutcomeDistribution interactTwoWay(const VerifierMachine& verifier, std::string_view input,
                                   const ProverStrategy& prover);

/// Deterministic recognition by majority over all coin strings, cutting off
/// any branch that runs longer than |Q|(n+2)(B+1) steps.
bool derandomizeRecognizer(const VerifierMachine& verifier, std::string_view input);

/// Certificate symbols in enumeration order: every token except NULL and PAD.
std::vector<SymbolId> certificateAlphabet(const VerifierMachine& verifier);

namespace detail {

/// Incremental execution of one branch, pausing at each communication.
struct BranchCursor {
  enum class Status { Running, Awaiting, Accepted, Rejected, Looping };

  StateId state = 0;
  int position = 0;
  int coinsUsed = 0;
  Status status = Status::Running;

  auto operator<=>(const BranchCursor&) const = default;
};

class BranchRunner {
 public:
  BranchRunner(const VerifierMachine& verifier, const Tape& tape, std::vector<bool> coins);

  /// Cursor positioned on the start state, already settled.
  BranchCursor begin(std::uint64_t& steps) const;

  /// Answers the pending communication of an Awaiting cursor and runs on to
  /// the next communication, halt, or detected loop.
  void deliver(BranchCursor& cursor, SymbolId response, std::uint64_t& steps) const;

  /// Runs an awaiting cursor to completion with PAD for every further response.
  void finishWithPad(BranchCursor& cursor, std::uint64_t& steps) const;

 private:
  void execute(BranchCursor& cursor, SymbolId response, std::uint64_t& steps) const;
  void enter(BranchCursor& cursor) const;
  void settle(BranchCursor& cursor, std::uint64_t& steps) const;

  const VerifierMachine& verifier_;
  const Tape& tape_;
  std::vector<bool> coins_;
};

}  // namespace detail

}  // namespace mhv
