#include <deque>
#include <map>
#include <set>

#include "mhv/derandomizer.hpp"

namespace mhv {

namespace {

enum class Phase : int { Running, Awaiting, Accepted, Rejected, Looping };

struct Machine {
  Phase phase = Phase::Running;
  StateId state = 0;
  int coinsUsed = 0;

  bool live() const { return phase == Phase::Running || phase == Phase::Awaiting; }
};

// The finite control of the simulating automaton. Machines before `current`
// have been served this round, machines after it have not.
struct Control {
  bool init = true;
  int current = 0;
  std::vector<Machine> machines;
  std::vector<int> labels;   // transcript block of each awaiting machine
  std::vector<int> guesses;  // response guessed for each block this round, -1 if none
  int accepted = 0;

  std::vector<int> key() const {
    std::vector<int> k{init ? 1 : 0, current, accepted};
    for (const auto& m : machines) {
      k.push_back(static_cast<int>(m.phase));
      k.push_back(m.live() ? m.state : -1);
      k.push_back(m.live() ? m.coinsUsed : -1);
    }
    k.insert(k.end(), labels.begin(), labels.end());
    k.insert(k.end(), guesses.begin(), guesses.end());
    return k;
  }
};

class Simulation {
 public:
  explicit Simulation(const VerifierMachine& verifier)
      : v_(verifier), count_(std::size_t{1} << verifier.coinBudget()), threshold_(static_cast<int>(count_ / 2 + 1)),
        result_(verifier.alphabet(), std::vector<HeadMode>(count_, HeadMode::OneWay)) {
    for (std::size_t i = 0; i < count_; ++i) coins_.push_back(coinString(i, verifier.coinBudget()));
    symbols_ = std::string(1, kEndMarker) + verifier.alphabet();
  }

  MultiheadAutomaton build() {
    Control start;
    start.machines.resize(count_);
    start.labels.assign(count_, 0);
    start.guesses.assign(count_, -1);
    for (auto& m : start.machines) {
      m.state = v_.start();
      enter(m);
      if (m.phase == Phase::Accepted) ++start.accepted;
    }
    if (start.accepted >= threshold_) {
      result_.setStart(acceptState());
      return std::move(result_);
    }
    auto first = seek(std::move(start), 0);
    if (!first) {
      result_.setStart(result_.addState("dead"));
      return std::move(result_);
    }
    result_.setStart(intern(*first));
    while (!work_.empty()) {
      auto [control, id] = std::move(work_.front());
      work_.pop_front();
      expand(control, id);
    }
    return std::move(result_);
  }

 private:
  void enter(Machine& m) const {
    switch (v_.kind(m.state)) {
      case StateKind::Accept: m.phase = Phase::Accepted; return;
      case StateKind::Reject: m.phase = Phase::Rejected; return;
      default: m.phase = v_.communicates(m.state) ? Phase::Awaiting : Phase::Running;
    }
  }

  // Runs machine `index` on one scanned symbol: the first transition uses
  // `response`, stationary steps follow until the head moves, a
  // communication or halt is reached, or a state repeats on this cell.
  std::pair<Machine, int> advance(Machine m, std::size_t index, char symbol, SymbolId response) const {
    std::set<std::pair<StateId, int>> visited{{m.state, m.coinsUsed}};
    while (true) {
      int bit = -1;
      if (v_.kind(m.state) == StateKind::CoinToss) {
        if (m.coinsUsed >= v_.coinBudget()) return {Machine{Phase::Rejected}, 0};
        bit = coins_[index][static_cast<std::size_t>(m.coinsUsed++)] ? 1 : 0;
      }
      const auto* t = v_.transition(m.state, symbol, response, bit);
      if (t == nullptr) return {Machine{Phase::Rejected}, 0};
      m.state = t->next;
      enter(m);
      if (!m.live()) return {m, 0};
      if (t->move != 0 || m.phase == Phase::Awaiting) return {m, t->move};
      if (!visited.emplace(m.state, m.coinsUsed).second) return {Machine{Phase::Looping}, 0};
      response = kNullSymbol;
    }
  }

  bool needsWork(const Control& c, std::size_t i) const {
    return c.init ? c.machines[i].phase == Phase::Running : c.machines[i].phase == Phase::Awaiting;
  }

  // Moves the cursor to the next machine to serve, closing the round when
  // everyone has been served. Empty when no machine can communicate again.
  std::optional<Control> seek(Control c, std::size_t from) const {
    for (std::size_t i = from; i < count_; ++i) {
      if (needsWork(c, i)) {
        c.current = static_cast<int>(i);
        return c;
      }
    }
    std::map<std::pair<int, SymbolId>, int> first;
    for (std::size_t i = 0; i < count_; ++i) {
      if (c.machines[i].phase != Phase::Awaiting) {
        c.labels[i] = -1;
        continue;
      }
      const SymbolId sent = v_.commSymbol(c.machines[i].state);
      c.labels[i] = first.try_emplace({c.labels[i], sent}, static_cast<int>(i)).first->second;
    }
    c.guesses.assign(count_, -1);
    c.init = false;
    for (std::size_t i = 0; i < count_; ++i) {
      if (c.machines[i].phase == Phase::Awaiting) {
        c.current = static_cast<int>(i);
        return c;
      }
    }
    return std::nullopt;
  }

  StateId acceptState() {
    if (!accept_) accept_ = result_.addState("accept", true);
    return *accept_;
  }

  StateId intern(const Control& c) {
    auto [it, inserted] = ids_.try_emplace(c.key(), 0);
    if (inserted) {
      it->second = result_.addState("c" + std::to_string(ids_.size() - 1));
      work_.emplace_back(c, it->second);
    }
    return it->second;
  }

  void expand(const Control& c, StateId id) {
    const auto i = static_cast<std::size_t>(c.current);
    const Machine& m = c.machines[i];
    std::vector<SymbolId> responses{kNullSymbol};
    bool guessing = false;
    if (m.phase == Phase::Awaiting) {
      const int guessed = c.guesses[static_cast<std::size_t>(c.labels[i])];
      if (guessed >= 0) {
        responses = {guessed};
      } else {
        guessing = true;
        responses.clear();
        for (SymbolId s = kPadSymbol; s < v_.symbolCount(); ++s) responses.push_back(s);
      }
    }
    std::string pattern(count_, kAnySymbol);
    std::vector<int> moves(count_, 0);
    for (char symbol : symbols_) {
      pattern[i] = symbol;
      for (SymbolId response : responses) {
        auto [next, move] = advance(m, i, symbol, response);
        Control after = c;
        after.machines[i] = next;
        if (guessing) after.guesses[static_cast<std::size_t>(c.labels[i])] = response;
        moves[i] = move;
        if (next.phase == Phase::Accepted && ++after.accepted >= threshold_) {
          result_.addTransition(id, pattern, acceptState(), moves);
          continue;
        }
        if (next.phase == Phase::Running) {
          result_.addTransition(id, pattern, intern(after), moves);
          continue;
        }
        if (auto sought = seek(std::move(after), i + 1)) result_.addTransition(id, pattern, intern(*sought), moves);
      }
    }
  }

  const VerifierMachine& v_;
  std::size_t count_;
  int threshold_;
  MultiheadAutomaton result_;
  std::vector<std::vector<bool>> coins_;
  std::string symbols_;
  std::map<std::vector<int>, StateId> ids_;
  std::deque<std::pair<Control, StateId>> work_;
  std::optional<StateId> accept_;
};

}  // namespace

MultiheadAutomaton toOneWayMultihead(const VerifierMachine& verifier) {
  requireValid(verifier);
  if (verifier.inputMode() == HeadMode::TwoWay) {
    throw std::invalid_argument("toOneWayMultihead needs a one-way or real-time verifier");
  }
  if (verifier.coinBudget() > 4) throw std::invalid_argument("coin budget too large for the head-per-machine construction");
  return Simulation(verifier).build();
}

}  // namespace mhv
