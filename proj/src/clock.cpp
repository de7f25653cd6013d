#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

#include "mhv/automaton.hpp"

namespace mhv {

namespace {

// Sweep phase of one clock head.
enum Phase : char { kAtStart = '0', kRight = 'R', kLeft = 'L' };

struct ClockState {
  StateId original;
  std::string phases;  // one Phase per clock head
  int substep;         // ticks fire when this wraps at |Q|

  auto operator<=>(const ClockState&) const = default;
};

struct Tick {
  std::string phases;
  std::vector<int> moves;
  bool overflow = false;
};

Tick advanceOdometer(const std::string& phases, const std::string& scanned) {
  Tick tick{phases, std::vector<int>(phases.size(), 0)};
  bool carry = true;
  for (std::size_t j = 0; j < phases.size() && carry; ++j) {
    const bool atMarker = scanned[j] == kEndMarker;
    carry = false;
    switch (phases[j]) {
      case kAtStart:
        tick.moves[j] = 1;
        tick.phases[j] = kRight;
        break;
      case kRight:
        if (atMarker) {
          tick.moves[j] = -1;
          tick.phases[j] = kLeft;
        } else {
          tick.moves[j] = 1;
        }
        break;
      case kLeft:
        if (atMarker) {
          // Sweep complete: restart and carry into the next digit.
          tick.moves[j] = 1;
          tick.phases[j] = kRight;
          carry = true;
        } else {
          tick.moves[j] = -1;
        }
        break;
    }
  }
  tick.overflow = carry;
  return tick;
}

// Symbols a clock head may scan in a given phase.
std::string candidateSymbols(char phase, const std::string& alphabet) {
  if (phase == kAtStart) return std::string(1, kEndMarker);
  return std::string(1, kEndMarker) + alphabet;
}

}  // namespace

MultiheadAutomaton addClock(const MultiheadAutomaton& machine) {
  const int k = machine.headCount();
  const int stateCount = machine.stateCount();
  if (stateCount == 0) throw std::invalid_argument("addClock needs a non-empty automaton");

  std::vector<HeadMode> modes = machine.modes();
  modes.insert(modes.end(), static_cast<std::size_t>(k), HeadMode::TwoWay);
  MultiheadAutomaton clocked(machine.alphabet(), modes);

  std::map<ClockState, StateId> ids;
  std::deque<ClockState> work;
  auto idOf = [&](const ClockState& s) {
    auto [it, inserted] = ids.emplace(s, 0);
    if (inserted) {
      it->second = clocked.addState(machine.stateName(s.original) + "|" + s.phases + "|" +
                                        std::to_string(s.substep),
                                    machine.isAccepting(s.original));
      work.push_back(s);
    }
    return it->second;
  };

  clocked.setStart(idOf(ClockState{machine.start(), std::string(static_cast<std::size_t>(k), kAtStart), 0}));

  while (!work.empty()) {
    const ClockState current = work.front();
    work.pop_front();
    if (machine.isAccepting(current.original)) continue;
    const StateId from = ids.at(current);
    const bool ticks = current.substep == stateCount - 1;
    const int nextSubstep = ticks ? 0 : current.substep + 1;

    // Every combination of clock-head symbols admissible in this phase vector.
    std::vector<std::string> clockTuples{""};
    for (int j = 0; j < k; ++j) {
      std::vector<std::string> extended;
      for (const auto& prefix : clockTuples) {
        for (char c : candidateSymbols(current.phases[static_cast<std::size_t>(j)], machine.alphabet())) {
          extended.push_back(prefix + c);
        }
      }
      clockTuples = std::move(extended);
    }

    for (const auto& t : machine.transitionsFrom(current.original)) {
      for (const auto& clockScan : clockTuples) {
        Tick tick{current.phases, std::vector<int>(static_cast<std::size_t>(k), 0)};
        if (ticks) {
          tick = advanceOdometer(current.phases, clockScan);
          if (tick.overflow) continue;  // out of time: this branch halts and rejects
        }
        std::vector<int> moves = t.moves;
        moves.insert(moves.end(), tick.moves.begin(), tick.moves.end());
        const StateId to = idOf(ClockState{t.next, tick.phases, nextSubstep});
        clocked.addTransition(from, t.pattern + clockScan, to, std::move(moves));
      }
    }
  }
  return clocked;
}

std::uint64_t clockedStepLimit(const MultiheadAutomaton& original, int inputLength) {
  // Digit j first carries after one extra start tick, so the odometer
  // overflows on tick 1 + P + ... + P^k with P = 2(n+1).
  const std::uint64_t period = 2 * static_cast<std::uint64_t>(inputLength + 1);
  std::uint64_t ticks = 1;
  std::uint64_t power = 1;
  for (int h = 0; h < original.headCount(); ++h) {
    power *= period;
    ticks += power;
  }
  return static_cast<std::uint64_t>(original.stateCount()) * ticks - 1;
}

std::uint64_t clockConstant(const MultiheadAutomaton& original) {
  return static_cast<std::uint64_t>(original.stateCount()) << original.headCount();
}

}  // namespace mhv
