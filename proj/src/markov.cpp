#include "mhv/markov.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mhv {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// States that can reach some state in `targets`.
std::vector<bool> canReach(const MarkovChain& chain, const std::vector<bool>& targets) {
  const auto n = static_cast<std::size_t>(chain.size());
  std::vector<std::vector<int>> reverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (chain.rows[i][j] != 0) reverse[j].push_back(static_cast<int>(i));
    }
  }
  std::vector<bool> reach = targets;
  std::deque<int> work;
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i]) work.push_back(static_cast<int>(i));
  }
  while (!work.empty()) {
    const int j = work.front();
    work.pop_front();
    for (int i : reverse[static_cast<std::size_t>(j)]) {
      if (!reach[static_cast<std::size_t>(i)]) {
        reach[static_cast<std::size_t>(i)] = true;
        work.push_back(i);
      }
    }
  }
  return reach;
}

// Row i of the result: absorption probabilities from state i into every
// absorbing state.
Matrix absorptionMatrix(const MarkovChain& chain) {
  const auto n = static_cast<std::size_t>(chain.size());
  std::vector<bool> absorbing(n);
  for (std::size_t i = 0; i < n; ++i) absorbing[i] = chain.isAbsorbing(static_cast<int>(i));
  const auto reach = canReach(chain, absorbing);

  std::vector<int> unknowns;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!absorbing[i] && reach[i]) {
      slot[i] = static_cast<int>(unknowns.size());
      unknowns.push_back(static_cast<int>(i));
    }
  }
  const std::size_t u = unknowns.size();
  // (I - Q) X = R, with one right-hand column per chain state.
  Matrix a(u, std::vector<Rational>(u));
  Matrix rhs(u, std::vector<Rational>(n));
  for (std::size_t r = 0; r < u; ++r) {
    const auto i = static_cast<std::size_t>(unknowns[r]);
    a[r][r] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& p = chain.rows[i][j];
      if (p == 0) continue;
      if (absorbing[j]) rhs[r][j] += p;
      else if (slot[j] >= 0) a[r][static_cast<std::size_t>(slot[j])] -= p;
    }
  }
  for (std::size_t col = 0; col < u; ++col) {
    std::size_t pivot = col;
    while (pivot < u && a[pivot][col] == 0) ++pivot;
    if (pivot == u) throw std::logic_error("singular absorption system");
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    const Rational inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (auto& x : rhs[col]) x *= inv;
    for (std::size_t r = 0; r < u; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k < u; ++k) a[r][k] -= f * a[col][k];
      for (std::size_t k = 0; k < n; ++k) rhs[r][k] -= f * rhs[col][k];
    }
  }
  Matrix result(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (absorbing[i]) result[i][i] = 1;
    else if (slot[i] >= 0) result[i] = rhs[static_cast<std::size_t>(slot[i])];
  }
  for (auto& row : result) {
    for (auto& x : row) x.canonicalize();
  }
  return result;
}

struct Move {
  enum Kind { Config, Accept, Reject } kind;
  StateId state = 0;
  int position = 0;
  Rational probability;
};

// One-step distribution of a 2pfa configuration.
std::vector<Move> stepFrom(const TwoPFA& m, const Tape& tape, StateId q, int position) {
  std::vector<Move> moves;
  const char symbol = tape.at(position);
  const bool tosses = m.kind(q) == StateKind::CoinToss;
  const std::vector<int> bits = tosses ? std::vector<int>{0, 1} : std::vector<int>{-1};
  const Rational weight = tosses ? Rational(1, 2) : Rational(1);
  for (int bit : bits) {
    const auto* t = m.transition(q, symbol, kNullSymbol, bit);
    if (t == nullptr || m.kind(t->next) == StateKind::Reject) {
      moves.push_back({Move::Reject, 0, 0, weight});
    } else if (m.kind(t->next) == StateKind::Accept) {
      moves.push_back({Move::Accept, 0, 0, weight});
    } else {
      moves.push_back({Move::Config, t->next, tape.clamp(position + t->move), weight});
    }
  }
  return moves;
}

void requireTwoPfa(const TwoPFA& machine) {
  const auto report = validate(machine);
  if (!report.ok()) throw std::invalid_argument("invalid 2pfa:\n" + report.summary());
  if (machine.hasCommunication()) throw std::invalid_argument("a 2pfa must not communicate");
}

// The machine with an extra first state that walks left to the left
// end-marker and then hands over to the original start state.
TwoPFA normalize(const TwoPFA& machine) {
  TwoPFA out(machine.alphabet(), HeadMode::TwoWay, machine.coinBudget());
  for (SymbolId s = 2; s < machine.symbolCount(); ++s) out.addSymbol(machine.symbolName(s));
  std::string walkName = "walk";
  while (machine.findState(walkName)) walkName += "'";
  const StateId walk = out.addState(walkName, StateKind::Deterministic);
  for (StateId q = 0; q < machine.stateCount(); ++q) out.addState(machine.stateName(q), machine.kind(q), machine.commSymbol(q));
  for (const auto& [key, t] : machine.transitions()) {
    out.addTransition(key.state + 1, key.input, key.response, key.bit, t.next + 1, t.move);
  }
  for (char c : machine.alphabet()) out.addTransition(walk, c, kNullSymbol, walk, -1);
  out.addTransition(walk, kEndMarker, kNullSymbol, machine.start() + 1, 0);
  out.setStart(walk);
  return out;
}

}  // namespace

bool MarkovChain::isAbsorbing(int state) const {
  const auto& row = rows.at(static_cast<std::size_t>(state));
  return row[static_cast<std::size_t>(state)] == 1;
}

bool MarkovChain::rowStochastic() const {
  for (const auto& row : rows) {
    if (row.size() != rows.size()) return false;
    Rational sum = 0;
    for (const auto& p : row) {
      if (p < 0) return false;
      sum += p;
    }
    if (sum != 1) return false;
  }
  return true;
}

std::vector<Rational> absorption(const MarkovChain& chain, int start) {
  if (start < 0 || start >= chain.size()) throw std::out_of_range("start state out of range");
  return absorptionMatrix(chain)[static_cast<std::size_t>(start)];
}

Rational acceptanceProbability2pfa(const TwoPFA& machine, std::string_view w) {
  requireTwoPfa(machine);
  requireInputOverAlphabet(machine.alphabet(), w);
  const Tape tape(w);
  const int cells = tape.rightEnd() + 1;
  const int configs = machine.stateCount() * cells;
  const int accept = configs;
  const int reject = configs + 1;
  MarkovChain chain;
  chain.rows.assign(static_cast<std::size_t>(configs + 2), std::vector<Rational>(static_cast<std::size_t>(configs + 2)));
  auto index = [&](StateId q, int pos) { return q * cells + pos; };
  for (StateId q = 0; q < machine.stateCount(); ++q) {
    for (int pos = 0; pos < cells; ++pos) {
      auto& row = chain.rows[static_cast<std::size_t>(index(q, pos))];
      if (machine.isHalting(q)) {
        row[static_cast<std::size_t>(machine.kind(q) == StateKind::Accept ? accept : reject)] = 1;
        continue;
      }
      for (const auto& mv : stepFrom(machine, tape, q, pos)) {
        const int to = mv.kind == Move::Accept ? accept : (mv.kind == Move::Reject ? reject : index(mv.state, mv.position));
        row[static_cast<std::size_t>(to)] += mv.probability;
      }
    }
  }
  chain.rows[static_cast<std::size_t>(accept)][static_cast<std::size_t>(accept)] = 1;
  chain.rows[static_cast<std::size_t>(reject)][static_cast<std::size_t>(reject)] = 1;
  return absorption(chain, index(machine.start(), 0))[static_cast<std::size_t>(accept)];
}

SplitChain buildSplitChain(const TwoPFA& machine, std::string_view x, std::string_view y) {
  requireTwoPfa(machine);
  if (x.empty() || y.empty()) throw std::invalid_argument("split chain needs non-empty x and y");
  const std::string xy = std::string(x) + std::string(y);
  requireInputOverAlphabet(machine.alphabet(), xy);
  const TwoPFA a = normalize(machine);
  const Tape tape(xy);
  const int boundary = static_cast<int>(x.size());  // last cell of ¢x; the next cell starts y¢

  std::vector<StateId> live;
  std::vector<int> liveIndex(static_cast<std::size_t>(a.stateCount()), -1);
  SplitChain split;
  for (StateId q = 0; q < a.stateCount(); ++q) {
    if (a.isHalting(q)) continue;
    liveIndex[static_cast<std::size_t>(q)] = static_cast<int>(live.size());
    live.push_back(q);
    split.stateNames.push_back(a.stateName(q));
  }
  const int c = static_cast<int>(live.size()) + 1;
  split.c = c;
  const auto total = static_cast<std::size_t>(2 * c);
  split.chain.rows.assign(total, std::vector<Rational>(total));

  // Region sub-chain: configurations inside the region, then c-1 exit
  // states, then accept and reject. Trapped mass is whatever is not absorbed.
  for (int side = 0; side < 2; ++side) {
    const int lo = side == 0 ? 0 : boundary + 1;
    const int hi = side == 0 ? boundary : tape.rightEnd();
    const int cells = hi - lo + 1;
    const int inner = static_cast<int>(live.size()) * cells;
    const int exitBase = inner;
    const int acceptAt = inner + c - 1;
    const int rejectAt = acceptAt + 1;
    MarkovChain region;
    region.rows.assign(static_cast<std::size_t>(rejectAt + 1), std::vector<Rational>(static_cast<std::size_t>(rejectAt + 1)));
    auto cell = [&](int liveId, int pos) { return liveId * cells + (pos - lo); };
    for (std::size_t l = 0; l < live.size(); ++l) {
      for (int pos = lo; pos <= hi; ++pos) {
        auto& row = region.rows[static_cast<std::size_t>(cell(static_cast<int>(l), pos))];
        for (const auto& mv : stepFrom(a, tape, live[l], pos)) {
          int to;
          if (mv.kind == Move::Accept) to = acceptAt;
          else if (mv.kind == Move::Reject) to = rejectAt;
          else if (mv.position < lo || mv.position > hi) to = exitBase + liveIndex[static_cast<std::size_t>(mv.state)];
          else to = cell(liveIndex[static_cast<std::size_t>(mv.state)], mv.position);
          row[static_cast<std::size_t>(to)] += mv.probability;
        }
      }
    }
    for (int s = exitBase; s <= rejectAt; ++s) region.rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = 1;
    const Matrix absorbed = absorptionMatrix(region);

    const int entry = side == 0 ? boundary : boundary + 1;
    const int otherBase = side == 0 ? c - 1 : 0;
    for (std::size_t l = 0; l < live.size(); ++l) {
      const auto from = static_cast<std::size_t>(side == 0 ? static_cast<int>(l) : c - 1 + static_cast<int>(l));
      const auto& probs = absorbed[static_cast<std::size_t>(cell(static_cast<int>(l), entry))];
      auto& row = split.chain.rows[from];
      Rational absorbedMass = 0;
      for (int e = 0; e < c - 1; ++e) {
        const Rational& p = probs[static_cast<std::size_t>(exitBase + e)];
        row[static_cast<std::size_t>(otherBase + e)] += p;
        absorbedMass += p;
      }
      row[static_cast<std::size_t>(split.acceptState())] += probs[static_cast<std::size_t>(acceptAt)];
      absorbedMass += probs[static_cast<std::size_t>(acceptAt)] + probs[static_cast<std::size_t>(rejectAt)];
      row[static_cast<std::size_t>(split.rejectState())] += Rational(1) - absorbedMass + probs[static_cast<std::size_t>(rejectAt)];
    }
  }
  split.chain.rows[static_cast<std::size_t>(split.rejectState())][static_cast<std::size_t>(split.rejectState())] = 1;
  split.chain.rows[static_cast<std::size_t>(split.acceptState())][static_cast<std::size_t>(split.acceptState())] = 1;

  // Closed classes of boundary states never reach a halt; send them to 2c-1.
  std::vector<bool> targets(total);
  targets[static_cast<std::size_t>(split.rejectState())] = true;
  targets[static_cast<std::size_t>(split.acceptState())] = true;
  const auto reach = canReach(split.chain, targets);
  for (std::size_t i = 0; i < total; ++i) {
    if (reach[i]) continue;
    auto& row = split.chain.rows[i];
    std::fill(row.begin(), row.end(), Rational(0));
    row[static_cast<std::size_t>(split.rejectState())] = 1;
  }
  for (auto& row : split.chain.rows) {
    for (auto& p : row) p.canonicalize();
  }
  return split;
}

std::string formatChain(const MarkovChain& chain) {
  std::ostringstream out;
  for (const auto& row : chain.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ' ';
      out << formatRational(row[j]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mhv
