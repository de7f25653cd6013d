#include "mhv/compiler.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mhv {

namespace {

std::string_view controlName(TrackControl control) {
  switch (control) {
    case TrackControl::Step: return "STEP";
    case TrackControl::Rewind: return "REWIND";
    case TrackControl::NextCopy: return "NEXTCOPY";
    case TrackControl::End: return "END";
  }
  return "?";
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const auto end = text.find(sep, begin);
    parts.emplace_back(text.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
    if (end == std::string_view::npos) return parts;
    begin = end + 1;
  }
}

// Every k-tuple over the tape symbols, in lexicographic order of `symbols`.
std::vector<std::string> allTuples(const std::string& symbols, int k) {
  std::vector<std::string> tuples{""};
  for (int h = 0; h < k; ++h) {
    std::vector<std::string> longer;
    for (const auto& prefix : tuples) {
      for (char c : symbols) longer.push_back(prefix + c);
    }
    tuples = std::move(longer);
  }
  return tuples;
}

enum class Side { Left = 0, Right = 1 };

struct Node {
  enum Kind { Gadget, Toss, Sim, Rewind } kind;
  int copy = 0;
  int path = 0;
  StateId q = 0;
  Side side = Side::Left;
  int tossed = 0;
  int value = 0;

  auto key() const { return std::make_tuple(kind, copy, path, q, side, tossed, value); }
};

class Builder {
 public:
  Builder(const MultiheadAutomaton& source, int r, int m, bool strong)
      : source_(source), r_(r), m_(m), strong_(strong), k_(source.headCount()),
        verifier_(source.alphabet(), HeadMode::TwoWay, m * r + (strong ? r + 1 : 0)) {
    symbols_ = std::string(1, kEndMarker) + source.alphabet();
    tuples_ = allTuples(symbols_, k_);
    maxChoices_ = 1;
    for (StateId q = 0; q < source.stateCount(); ++q) {
      for (const auto& t : tuples_) maxChoices_ = std::max(maxChoices_, static_cast<int>(source.matching(q, t).size()));
    }
    request_ = verifier_.addSymbol("REQ");
    for (const auto& t : tuples_) {
      for (int c = 0; c < maxChoices_; ++c) {
        stepIds_[{t, c}] = verifier_.addSymbol(formatTrackSymbol(TrackSymbol{t, c, TrackControl::Step}));
      }
    }
    rewind_ = verifier_.addSymbol(formatTrackSymbol(TrackSymbol{"", 0, TrackControl::Rewind}));
    nextCopy_ = verifier_.addSymbol(formatTrackSymbol(TrackSymbol{"", 0, TrackControl::NextCopy}));
    end_ = verifier_.addSymbol(formatTrackSymbol(TrackSymbol{"", 0, TrackControl::End}));
    accept_ = verifier_.addState("accept", StateKind::Accept);
    reject_ = verifier_.addState("reject", StateKind::Reject);
  }

  VerifierMachine build() {
    const StateId start = strong_ ? state(Node{Node::Gadget}) : copyEntry(0);
    verifier_.setStart(start);
    while (!work_.empty()) {
      const auto [node, id] = work_.front();
      work_.pop_front();
      expand(node, id);
    }
    return std::move(verifier_);
  }

 private:
  StateId state(const Node& node) {
    auto it = ids_.find(node.key());
    if (it != ids_.end()) return it->second;
    std::string name;
    StateKind kind = StateKind::Deterministic;
    SymbolId comm = kNullSymbol;
    const std::string side = node.side == Side::Left ? "L" : "R";
    switch (node.kind) {
      case Node::Gadget:
        name = "gadget." + std::to_string(node.tossed) + "." + std::to_string(node.value);
        kind = StateKind::CoinToss;
        break;
      case Node::Toss:
        name = "toss." + std::to_string(node.copy) + "." + std::to_string(node.tossed) + "." +
               std::to_string(node.value);
        kind = StateKind::CoinToss;
        break;
      case Node::Sim:
        name = "sim." + std::to_string(node.copy) + "." + std::to_string(node.path) + "." +
               std::to_string(node.q) + "." + side;
        comm = request_;
        break;
      case Node::Rewind:
        name = "rewind." + std::to_string(node.copy) + "." + std::to_string(node.path) + "." + side;
        comm = request_;
        break;
    }
    const StateId id = verifier_.addState(std::move(name), kind, comm);
    ids_.emplace(node.key(), id);
    work_.emplace_back(node, id);
    return id;
  }

  StateId follow(int copy, int path, StateId q, Side side) {
    Node node{source_.isAccepting(q) ? Node::Rewind : Node::Sim};
    node.copy = copy;
    node.path = path;
    node.q = source_.isAccepting(q) ? 0 : q;
    node.side = side;
    return state(node);
  }

  StateId copyEntry(int copy) {
    if (r_ == 0) return follow(copy, 0, source_.start(), Side::Left);
    Node node{Node::Toss};
    node.copy = copy;
    return state(node);
  }

  void expand(const Node& node, StateId id) {
    switch (node.kind) {
      case Node::Gadget: {
        for (int bit = 0; bit < 2; ++bit) {
          const int value = 2 * node.value + bit;
          StateId next;
          if (node.tossed + 1 <= r_) {
            Node n{Node::Gadget};
            n.tossed = node.tossed + 1;
            n.value = value;
            next = state(n);
          } else {
            next = value < (1 << r_) - 1 ? reject_ : copyEntry(0);
          }
          verifier_.addTransition(id, kEndMarker, kNullSymbol, bit, next, 0);
        }
        return;
      }
      case Node::Toss: {
        for (int bit = 0; bit < 2; ++bit) {
          const int value = 2 * node.value + bit;
          StateId next;
          if (node.tossed + 1 < r_) {
            Node n{Node::Toss};
            n.copy = node.copy;
            n.tossed = node.tossed + 1;
            n.value = value;
            next = state(n);
          } else {
            next = follow(node.copy, value < k_ ? value : 0, source_.start(), Side::Left);
          }
          verifier_.addTransition(id, kEndMarker, kNullSymbol, bit, next, 0);
        }
        return;
      }
      case Node::Sim: {
        for (const auto& tuple : tuples_) {
          const char own = tuple[static_cast<std::size_t>(node.path)];
          const auto options = source_.matching(node.q, tuple);
          for (std::size_t c = 0; c < options.size(); ++c) {
            const MhTransition& t = *options[c];
            int move = t.moves[static_cast<std::size_t>(node.path)];
            const bool escapes = own == kEndMarker && ((node.side == Side::Left && move == -1) ||
                                                       (node.side == Side::Right && move == 1));
            if (escapes) {
              if (!source_.isAccepting(t.next)) continue;
              move = 0;
            }
            const Side side = move == 1 ? Side::Right : (move == -1 ? Side::Left : node.side);
            const StateId next = follow(node.copy, node.path, t.next, side);
            verifier_.addTransition(id, own, stepIds_.at({tuple, static_cast<int>(c)}), next, move);
          }
        }
        return;
      }
      case Node::Rewind: {
        Node back = node;
        back.side = Side::Left;
        const StateId rewound = state(back);
        const bool last = node.copy == m_ - 1;
        for (char sigma : symbols_) {
          const bool atLeftEnd = sigma == kEndMarker && node.side == Side::Left;
          verifier_.addTransition(id, sigma, rewind_, rewound, atLeftEnd ? 0 : -1);
          if (atLeftEnd && !last) verifier_.addTransition(id, sigma, nextCopy_, copyEntry(node.copy + 1), 0);
          if (last) verifier_.addTransition(id, sigma, end_, accept_, 0);
        }
        return;
      }
    }
  }

  const MultiheadAutomaton& source_;
  int r_;
  int m_;
  bool strong_;
  int k_;
  VerifierMachine verifier_;
  std::string symbols_;
  std::vector<std::string> tuples_;
  int maxChoices_ = 1;
  SymbolId request_ = 0;
  std::map<std::pair<std::string, int>, SymbolId> stepIds_;
  SymbolId rewind_ = 0;
  SymbolId nextCopy_ = 0;
  SymbolId end_ = 0;
  StateId accept_ = 0;
  StateId reject_ = 0;
  std::map<decltype(Node{}.key()), StateId> ids_;
  std::deque<std::pair<Node, StateId>> work_;
};

void requireCompilable(const MultiheadAutomaton& machine) {
  const auto report = validate(machine);
  if (!report.ok()) throw std::invalid_argument("invalid automaton:\n" + report.summary());
  if (machine.headCount() < 1) throw std::invalid_argument("automaton needs at least one head");
}

}  // namespace

std::string formatTrackSymbol(const TrackSymbol& symbol) {
  std::string out = "(";
  if (symbol.control == TrackControl::Step) {
    for (std::size_t i = 0; i < symbol.scanned.size(); ++i) {
      if (i > 0) out += ',';
      if (symbol.scanned[i] == kEndMarker) out += "CENT";
      else out += symbol.scanned[i];
    }
  } else {
    out += '-';
  }
  out += '|';
  out += std::to_string(symbol.choice);
  out += '|';
  out += controlName(symbol.control);
  out += ')';
  return out;
}

std::optional<TrackSymbol> parseTrackSymbol(std::string_view token) {
  if (token.size() < 2 || token.front() != '(' || token.back() != ')') return std::nullopt;
  const auto parts = split(token.substr(1, token.size() - 2), '|');
  if (parts.size() != 3) return std::nullopt;
  TrackSymbol symbol;
  static const std::map<std::string, TrackControl, std::less<>> controls{
      {"STEP", TrackControl::Step}, {"REWIND", TrackControl::Rewind},
      {"NEXTCOPY", TrackControl::NextCopy}, {"END", TrackControl::End}};
  auto control = controls.find(parts[2]);
  if (control == controls.end()) return std::nullopt;
  symbol.control = control->second;
  try {
    std::size_t used = 0;
    symbol.choice = std::stoi(parts[1], &used);
    if (used != parts[1].size() || symbol.choice < 0) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (symbol.control != TrackControl::Step) {
    if (parts[0] != "-") return std::nullopt;
    return symbol;
  }
  for (const auto& cell : split(parts[0], ',')) {
    if (cell == "CENT") symbol.scanned += kEndMarker;
    else if (cell.size() == 1) symbol.scanned += cell[0];
    else return std::nullopt;
  }
  return symbol;
}

std::string_view toString(CompiledKind kind) { return kind == CompiledKind::Weak ? "weak" : "strong"; }

int bitsForHeads(int k) {
  if (k < 1) throw std::invalid_argument("head count must be positive");
  int r = 0;
  while ((1 << r) < k) ++r;
  return r;
}

int copiesFor(int r, const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie strictly between 0 and 1");
  const Rational base = Rational(1) - inversePowerOfTwo(static_cast<unsigned>(r));
  int m = 1;
  Rational error = base;
  while (error > eps) {
    ++m;
    error *= base;
  }
  return m;
}

CompiledVerifier compileWeak(const MultiheadAutomaton& machine, const Rational& eps) {
  requireCompilable(machine);
  const int r = bitsForHeads(machine.headCount());
  const int m = copiesFor(r, eps);
  CompiledVerifier compiled;
  compiled.verifier = Builder(machine, r, m, false).build();
  compiled.r = r;
  compiled.m = m;
  compiled.source = machine;
  compiled.kind = CompiledKind::Weak;
  compiled.epsilon = eps;
  return compiled;
}

CompiledVerifier compileStrong(const MultiheadAutomaton& machine) {
  requireCompilable(machine);
  const int r = bitsForHeads(machine.headCount());
  CompiledVerifier compiled;
  compiled.verifier = Builder(machine, r, 1, true).build();
  compiled.r = r;
  compiled.m = 1;
  compiled.source = machine;
  compiled.kind = CompiledKind::Strong;
  compiled.epsilon = (power(Rational(2), static_cast<unsigned>(2 * r)) - 1) *
                     inversePowerOfTwo(static_cast<unsigned>(2 * r + 1));
  compiled.epsilon.canonicalize();
  return compiled;
}

Certificate honestCertificate(const CompiledVerifier& compiled, std::string_view input) {
  const auto run = acceptingPath(compiled.source, input);
  if (!run) throw std::invalid_argument("not a member: no accepting run on \"" + std::string(input) + "\"");
  const Tape tape(input);
  const VerifierMachine& v = compiled.verifier;
  auto id = [&](const TrackSymbol& symbol) {
    auto found = v.findSymbol(formatTrackSymbol(symbol));
    if (!found) throw std::logic_error("compiled verifier lacks token " + formatTrackSymbol(symbol));
    return *found;
  };
  std::vector<SymbolId> copy;
  for (const auto& step : run->steps) {
    std::string scanned;
    for (int position : step.config.heads) scanned += tape.at(position);
    copy.push_back(id(TrackSymbol{scanned, step.choice, TrackControl::Step}));
  }
  const int farthest = *std::max_element(run->final.heads.begin(), run->final.heads.end());
  Certificate cert;
  for (int j = 0; j < compiled.m; ++j) {
    cert.symbols.insert(cert.symbols.end(), copy.begin(), copy.end());
    if (j + 1 < compiled.m) {
      cert.symbols.insert(cert.symbols.end(), static_cast<std::size_t>(farthest),
                          id(TrackSymbol{"", 0, TrackControl::Rewind}));
      cert.symbols.push_back(id(TrackSymbol{"", 0, TrackControl::NextCopy}));
    } else {
      cert.symbols.push_back(id(TrackSymbol{"", 0, TrackControl::End}));
    }
  }
  return cert;
}

int honestLengthBound(const CompiledVerifier& compiled, int inputLength) {
  const auto runBound = configurationBound(compiled.source, inputLength);
  return static_cast<int>(static_cast<std::uint64_t>(compiled.m) * runBound +
                          static_cast<std::uint64_t>(compiled.m - 1) * static_cast<std::uint64_t>(inputLength + 1));
}

std::uint64_t honestStepBound(const CompiledVerifier& compiled, int inputLength) {
  return 4 * static_cast<std::uint64_t>(compiled.m) * configurationBound(compiled.source, inputLength);
}

}  // namespace mhv
