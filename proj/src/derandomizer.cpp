#include "mhv/derandomizer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace mhv {

namespace {

using detail::BranchCursor;
using detail::BranchRunner;
using Status = BranchCursor::Status;
using Ensemble = std::vector<BranchCursor>;

std::size_t machineCount(const VerifierMachine& verifier) {
  return std::size_t{1} << verifier.coinBudget();
}

std::vector<BranchRunner> makeRunners(const VerifierMachine& verifier, const Tape& tape) {
  std::vector<BranchRunner> runners;
  const int budget = verifier.coinBudget();
  for (std::uint64_t i = 0; i < machineCount(verifier); ++i) runners.emplace_back(verifier, tape, coinString(i, budget));
  return runners;
}

Ensemble start(const std::vector<BranchRunner>& runners) {
  Ensemble e;
  std::uint64_t ignored = 0;
  for (const auto& runner : runners) e.push_back(runner.begin(ignored));
  return e;
}

TrackEntry expectedEntry(const BranchCursor& cursor, SymbolId response) {
  switch (cursor.status) {
    case Status::Awaiting: return TrackEntry::response(response);
    case Status::Looping: return TrackEntry::looping();
    default: return TrackEntry::halted();
  }
}

// Splits each block by the symbol its machines are sending now; machines that
// no longer communicate form their own part of the block.
std::vector<int> refine(const VerifierMachine& verifier, const Ensemble& e, const std::vector<int>& labels) {
  std::map<std::pair<int, SymbolId>, int> first;
  std::vector<int> refined(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const SymbolId sent = e[i].status == Status::Awaiting ? verifier.commSymbol(e[i].state) : -1;
    refined[i] = first.try_emplace({labels[i], sent}, static_cast<int>(i)).first->second;
  }
  return refined;
}

TranscriptPartition partitionOf(const std::vector<int>& labels) {
  std::map<int, std::vector<int>> blocks;
  for (std::size_t i = 0; i < labels.size(); ++i) blocks[labels[i]].push_back(static_cast<int>(i));
  TranscriptPartition p;
  for (auto& [label, members] : blocks) p.blocks.push_back(std::move(members));
  return p;
}

int finishAndCount(const std::vector<BranchRunner>& runners, Ensemble e) {
  int accepted = 0;
  std::uint64_t ignored = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    runners[i].finishWithPad(e[i], ignored);
    if (e[i].status == Status::Accepted) ++accepted;
  }
  return accepted;
}

bool majority(int accepted, std::size_t machines) { return static_cast<std::size_t>(2 * accepted) > machines; }

std::string entryText(const VerifierMachine& verifier, const TrackEntry& entry) {
  switch (entry.kind) {
    case TrackEntry::Kind::Halted: return "O";
    case TrackEntry::Kind::Looping: return "INF";
    case TrackEntry::Kind::Symbol:
      return entry.symbol >= 0 && entry.symbol < verifier.symbolCount() ? verifier.symbolName(entry.symbol) : "?";
  }
  return "?";
}

}  // namespace

bool TranscriptPartition::refines(const TranscriptPartition& coarser) const {
  std::map<int, int> blockOf;
  for (std::size_t b = 0; b < coarser.blocks.size(); ++b) {
    for (int i : coarser.blocks[b]) blockOf[i] = static_cast<int>(b);
  }
  for (const auto& block : blocks) {
    for (int i : block) {
      if (!blockOf.contains(i) || blockOf[i] != blockOf[block.front()]) return false;
    }
  }
  return true;
}

std::vector<VerifierMachine> expandCoins(const VerifierMachine& verifier) {
  const int budget = verifier.coinBudget();
  if (budget == 0) return {verifier};
  std::vector<VerifierMachine> machines;
  for (std::uint64_t i = 0; i < machineCount(verifier); ++i) {
    const auto coins = coinString(i, budget);
    VerifierMachine m(verifier.alphabet(), verifier.inputMode(), 0);
    for (SymbolId s = 2; s < verifier.symbolCount(); ++s) m.addSymbol(verifier.symbolName(s));
    std::map<std::pair<StateId, int>, StateId> ids;
    std::deque<std::pair<StateId, int>> work;
    std::optional<StateId> accept;
    std::optional<StateId> reject;
    auto id = [&](StateId q, int used) -> StateId {
      if (verifier.kind(q) == StateKind::Accept) {
        if (!accept) accept = m.addState("accept", StateKind::Accept);
        return *accept;
      }
      if (verifier.kind(q) == StateKind::Reject) {
        if (!reject) reject = m.addState("reject", StateKind::Reject);
        return *reject;
      }
      auto [it, inserted] = ids.try_emplace({q, used}, 0);
      if (inserted) {
        std::string name = verifier.stateName(q) + "@";
        for (int c = 0; c < used; ++c) name += coins[static_cast<std::size_t>(c)] ? '1' : '0';
        it->second = m.addState(std::move(name), StateKind::Deterministic, verifier.commSymbol(q));
        work.emplace_back(q, used);
      }
      return it->second;
    };
    m.setStart(id(verifier.start(), 0));
    while (!work.empty()) {
      const auto [q, used] = work.front();
      work.pop_front();
      const StateId from = ids.at({q, used});
      const bool tosses = verifier.kind(q) == StateKind::CoinToss;
      if (tosses && used >= budget) continue;
      const int bit = tosses ? (coins[static_cast<std::size_t>(used)] ? 1 : 0) : -1;
      for (const auto& [key, t] : verifier.transitions()) {
        if (key.state != q || key.bit != bit) continue;
        m.addTransition(from, key.input, key.response, id(t.next, used + (tosses ? 1 : 0)), t.move);
      }
    }
    if (!reject) m.addState("reject", StateKind::Reject);
    machines.push_back(std::move(m));
  }
  return machines;
}

std::uint64_t stepCutoff(const VerifierMachine& verifier, int inputLength) {
  return static_cast<std::uint64_t>(verifier.stateCount()) * static_cast<std::uint64_t>(inputLength + 2);
}

std::uint64_t columnCap(const VerifierMachine& verifier, int inputLength) {
  return stepCutoff(verifier, inputLength) * machineCount(verifier);
}

CheckResult checkPrivateCoin(const VerifierMachine& verifier, std::string_view input,
                             const MultiTrackCertificate& cert, std::optional<std::uint64_t> maxColumns) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const auto runners = makeRunners(verifier, tape);
  const std::size_t n = runners.size();
  CheckResult result;
  const std::uint64_t cap = maxColumns.value_or(columnCap(verifier, tape.length()));
  if (cert.columns.size() > cap) {
    result.diagnostic = "certificate has " + std::to_string(cert.columns.size()) + " columns, cap is " +
                        std::to_string(cap);
    return result;
  }
  Ensemble e = start(runners);
  std::vector<int> labels(n, 0);
  for (std::size_t j = 0; j < cert.columns.size(); ++j) {
    const auto& column = cert.columns[j];
    if (column.size() != n) {
      result.diagnostic = "column " + std::to_string(j) + " has " + std::to_string(column.size()) +
                          " entries, expected " + std::to_string(n);
      return result;
    }
    labels = refine(verifier, e, labels);
    result.partitions.push_back(partitionOf(labels));
    std::map<int, SymbolId> blockResponse;
    for (std::size_t i = 0; i < n; ++i) {
      const TrackEntry& entry = column[i];
      const TrackEntry expected = expectedEntry(e[i], entry.symbol);
      const bool validSymbol = entry.kind != TrackEntry::Kind::Symbol ||
                               (entry.symbol > kNullSymbol && entry.symbol < verifier.symbolCount());
      if (entry != expected || !validSymbol) {
        result.diagnostic = "column " + std::to_string(j) + " track " + std::to_string(i) + ": entry " +
                            entryText(verifier, entry) + " does not match the machine";
        return result;
      }
      if (e[i].status != Status::Awaiting) continue;
      auto [it, inserted] = blockResponse.try_emplace(labels[i], entry.symbol);
      if (!inserted && it->second != entry.symbol) {
        result.diagnostic = "column " + std::to_string(j) + " track " + std::to_string(i) +
                            ": response differs from track " + std::to_string(labels[i]) +
                            " with the same transcript";
        return result;
      }
    }
    std::uint64_t ignored = 0;
    for (std::size_t i = 0; i < n; ++i) runners[i].deliver(e[i], column[i].symbol, ignored);
  }
  result.acceptingMachines = finishAndCount(runners, e);
  result.accepted = majority(result.acceptingMachines, n);
  if (!result.accepted) {
    result.diagnostic = std::to_string(result.acceptingMachines) + " of " + std::to_string(n) +
                        " machines accept, no majority";
  }
  return result;
}

CheckResult checkPublicCoin(const VerifierMachine& verifier, std::string_view input,
                            const std::vector<Transcript>& transcripts) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const auto runners = makeRunners(verifier, tape);
  CheckResult result;
  if (transcripts.size() != runners.size()) {
    result.diagnostic = "expected " + std::to_string(runners.size()) + " transcripts, got " +
                        std::to_string(transcripts.size());
    return result;
  }
  for (std::size_t i = 0; i < runners.size(); ++i) {
    std::uint64_t ignored = 0;
    BranchCursor cursor = runners[i].begin(ignored);
    const Transcript& t = transcripts[i];
    std::size_t k = 0;
    bool faithful = true;
    for (; cursor.status == Status::Awaiting && k < t.size(); ++k) {
      if (t[k].first != verifier.commSymbol(cursor.state) || t[k].second <= kNullSymbol ||
          t[k].second >= verifier.symbolCount()) {
        faithful = false;
        break;
      }
      runners[i].deliver(cursor, t[k].second, ignored);
    }
    if (!faithful || k < t.size()) continue;
    runners[i].finishWithPad(cursor, ignored);
    if (cursor.status == Status::Accepted) ++result.acceptingMachines;
  }
  result.accepted = majority(result.acceptingMachines, runners.size());
  if (!result.accepted) {
    result.diagnostic = std::to_string(result.acceptingMachines) + " of " + std::to_string(runners.size()) +
                        " machines accept, no majority";
  }
  return result;
}

MultiTrackCertificate transcribe(const VerifierMachine& verifier, std::string_view input, const Certificate& cert) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const auto runners = makeRunners(verifier, tape);
  Ensemble e = start(runners);
  MultiTrackCertificate mtc;
  for (SymbolId symbol : cert.symbols) {
    std::vector<TrackEntry> column;
    std::uint64_t ignored = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      column.push_back(expectedEntry(e[i], symbol));
      runners[i].deliver(e[i], symbol, ignored);
    }
    mtc.columns.push_back(std::move(column));
  }
  return mtc;
}

std::vector<Transcript> publicTranscripts(const VerifierMachine& verifier, std::string_view input,
                                          const MultiTrackCertificate& cert) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const auto runners = makeRunners(verifier, tape);
  std::vector<Transcript> transcripts(runners.size());
  for (std::size_t i = 0; i < runners.size(); ++i) {
    std::uint64_t ignored = 0;
    BranchCursor cursor = runners[i].begin(ignored);
    for (const auto& column : cert.columns) {
      if (i >= column.size() || column[i].kind != TrackEntry::Kind::Symbol || cursor.status != Status::Awaiting) break;
      transcripts[i].emplace_back(verifier.commSymbol(cursor.state), column[i].symbol);
      runners[i].deliver(cursor, column[i].symbol, ignored);
    }
  }
  return transcripts;
}

std::optional<MultiTrackCertificate> findPrivateCoinCertificate(const VerifierMachine& verifier,
                                                                std::string_view input,
                                                                std::optional<std::uint64_t> maxColumns) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  const Tape tape(input);
  const auto runners = makeRunners(verifier, tape);
  const std::size_t n = runners.size();
  const std::uint64_t cap = maxColumns.value_or(columnCap(verifier, tape.length()));

  struct Node {
    Ensemble ensemble;
    std::vector<int> labels;
    int parent;
    std::vector<TrackEntry> column;  // the column leading here from the parent
    std::uint64_t depth;
  };
  std::vector<Node> nodes;
  std::set<std::pair<Ensemble, std::vector<int>>> seen;
  nodes.push_back(Node{start(runners), std::vector<int>(n, 0), -1, {}, 0});
  seen.emplace(nodes[0].ensemble, nodes[0].labels);

  std::vector<SymbolId> responses;
  for (SymbolId s = kPadSymbol; s < verifier.symbolCount(); ++s) responses.push_back(s);

  for (std::size_t index = 0; index < nodes.size(); ++index) {
    if (majority(finishAndCount(runners, nodes[index].ensemble), n)) {
      MultiTrackCertificate mtc;
      for (int at = static_cast<int>(index); nodes[static_cast<std::size_t>(at)].parent >= 0;
           at = nodes[static_cast<std::size_t>(at)].parent) {
        mtc.columns.push_back(nodes[static_cast<std::size_t>(at)].column);
      }
      std::reverse(mtc.columns.begin(), mtc.columns.end());
      return mtc;
    }
    if (nodes[index].depth >= cap) continue;
    const Ensemble current = nodes[index].ensemble;
    const std::vector<int> labels = refine(verifier, current, nodes[index].labels);
    std::vector<int> blocks;
    for (std::size_t i = 0; i < n; ++i) {
      if (current[i].status == Status::Awaiting && labels[i] == static_cast<int>(i)) blocks.push_back(static_cast<int>(i));
    }
    if (blocks.empty()) continue;
    // Odometer over one response per awaiting block.
    std::vector<std::size_t> choice(blocks.size(), 0);
    while (true) {
      std::map<int, SymbolId> answer;
      for (std::size_t b = 0; b < blocks.size(); ++b) answer[blocks[b]] = responses[choice[b]];
      Ensemble next = current;
      std::vector<TrackEntry> column;
      std::uint64_t ignored = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const SymbolId response = current[i].status == Status::Awaiting ? answer.at(labels[i]) : kNullSymbol;
        column.push_back(expectedEntry(current[i], response));
        runners[i].deliver(next[i], response, ignored);
      }
      if (seen.emplace(next, labels).second) {
        nodes.push_back(Node{std::move(next), labels, static_cast<int>(index), std::move(column),
                             nodes[index].depth + 1});
      }
      std::size_t b = 0;
      while (b < choice.size() && ++choice[b] == responses.size()) choice[b++] = 0;
      if (b == choice.size()) break;
    }
  }
  return std::nullopt;
}

}  // namespace mhv
