#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhv/automaton.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

/// One cell of a track: a response symbol, O (the machine halted before this
/// communication) or INF (it loops without communicating again).
struct TrackEntry {
  enum class Kind { Symbol, Halted, Looping };

  Kind kind = Kind::Symbol;
  SymbolId symbol = kNullSymbol;

  static TrackEntry response(SymbolId s) { return {Kind::Symbol, s}; }
  static TrackEntry halted() { return {Kind::Halted, kNullSymbol}; }
  static TrackEntry looping() { return {Kind::Looping, kNullSymbol}; }
  bool operator==(const TrackEntry&) const = default;
};

/// columns[j][i] is the j-th entry of track i, i.e. the response claimed for
/// the j-th communication of the machine with coin string i.
struct MultiTrackCertificate {
  std::vector<std::vector<TrackEntry>> columns;

  bool operator==(const MultiTrackCertificate&) const = default;
};

/// Blocks of machine indices with identical sent transcripts.
struct TranscriptPartition {
  std::vector<std::vector<int>> blocks;

  bool refines(const TranscriptPartition& coarser) const;
  bool operator==(const TranscriptPartition&) const = default;
};

/// Machine i is V with coin string i hardwired into its states (named
/// "q@bits"); only reachable states are kept and none of them tosses coins.
std::vector<VerifierMachine> expandCoins(const VerifierMachine& verifier);

struct CheckResult {
  bool accepted = false;
  int acceptingMachines = 0;
  std::string diagnostic;
  std::vector<TranscriptPartition> partitions;  // one per column, after refinement
};

/// c(n) = |Q|(n+2).
std::uint64_t stepCutoff(const VerifierMachine& verifier, int inputLength);

/// Default column cap c(n) * 2^B.
std::uint64_t columnCap(const VerifierMachine& verifier, int inputLength);

/// Deterministic multi-track check: all machines run in parallel column by
/// column; every entry must agree with what its machine actually does, and
/// machines whose sent transcripts agree so far must receive equal responses.
/// Machines still waiting after the last column receive PAD. Accepts iff more
/// than half of the machines accept.
CheckResult checkPrivateCoin(const VerifierMachine& verifier, std::string_view input,
                             const MultiTrackCertificate& cert, std::optional<std::uint64_t> maxColumns = {});

/// (sent, received) pairs of one machine.
using Transcript = std::vector<std::pair<SymbolId, SymbolId>>;

/// Each machine is checked alone against its own transcript; a mismatching
/// sent symbol or a leftover entry makes that machine count as rejecting.
CheckResult checkPublicCoin(const VerifierMachine& verifier, std::string_view input,
                            const std::vector<Transcript>& transcripts);

/// The tracks every machine produces when all of them read the one-way
/// certificate `cert`.
MultiTrackCertificate transcribe(const VerifierMachine& verifier, std::string_view input, const Certificate& cert);

/// Per-machine transcripts implied by a multi-track certificate.
std::vector<Transcript> publicTranscripts(const VerifierMachine& verifier, std::string_view input,
                                          const MultiTrackCertificate& cert);

/// Searches the ensembles reachable by per-block responses for a
/// multi-track certificate that checkPrivateCoin accepts.
std::optional<MultiTrackCertificate> findPrivateCoinCertificate(const VerifierMachine& verifier,
                                                                std::string_view input,
                                                                std::optional<std::uint64_t> maxColumns = {});

/// One head per coin string. The control tracks every machine's state, the
/// transcript partition and the responses guessed for the current round;
/// machines advance one at a time to their next communication, and the
/// automaton accepts as soon as 2^{B-1}+1 machines have accepted.
/// Requires a one-way or real-time input head.
MultiheadAutomaton toOneWayMultihead(const VerifierMachine& verifier);

}  // namespace mhv
