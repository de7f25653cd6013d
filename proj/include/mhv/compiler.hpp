#pragma once

#include <optional>
#include <string>

#include "mhv/automaton.hpp"
#include "mhv/rational.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

enum class TrackControl { Step, Rewind, NextCopy, End };

/// One certificate symbol of a compiled verifier. Step symbols carry the k
/// scanned symbols and a choice index; control symbols carry neither.
struct TrackSymbol {
  std::string scanned;
  int choice = 0;
  TrackControl control = TrackControl::Step;

  bool operator==(const TrackSymbol&) const = default;
};

/// "(a,CENT|0|STEP)", "(-|0|REWIND)", ...
std::string formatTrackSymbol(const TrackSymbol& symbol);
std::optional<TrackSymbol> parseTrackSymbol(std::string_view token);

enum class CompiledKind { Weak, Strong };

std::string_view toString(CompiledKind kind);

struct CompiledVerifier {
  VerifierMachine verifier;
  int r = 0;
  int m = 1;
  MultiheadAutomaton source;
  CompiledKind kind = CompiledKind::Weak;
  Rational epsilon;  // weak soundness target; for strong, the bound (2^{2r}-1)/2^{2r+1}
};

/// ceil(log2 k), with 0 for k = 1.
int bitsForHeads(int k);

/// Least m >= 1 with (1 - 2^-r)^m <= eps.
int copiesFor(int r, const Rational& eps);

/// Each copy picks a path from r coins on the left end-marker (surplus
/// outcomes alias to path 0); a path follows the certified run while
/// checking its own head's symbol. Copies are chained by REWIND symbols and
/// NEXTCOPY, and the last copy ends with END.
CompiledVerifier compileWeak(const MultiheadAutomaton& machine, const Rational& eps);

/// One copy behind an (r+1)-coin gadget that rejects outright when the gadget
/// value is below 2^r - 1.
CompiledVerifier compileStrong(const MultiheadAutomaton& machine);

/// The shortest accepting run transcribed once per copy. Throws
/// std::invalid_argument for non-members.
Certificate honestCertificate(const CompiledVerifier& compiled, std::string_view input);

/// Upper bound on the length of any honest certificate for inputs of length n:
/// m(L+1) + (m-1)(n+1), where L = |Q|(n+2)^k - 1 bounds a shortest run.
int honestLengthBound(const CompiledVerifier& compiled, int inputLength);

/// Bound on the steps of any branch reading an honest certificate:
/// 4m|Q|(n+2)^k.
std::uint64_t honestStepBound(const CompiledVerifier& compiled, int inputLength);

}  // namespace mhv
