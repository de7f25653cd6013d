#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "mhv/automaton.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

struct LanguageOracle {
  std::string name;
  std::string alphabet;
  std::function<bool(std::string_view)> contains;
};

/// x = w c w with w over {a,b}.
bool twinOracle(std::string_view x);

/// x = a^s b a^{y1} b ... a^{yt} b with s, y_i >= 1, t >= 1, and some prefix
/// sum y1 + ... + yk equal to s.
bool nhOracle(std::string_view x);

/// "twin", "nh", "even" (even length over {a,b}) or "all" (every string over {a,b}).
std::optional<LanguageOracle> oracleByName(std::string_view name);

/// Real-time, three coins. The first coin picks a branch on the left
/// end-marker; the next two are tossed on cells 1 and 2 and reject when both
/// are 0. Branch 1 matches the certificate against the part before the first
/// c and checks that no second c follows; branch 2 matches it against the part
/// after the first c. Members accept with probability 3/4 on the certificate w.
VerifierMachine buildTwinVerifier();

/// Same shape for NH with certificate a^s #. Branch 1 checks s against the
/// leading block and the overall format; branch 2 spends one certificate a per
/// input a after the first b and needs # exactly at a block boundary.
VerifierMachine buildNhVerifier();

/// Deterministic one-way two-head TWIN recognizer: head 2 runs to the cell
/// after the first c, then both heads compare in lockstep.
MultiheadAutomaton buildTwinRecognizer2Head();

}  // namespace mhv
