#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mhv/automaton.hpp"
#include "mhv/compiler.hpp"
#include "mhv/derandomizer.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Line-oriented machine files; blank lines and lines starting with # are
/// ignored. The first directive is `type 2nfa|2dfa|1nfa|verifier`.
std::variant<MultiheadAutomaton, VerifierMachine> parseMachine(std::string_view text);
MultiheadAutomaton parseAutomaton(std::string_view text);
VerifierMachine parseVerifier(std::string_view text);

/// Type written is 2dfa for deterministic machines with only two-way heads,
/// 1nfa when no head is two-way, 2nfa otherwise.
std::string serialize(const MultiheadAutomaton& machine);
std::string serialize(const VerifierMachine& verifier);

/// A verifier file followed by a `compiled` line and the embedded source
/// automaton between `begin-source` and `end-source`.
std::string serialize(const CompiledVerifier& compiled);
CompiledVerifier parseCompiled(std::string_view text);
bool isCompiled(std::string_view text);

/// Whitespace-separated tokens of the verifier's communication alphabet.
Certificate parseCertificate(const VerifierMachine& verifier, std::string_view text);
std::string formatCertificate(const VerifierMachine& verifier, const Certificate& cert);

/// One column per line, one `;`-separated entry per track (token, O or INF).
MultiTrackCertificate parseMultiTrack(const VerifierMachine& verifier, std::string_view text);
std::string formatMultiTrack(const VerifierMachine& verifier, const MultiTrackCertificate& cert);

/// One machine per line: `sent>received` pairs, or `-` for an empty transcript.
std::vector<Transcript> parseTranscripts(const VerifierMachine& verifier, std::string_view text);
std::string formatTranscripts(const VerifierMachine& verifier, const std::vector<Transcript>& transcripts);

std::string readFile(const std::string& path);

}  // namespace mhv
