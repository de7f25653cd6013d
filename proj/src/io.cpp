#include "mhv/io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace mhv {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

struct Line {
  int number;
  std::vector<std::string> words;
};

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<std::string> rawLines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool isComment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t");
  return first == std::string::npos || line[first] == '#';
}

std::vector<Line> contentLines(std::string_view text) {
  std::vector<Line> out;
  const auto lines = rawLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (isComment(lines[i])) continue;
    out.push_back(Line{static_cast<int>(i + 1), words(lines[i])});
  }
  return out;
}

std::string spellSymbol(char c) {
  if (c == kEndMarker) return "CENT";
  return std::string(1, c);
}

char readSymbol(const std::string& word, int line, bool allowWildcard) {
  if (word == "CENT") return kEndMarker;
  if (word.size() != 1) throw ParseError(line, "bad tape symbol '" + word + "'");
  if (word[0] == kAnySymbol && !allowWildcard) throw ParseError(line, "wildcard not allowed here");
  return word[0];
}

int readInt(const std::string& word, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(word, &used);
    if (used == word.size()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "bad " + what + " '" + word + "'");
}

std::vector<std::string> splitOn(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string moveText(int move) { return move > 0 ? "+" + std::to_string(move) : std::to_string(move); }

void expectWords(const Line& line, std::size_t count, const std::string& usage) {
  if (line.words.size() != count) throw ParseError(line.number, "expected `" + usage + "`");
}

std::string typeOf(const MultiheadAutomaton& m) {
  bool anyTwoWay = false;
  bool allTwoWay = true;
  for (auto mode : m.modes()) {
    anyTwoWay = anyTwoWay || mode == HeadMode::TwoWay;
    allTwoWay = allTwoWay && mode == HeadMode::TwoWay;
  }
  if (!anyTwoWay) return "1nfa";
  if (allTwoWay && m.isDeterministic()) return "2dfa";
  return "2nfa";
}

MultiheadAutomaton buildAutomaton(const std::vector<Line>& lines) {
  std::optional<std::string> type;
  std::optional<int> heads;
  std::optional<std::vector<HeadMode>> modes;
  std::string alphabet;
  std::optional<MultiheadAutomaton> m;
  bool started = false;
  auto state = [&](const std::string& name, int line) {
    if (!m) throw ParseError(line, "states must be declared first");
    auto id = m->findState(name);
    if (!id) throw ParseError(line, "unknown state '" + name + "'");
    return *id;
  };
  for (const auto& line : lines) {
    const auto& w = line.words;
    const std::string& directive = w[0];
    if (!type && directive != "type") throw ParseError(line.number, "file must start with `type`");
    if (directive == "type") {
      expectWords(line, 2, "type 2nfa|2dfa|1nfa");
      if (w[1] != "2nfa" && w[1] != "2dfa" && w[1] != "1nfa") throw ParseError(line.number, "unknown type '" + w[1] + "'");
      type = w[1];
    } else if (directive == "heads") {
      expectWords(line, 2, "heads <k>");
      heads = readInt(w[1], line.number, "head count");
      if (*heads < 1) throw ParseError(line.number, "head count must be positive");
    } else if (directive == "modes") {
      if (!heads) throw ParseError(line.number, "`heads` must come before `modes`");
      if (static_cast<int>(w.size()) != *heads + 1) throw ParseError(line.number, "expected one mode per head");
      modes.emplace();
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto mode = parseHeadMode(w[i]);
        if (!mode) throw ParseError(line.number, "unknown head mode '" + w[i] + "'");
        modes->push_back(*mode);
      }
    } else if (directive == "alphabet") {
      if (w.size() > 2) throw ParseError(line.number, "expected `alphabet <symbols>`");
      alphabet = w.size() == 2 ? w[1] : "";
      for (char c : alphabet) {
        if (c == kAnySymbol || c == ',') throw ParseError(line.number, "reserved character in alphabet");
      }
    } else if (directive == "states") {
      if (!heads || !modes) throw ParseError(line.number, "`heads` and `modes` must come before `states`");
      if (m) throw ParseError(line.number, "duplicate `states`");
      m.emplace(alphabet, *modes);
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (m->findState(w[i])) throw ParseError(line.number, "duplicate state '" + w[i] + "'");
        m->addState(w[i]);
      }
    } else if (directive == "start") {
      expectWords(line, 2, "start <state>");
      m->setStart(state(w[1], line.number));
      started = true;
    } else if (directive == "accept") {
      for (std::size_t i = 1; i < w.size(); ++i) m->setAccepting(state(w[i], line.number), true);
    } else if (directive == "trans") {
      expectWords(line, 6, "trans <from> <symbols> -> <to> <moves>");
      if (w[3] != "->") throw ParseError(line.number, "expected `->`");
      const StateId from = state(w[1], line.number);
      const StateId to = state(w[4], line.number);
      std::string pattern;
      for (const auto& cell : splitOn(w[2], ',')) pattern += readSymbol(cell, line.number, true);
      std::vector<int> moves;
      for (const auto& cell : splitOn(w[5], ',')) moves.push_back(readInt(cell, line.number, "move"));
      if (static_cast<int>(pattern.size()) != *heads || static_cast<int>(moves.size()) != *heads) {
        throw ParseError(line.number, "transition arity differs from the head count");
      }
      for (char c : pattern) {
        if (c != kEndMarker && c != kAnySymbol && alphabet.find(c) == std::string::npos) {
          throw ParseError(line.number, "undeclared symbol '" + std::string(1, c) + "'");
        }
      }
      m->addTransition(from, pattern, to, moves);
    } else {
      throw ParseError(line.number, "unknown directive '" + directive + "'");
    }
  }
  if (!m) throw ParseError(0, "missing `states`");
  if (!started) throw ParseError(0, "missing `start`");
  if (*type == "2dfa" && !m->isDeterministic()) throw ParseError(0, "type 2dfa but the transitions are nondeterministic");
  if (*type == "1nfa") {
    for (auto mode : m->modes()) {
      if (mode == HeadMode::TwoWay) throw ParseError(0, "type 1nfa but a head is two-way");
    }
  }
  return *m;
}

StateKind readKind(const std::string& word, int line) {
  if (word == "D") return StateKind::Deterministic;
  if (word == "R") return StateKind::CoinToss;
  if (word == "accept") return StateKind::Accept;
  if (word == "reject") return StateKind::Reject;
  throw ParseError(line, "unknown state kind '" + word + "'");
}

VerifierMachine buildVerifier(const std::vector<Line>& lines) {
  bool typed = false;
  std::string alphabet;
  HeadMode mode = HeadMode::TwoWay;
  int coins = 0;
  std::optional<VerifierMachine> v;
  bool started = false;
  auto ensure = [&]() -> VerifierMachine& {
    if (!v) v.emplace(alphabet, mode, coins);
    return *v;
  };
  auto symbol = [&](const std::string& name, int line) {
    auto id = ensure().findSymbol(name);
    if (!id) throw ParseError(line, "unknown communication symbol '" + name + "'");
    return *id;
  };
  auto state = [&](const std::string& name, int line) {
    auto id = ensure().findState(name);
    if (!id) throw ParseError(line, "unknown state '" + name + "'");
    return *id;
  };
  for (const auto& line : lines) {
    const auto& w = line.words;
    const std::string& directive = w[0];
    if (!typed && directive != "type") throw ParseError(line.number, "file must start with `type`");
    const bool header = directive == "type" || directive == "alphabet" || directive == "mode" || directive == "coins";
    if (header && v) throw ParseError(line.number, "`" + directive + "` must precede symbols and states");
    if (directive == "type") {
      expectWords(line, 2, "type verifier");
      if (w[1] != "verifier") throw ParseError(line.number, "expected `type verifier`");
      typed = true;
    } else if (directive == "alphabet") {
      if (w.size() > 2) throw ParseError(line.number, "expected `alphabet <symbols>`");
      alphabet = w.size() == 2 ? w[1] : "";
    } else if (directive == "mode") {
      expectWords(line, 2, "mode two-way|one-way|real-time");
      auto parsed = parseHeadMode(w[1]);
      if (!parsed) throw ParseError(line.number, "unknown head mode '" + w[1] + "'");
      mode = *parsed;
    } else if (directive == "coins") {
      expectWords(line, 2, "coins <B>");
      coins = readInt(w[1], line.number, "coin budget");
      if (coins < 0 || coins > 62) throw ParseError(line.number, "coin budget out of range");
    } else if (directive == "comm") {
      for (std::size_t i = 1; i < w.size(); ++i) ensure().addSymbol(w[i]);
    } else if (directive == "state") {
      if (w.size() != 3 && w.size() != 4) throw ParseError(line.number, "expected `state <name> <D|R|accept|reject> [comm]`");
      if (ensure().findState(w[1])) throw ParseError(line.number, "duplicate state '" + w[1] + "'");
      const StateKind kind = readKind(w[2], line.number);
      const SymbolId comm = w.size() == 4 ? symbol(w[3], line.number) : kNullSymbol;
      ensure().addState(w[1], kind, comm);
    } else if (directive == "start") {
      expectWords(line, 2, "start <state>");
      ensure().setStart(state(w[1], line.number));
      started = true;
    } else if (directive == "trans") {
      if (w.size() != 7 && w.size() != 8) {
        throw ParseError(line.number, "expected `trans <state> <input> <response> [bit] -> <next> <move>`");
      }
      const bool hasBit = w.size() == 8;
      const std::size_t arrow = hasBit ? 5 : 4;
      if (w[arrow] != "->") throw ParseError(line.number, "expected `->`");
      const StateId from = state(w[1], line.number);
      const char input = readSymbol(w[2], line.number, false);
      const SymbolId response = symbol(w[3], line.number);
      const bool tosses = v->kind(from) == StateKind::CoinToss;
      if (hasBit != tosses) throw ParseError(line.number, "a coin bit is required exactly for R states");
      int bit = -1;
      if (hasBit) {
        bit = readInt(w[4], line.number, "coin bit");
        if (bit != 0 && bit != 1) throw ParseError(line.number, "coin bit must be 0 or 1");
      }
      if (input != kEndMarker && !v->inAlphabet(input)) {
        throw ParseError(line.number, "undeclared symbol '" + w[2] + "'");
      }
      const StateId to = state(w[arrow + 1], line.number);
      const int move = readInt(w[arrow + 2], line.number, "move");
      if (v->transition(from, input, response, bit) != nullptr) throw ParseError(line.number, "duplicate transition");
      v->addTransition(from, input, response, bit, to, move);
    } else {
      throw ParseError(line.number, "unknown directive '" + directive + "'");
    }
  }
  if (!typed) throw ParseError(0, "empty machine file");
  if (!started) throw ParseError(0, "missing `start`");
  return ensure();
}

std::string firstType(const std::vector<Line>& lines) {
  if (lines.empty() || lines[0].words[0] != "type" || lines[0].words.size() != 2) {
    throw ParseError(lines.empty() ? 0 : lines[0].number, "file must start with `type`");
  }
  return lines[0].words[1];
}

SymbolId readToken(const VerifierMachine& v, const std::string& token, int line) {
  auto id = v.findSymbol(token);
  if (!id || *id == kNullSymbol) throw ParseError(line, "unknown certificate symbol '" + token + "'");
  return *id;
}

}  // namespace

std::variant<MultiheadAutomaton, VerifierMachine> parseMachine(std::string_view text) {
  const auto lines = contentLines(text);
  if (firstType(lines) == "verifier") return buildVerifier(lines);
  return buildAutomaton(lines);
}

MultiheadAutomaton parseAutomaton(std::string_view text) {
  auto parsed = parseMachine(text);
  if (auto* m = std::get_if<MultiheadAutomaton>(&parsed)) return std::move(*m);
  throw ParseError(0, "expected a multihead automaton, found a verifier");
}

VerifierMachine parseVerifier(std::string_view text) {
  if (isCompiled(text)) return parseCompiled(text).verifier;
  auto parsed = parseMachine(text);
  if (auto* v = std::get_if<VerifierMachine>(&parsed)) return std::move(*v);
  throw ParseError(0, "expected a verifier, found a multihead automaton");
}

std::string serialize(const MultiheadAutomaton& m) {
  std::ostringstream out;
  out << "type " << typeOf(m) << '\n';
  out << "heads " << m.headCount() << '\n';
  out << "modes";
  for (auto mode : m.modes()) out << ' ' << toString(mode);
  out << '\n';
  out << "alphabet " << m.alphabet() << '\n';
  out << "states";
  for (StateId s = 0; s < m.stateCount(); ++s) out << ' ' << m.stateName(s);
  out << '\n';
  out << "start " << m.stateName(m.start()) << '\n';
  out << "accept";
  for (StateId s = 0; s < m.stateCount(); ++s) {
    if (m.isAccepting(s)) out << ' ' << m.stateName(s);
  }
  out << '\n';
  for (StateId s = 0; s < m.stateCount(); ++s) {
    for (const auto& t : m.transitionsFrom(s)) {
      out << "trans " << m.stateName(s) << ' ';
      for (std::size_t i = 0; i < t.pattern.size(); ++i) out << (i ? "," : "") << spellSymbol(t.pattern[i]);
      out << " -> " << m.stateName(t.next) << ' ';
      for (std::size_t i = 0; i < t.moves.size(); ++i) out << (i ? "," : "") << moveText(t.moves[i]);
      out << '\n';
    }
  }
  return out.str();
}

std::string serialize(const VerifierMachine& v) {
  std::ostringstream out;
  out << "type verifier\n";
  out << "alphabet " << v.alphabet() << '\n';
  out << "mode " << toString(v.inputMode()) << '\n';
  out << "coins " << v.coinBudget() << '\n';
  if (v.symbolCount() > 2) {
    out << "comm";
    for (SymbolId s = 2; s < v.symbolCount(); ++s) out << ' ' << v.symbolName(s);
    out << '\n';
  }
  for (StateId s = 0; s < v.stateCount(); ++s) {
    out << "state " << v.stateName(s) << ' ' << toString(v.kind(s));
    if (v.communicates(s)) out << ' ' << v.symbolName(v.commSymbol(s));
    out << '\n';
  }
  out << "start " << v.stateName(v.start()) << '\n';
  for (const auto& [key, t] : v.transitions()) {
    out << "trans " << v.stateName(key.state) << ' ' << spellSymbol(key.input) << ' ' << v.symbolName(key.response);
    if (key.bit >= 0) out << ' ' << key.bit;
    out << " -> " << v.stateName(t.next) << ' ' << moveText(t.move) << '\n';
  }
  return out.str();
}

std::string serialize(const CompiledVerifier& compiled) {
  std::ostringstream out;
  out << serialize(compiled.verifier);
  out << "compiled " << toString(compiled.kind) << ' ' << compiled.r << ' ' << compiled.m << ' '
      << formatRational(compiled.epsilon) << '\n';
  out << "begin-source\n" << serialize(compiled.source) << "end-source\n";
  return out.str();
}

bool isCompiled(std::string_view text) {
  for (const auto& line : rawLines(text)) {
    const auto w = words(line);
    if (!w.empty() && w[0] == "compiled") return true;
  }
  return false;
}

CompiledVerifier parseCompiled(std::string_view text) {
  auto lines = rawLines(text);
  std::string sourceText;
  std::optional<std::vector<std::string>> header;
  int headerLine = 0;
  bool inSource = false;
  bool sawSource = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto w = words(lines[i]);
    if (inSource) {
      if (!w.empty() && w[0] == "end-source") {
        inSource = false;
      } else {
        sourceText += lines[i];
      }
      sourceText += '\n';
      lines[i].clear();
      continue;
    }
    if (w.empty() || isComment(lines[i])) continue;
    if (w[0] == "begin-source") {
      inSource = true;
      sawSource = true;
      sourceText.append(i + 1, '\n');
      lines[i].clear();
    } else if (w[0] == "compiled") {
      header = w;
      headerLine = static_cast<int>(i + 1);
      lines[i].clear();
    }
  }
  if (inSource) throw ParseError(0, "missing `end-source`");
  if (!header || !sawSource) throw ParseError(0, "not a compiled verifier file");
  const auto& h = *header;
  if (h.size() != 5 || (h[1] != "weak" && h[1] != "strong")) {
    throw ParseError(headerLine, "expected `compiled weak|strong <r> <m> <eps>`");
  }
  std::string rest;
  for (const auto& l : lines) rest += l + '\n';
  CompiledVerifier c;
  auto parsed = parseMachine(rest);
  auto* v = std::get_if<VerifierMachine>(&parsed);
  if (!v) throw ParseError(0, "compiled file must hold a verifier");
  c.verifier = std::move(*v);
  c.kind = h[1] == "weak" ? CompiledKind::Weak : CompiledKind::Strong;
  c.r = readInt(h[2], headerLine, "r");
  c.m = readInt(h[3], headerLine, "m");
  try {
    c.epsilon = parseRational(h[4]);
  } catch (const std::invalid_argument&) {
    throw ParseError(headerLine, "bad rational '" + h[4] + "'");
  }
  c.source = parseAutomaton(sourceText);
  return c;
}

Certificate parseCertificate(const VerifierMachine& v, std::string_view text) {
  Certificate cert;
  const auto lines = rawLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& token : words(lines[i])) cert.symbols.push_back(readToken(v, token, static_cast<int>(i + 1)));
  }
  return cert;
}

std::string formatCertificate(const VerifierMachine& v, const Certificate& cert) {
  std::string out;
  for (std::size_t i = 0; i < cert.size(); ++i) {
    if (i > 0) out += ' ';
    out += v.symbolName(cert.symbols[i]);
  }
  return out;
}

MultiTrackCertificate parseMultiTrack(const VerifierMachine& v, std::string_view text) {
  MultiTrackCertificate mtc;
  const auto lines = rawLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (isComment(lines[i])) continue;
    std::vector<TrackEntry> column;
    for (const auto& cell : splitOn(lines[i], ';')) {
      const std::string entry = trim(cell);
      if (entry == "O") column.push_back(TrackEntry::halted());
      else if (entry == "INF") column.push_back(TrackEntry::looping());
      else column.push_back(TrackEntry::response(readToken(v, entry, static_cast<int>(i + 1))));
    }
    mtc.columns.push_back(std::move(column));
  }
  return mtc;
}

std::string formatMultiTrack(const VerifierMachine& v, const MultiTrackCertificate& mtc) {
  std::string out;
  for (const auto& column : mtc.columns) {
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (i > 0) out += ';';
      switch (column[i].kind) {
        case TrackEntry::Kind::Halted: out += "O"; break;
        case TrackEntry::Kind::Looping: out += "INF"; break;
        case TrackEntry::Kind::Symbol: out += v.symbolName(column[i].symbol); break;
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<Transcript> parseTranscripts(const VerifierMachine& v, std::string_view text) {
  std::vector<Transcript> transcripts;
  const auto lines = rawLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (isComment(lines[i])) continue;
    const int number = static_cast<int>(i + 1);
    Transcript t;
    const auto pairs = words(lines[i]);
    if (!(pairs.size() == 1 && pairs[0] == "-")) {
      for (const auto& pair : pairs) {
        const auto cut = pair.find('>');
        if (cut == std::string::npos) throw ParseError(number, "expected `sent>received`, got '" + pair + "'");
        t.emplace_back(readToken(v, pair.substr(0, cut), number), readToken(v, pair.substr(cut + 1), number));
      }
    }
    transcripts.push_back(std::move(t));
  }
  return transcripts;
}

std::string formatTranscripts(const VerifierMachine& v, const std::vector<Transcript>& transcripts) {
  std::string out;
  for (const auto& t : transcripts) {
    if (t.empty()) out += "-";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i > 0) out += ' ';
      out += v.symbolName(t[i].first) + ">" + v.symbolName(t[i].second);
    }
    out += '\n';
  }
  return out;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace mhv
