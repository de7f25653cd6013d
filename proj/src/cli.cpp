#include "mhv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "mhv/compiler.hpp"
#include "mhv/derandomizer.hpp"
#include "mhv/io.hpp"
#include "mhv/markov.hpp"
#include "mhv/showcase.hpp"
#include "mhv/verifier.hpp"

namespace mhv {

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

VerifierMachine loadVerifier(const std::string& path) {
  VerifierMachine v = parseVerifier(readFile(path));
  const auto report = validate(v);
  if (!report.ok()) throw UsageError(path + " is not a valid verifier:\n" + report.summary());
  return v;
}

MultiheadAutomaton loadAutomaton(const std::string& path) {
  MultiheadAutomaton m = parseAutomaton(readFile(path));
  const auto report = validate(m);
  if (!report.ok()) throw UsageError(path + " is not a valid automaton:\n" + report.summary());
  return m;
}

// A certificate argument is a file if one exists at that path, otherwise the
// tokens themselves; "-" is the empty certificate. A single word that is not
// a token but spells tokens character by character is split.
Certificate certificateArgument(const VerifierMachine& v, const std::string& arg) {
  if (arg == "-" || arg.empty()) return {};
  if (std::filesystem::is_regular_file(arg)) return parseCertificate(v, readFile(arg));
  if (arg.find_first_of(" \t") == std::string::npos && !v.findSymbol(arg)) {
    std::string spaced;
    for (char c : arg) {
      spaced += c;
      spaced += ' ';
    }
    return parseCertificate(v, spaced);
  }
  return parseCertificate(v, arg);
}

std::string distribution(const OutcomeDistribution& d) {
  return "accept=" + formatRational(d.accept) + " reject=" + formatRational(d.reject) +
         " nonhalt=" + formatRational(d.nonhalt);
}

void writeOutput(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-randomness verifiers and multihead automata", "mhv"};
  app.require_subcommand(1);
  int status = kAccept;

  std::string machinePath;
  std::string input;
  std::string certArg;
  std::string outputPath;

  auto* check = app.add_subcommand("check", "Run a multihead automaton on an input");
  check->add_option("machine", machinePath)->required();
  check->add_option("input", input)->required();
  check->callback([&] {
    const auto m = loadAutomaton(machinePath);
    const bool accepted = accepts(m, input);
    out << (accepted ? "accept" : "reject") << '\n';
    status = accepted ? kAccept : kReject;
  });

  std::string eps;
  bool strong = false;
  auto* compile = app.add_subcommand("compile", "Compile a multihead NFA into a constant-coin verifier");
  compile->add_option("machine", machinePath)->required();
  compile->add_option("--eps", eps, "soundness error target p/q (weak verifiers)");
  compile->add_flag("--strong", strong, "build the strong variant");
  compile->add_option("-o,--output", outputPath);
  compile->callback([&] {
    const auto m = loadAutomaton(machinePath);
    CompiledVerifier c;
    if (strong) {
      c = compileStrong(m);
    } else {
      if (eps.empty()) throw UsageError("compile: --eps is required unless --strong is given");
      c = compileWeak(m, parseRational(eps));
    }
    writeOutput(outputPath, serialize(c), out);
  });

  auto* cert = app.add_subcommand("cert", "Print the honest certificate of a compiled verifier");
  cert->add_option("compiled", machinePath)->required();
  cert->add_option("input", input)->required();
  cert->callback([&] {
    const auto c = parseCompiled(readFile(machinePath));
    if (!accepts(c.source, input)) {
      err << "not a member: " << input << '\n';
      status = kReject;
      return;
    }
    out << formatCertificate(c.verifier, honestCertificate(c, input)) << '\n';
  });

  auto* prob = app.add_subcommand("prob", "Exact outcome distribution for a certificate");
  prob->add_option("verifier", machinePath)->required();
  prob->add_option("input", input)->required();
  prob->add_option("cert", certArg, "certificate file or tokens; - for empty");
  prob->callback([&] {
    const auto v = loadVerifier(machinePath);
    out << distribution(outcomeDistribution(v, input, certificateArgument(v, certArg))) << '\n';
  });

  int maxLength = 0;
  std::string target = "accept";
  auto* attack = app.add_subcommand("attack", "Best certificate up to a length bound");
  attack->add_option("verifier", machinePath)->required();
  attack->add_option("input", input)->required();
  attack->add_option("--maxlen", maxLength)->required()->check(CLI::NonNegativeNumber);
  attack->add_option("--target", target, "outcome to maximise")->check(CLI::IsMember({"accept", "reject", "nonhalt"}));
  attack->callback([&] {
    const auto v = loadVerifier(machinePath);
    const Verdict verdict = target == "accept" ? Verdict::Accept : (target == "reject" ? Verdict::Reject : Verdict::Nonhalt);
    const auto best = maximiseOutcome(v, input, maxLength, verdict);
    out << target << '=' << formatRational(best.pAccept) << '\n';
    out << "certificate=" << (best.cert.size() == 0 ? "-" : formatCertificate(v, best.cert)) << '\n';
  });

  auto* derand = app.add_subcommand("derand", "Deterministic checkers for a verifier");
  derand->add_option("verifier", machinePath)->required();
  derand->require_subcommand(1);
  std::string tracksPath;
  auto* privateCoin = derand->add_subcommand("private", "Check (or search for) a multi-track certificate");
  privateCoin->add_option("input", input)->required();
  privateCoin->add_option("tracks", tracksPath, "multi-track certificate file; omitted to search");
  privateCoin->callback([&] {
    const auto v = loadVerifier(machinePath);
    if (tracksPath.empty()) {
      const auto found = findPrivateCoinCertificate(v, input);
      if (!found) {
        out << "no certificate\n";
        status = kReject;
        return;
      }
      out << formatMultiTrack(v, *found);
      return;
    }
    const auto result = checkPrivateCoin(v, input, parseMultiTrack(v, readFile(tracksPath)));
    out << (result.accepted ? "accept" : "reject: " + result.diagnostic) << '\n';
    status = result.accepted ? kAccept : kReject;
  });
  auto* publicCoin = derand->add_subcommand("public", "Check per-machine transcripts");
  publicCoin->add_option("input", input)->required();
  publicCoin->add_option("transcripts", tracksPath)->required();
  publicCoin->callback([&] {
    const auto v = loadVerifier(machinePath);
    const auto result = checkPublicCoin(v, input, parseTranscripts(v, readFile(tracksPath)));
    out << (result.accepted ? "accept" : "reject: " + result.diagnostic) << '\n';
    status = result.accepted ? kAccept : kReject;
  });
  auto* onenfa = derand->add_subcommand("onenfa", "Convert a one-way verifier into a one-way multihead NFA");
  onenfa->add_option("-o,--output", outputPath);
  onenfa->callback([&] {
    const auto v = loadVerifier(machinePath);
    writeOutput(outputPath, serialize(toOneWayMultihead(v)), out);
  });

  std::string x;
  std::string y;
  auto* markov = app.add_subcommand("markov", "Split chain of a 2pfa on x|y and its absorption");
  markov->add_option("machine", machinePath)->required();
  markov->add_option("x", x)->required();
  markov->add_option("y", y)->required();
  markov->callback([&] {
    const auto a = loadVerifier(machinePath);
    const auto split = buildSplitChain(a, x, y);
    const auto absorbed = absorption(split.chain, split.start());
    out << "c=" << split.c << '\n';
    out << formatChain(split.chain);
    out << "accept=" << formatRational(absorbed[static_cast<std::size_t>(split.acceptState())])
        << " reject-or-loop=" << formatRational(absorbed[static_cast<std::size_t>(split.rejectState())]) << '\n';
  });

  std::string oracleName;
  int n = 0;
  auto* dissim = app.add_subcommand("dissim", "n-dissimilarity of a built-in language");
  dissim->add_option("oracle", oracleName, "twin, nh, even or all")->required();
  dissim->add_option("n", n)->required()->check(CLI::NonNegativeNumber);
  dissim->callback([&] {
    const auto oracle = oracleByName(oracleName);
    if (!oracle) throw UsageError("unknown language '" + oracleName + "'");
    const auto report = nDissimilarity(*oracle, n);
    out << "n=" << report.n << " N=" << report.value << '\n';
    out << "witnesses:";
    for (const auto& w : report.witnesses) out << " \"" << w << '"';
    out << '\n';
    for (const auto& d : report.distinctions) {
      const auto& w = report.witnesses;
      out << '"' << w[static_cast<std::size_t>(d.first)] << "\" \"" << w[static_cast<std::size_t>(d.second)]
          << "\" by \"" << d.suffix << "\"\n";
    }
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAccept : kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return status;
}

}  // namespace mhv
