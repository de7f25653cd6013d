#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mhv/cli.hpp"
#include "mhv/compiler.hpp"
#include "mhv/derandomizer.hpp"
#include "mhv/io.hpp"
#include "mhv/markov.hpp"
#include "mhv/showcase.hpp"
#include "mhv/verifier.hpp"

namespace py = pybind11;
using namespace mhv;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(formatRational(r));
}

Rational rational(const py::handle& value) { return parseRational(py::str(value).cast<std::string>()); }

Certificate certificate(const VerifierMachine& v, const std::vector<std::string>& tokens) {
  Certificate c;
  for (const auto& t : tokens) {
    const auto id = v.findSymbol(t);
    if (!id) throw py::value_error("unknown certificate token '" + t + "'");
    c.symbols.push_back(*id);
  }
  return c;
}

std::vector<std::string> tokens(const VerifierMachine& v, const Certificate& c) {
  std::vector<std::string> out;
  for (auto s : c.symbols) out.push_back(v.symbolName(s));
  return out;
}

py::dict distribution(const OutcomeDistribution& d) {
  py::dict out;
  out["accept"] = fraction(d.accept);
  out["reject"] = fraction(d.reject);
  out["nonhalt"] = fraction(d.nonhalt);
  return out;
}

std::vector<std::string> problems(const ValidationReport& report) {
  std::vector<std::string> out;
  for (const auto& v : report.violations) out.push_back(std::string(toString(v.kind)) + ": " + v.message);
  return out;
}

}  // namespace

PYBIND11_MODULE(_mhv, m) {
  m.doc() = "Constant-randomness verifiers and multihead automata";

  py::class_<MultiheadAutomaton>(m, "MultiheadAutomaton")
      .def_property_readonly("head_count", &MultiheadAutomaton::headCount)
      .def_property_readonly("state_count", &MultiheadAutomaton::stateCount)
      .def_property_readonly("alphabet", &MultiheadAutomaton::alphabet)
      .def("accepts", [](const MultiheadAutomaton& a, const std::string& x) { return accepts(a, x); })
      .def("enumerate_language", [](const MultiheadAutomaton& a, int n) { return enumerateLanguage(a, n); })
      .def("validate", [](const MultiheadAutomaton& a) { return problems(validate(a)); })
      .def("with_clock", [](const MultiheadAutomaton& a) { return addClock(a); })
      .def("serialize", [](const MultiheadAutomaton& a) { return serialize(a); });

  py::class_<VerifierMachine>(m, "Verifier")
      .def_property_readonly("coin_budget", &VerifierMachine::coinBudget)
      .def_property_readonly("state_count", &VerifierMachine::stateCount)
      .def_property_readonly("alphabet", &VerifierMachine::alphabet)
      .def("validate", [](const VerifierMachine& v) { return problems(validate(v)); })
      .def("outcome_distribution",
           [](const VerifierMachine& v, const std::string& x, const std::vector<std::string>& cert) {
             return distribution(outcomeDistribution(v, x, certificate(v, cert)));
           },
           py::arg("input"), py::arg("certificate") = std::vector<std::string>{})
      .def("best_certificate",
           [](const VerifierMachine& v, const std::string& x, int maxLength) {
             const auto best = bestCertificate(v, x, maxLength);
             return py::make_tuple(fraction(best.pAccept), tokens(v, best.cert));
           })
      .def("serialize", [](const VerifierMachine& v) { return serialize(v); });

  py::class_<CompiledVerifier>(m, "CompiledVerifier")
      .def_readonly("verifier", &CompiledVerifier::verifier)
      .def_readonly("source", &CompiledVerifier::source)
      .def_readonly("r", &CompiledVerifier::r)
      .def_readonly("m", &CompiledVerifier::m)
      .def_property_readonly("strong", [](const CompiledVerifier& c) { return c.kind == CompiledKind::Strong; })
      .def_property_readonly("epsilon", [](const CompiledVerifier& c) { return fraction(c.epsilon); })
      .def("honest_certificate",
           [](const CompiledVerifier& c, const std::string& x) { return tokens(c.verifier, honestCertificate(c, x)); })
      .def("honest_length_bound", &honestLengthBound)
      .def("serialize", [](const CompiledVerifier& c) { return serialize(c); });

  m.def("parse_automaton", [](const std::string& text) { return parseAutomaton(text); });
  m.def("parse_verifier", [](const std::string& text) { return parseVerifier(text); });
  m.def("parse_compiled", [](const std::string& text) { return parseCompiled(text); });

  m.def("twin_verifier", &buildTwinVerifier);
  m.def("nh_verifier", &buildNhVerifier);
  m.def("twin_recognizer", &buildTwinRecognizer2Head);
  m.def("twin_member", [](const std::string& x) { return twinOracle(x); });
  m.def("nh_member", [](const std::string& x) { return nhOracle(x); });

  m.def("compile_weak", [](const MultiheadAutomaton& a, const py::object& eps) { return compileWeak(a, rational(eps)); });
  m.def("compile_strong", &compileStrong);

  m.def("find_private_coin_certificate", [](const VerifierMachine& v, const std::string& x) -> py::object {
    const auto found = findPrivateCoinCertificate(v, x);
    if (!found) return py::none();
    return py::str(formatMultiTrack(v, *found));
  });
  m.def("check_private_coin", [](const VerifierMachine& v, const std::string& x, const std::string& tracks) {
    return checkPrivateCoin(v, x, parseMultiTrack(v, tracks)).accepted;
  });
  m.def("to_one_way_multihead", &toOneWayMultihead);

  m.def("acceptance_probability", [](const VerifierMachine& a, const std::string& w) {
    return fraction(acceptanceProbability2pfa(a, w));
  });
  m.def("split_chain", [](const VerifierMachine& a, const std::string& x, const std::string& y) {
    const auto split = buildSplitChain(a, x, y);
    py::list rows;
    for (const auto& row : split.chain.rows) {
      py::list r;
      for (const auto& p : row) r.append(fraction(p));
      rows.append(r);
    }
    const auto absorbed = absorption(split.chain, split.start());
    return py::make_tuple(split.c, rows, fraction(absorbed[static_cast<std::size_t>(split.acceptState())]));
  });
  m.def("dissimilarity", [](const std::string& language, int n) {
    const auto oracle = oracleByName(language);
    if (!oracle) throw py::value_error("unknown language '" + language + "'");
    const auto report = nDissimilarity(*oracle, n);
    return py::make_tuple(report.value, report.witnesses);
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = runCli(args, out, err);
    return py::make_tuple(status, out.str(), err.str());
  });

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CoinBudgetExceeded>(m, "CoinBudgetExceeded", PyExc_RuntimeError);
}
