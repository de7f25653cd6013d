#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mhv/cli.hpp"
#include "mhv/io.hpp"

using namespace mhv;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = runCli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(MHV_DATA_DIR) + "/" + name; }

std::string tempFile(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("mhv_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("prob on the TWIN verifier") {
  const auto r = run({"prob", data("twin.vm"), "aca", "a"});
  CHECK(r.status == 0);
  CHECK(r.out == "accept=3/4 reject=1/4 nonhalt=0/1\n");
}

TEST_CASE("attack reports at most 3/8 on a non-member") {
  const auto r = run({"attack", data("twin.vm"), "acb", "--maxlen", "4"});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("accept=3/8\n", 0) == 0);
  CHECK(r.out.find("certificate=") != std::string::npos);
}

TEST_CASE("check exit codes") {
  CHECK(run({"check", data("twin2h.mh"), "abcab"}).out == "accept\n");
  CHECK(run({"check", data("twin2h.mh"), "abcab"}).status == 0);
  CHECK(run({"check", data("twin2h.mh"), "acb"}).status == 1);
  CHECK(run({"check", data("missing.mh"), "acb"}).status == 2);
  CHECK(run({"check"}).status == 2);
  CHECK(run({"bogus"}).status == 2);
}

TEST_CASE("compile, cert and prob chain together") {
  const auto compiled = run({"compile", data("twin2h.mh"), "--eps", "1/4"});
  REQUIRE(compiled.status == 0);
  const auto path = tempFile("twin.cv", compiled.out);
  const auto cert = run({"cert", path, "aca"});
  REQUIRE(cert.status == 0);
  const auto certPath = tempFile("twin.cert", cert.out);
  CHECK(run({"prob", path, "aca", certPath}).out == "accept=1/1 reject=0/1 nonhalt=0/1\n");
  CHECK(run({"cert", path, "acb"}).status == 1);
  CHECK(run({"compile", data("twin2h.mh")}).status == 2);
  const auto strong = run({"compile", data("twin2h.mh"), "--strong"});
  CHECK((parseCompiled(strong.out).kind == CompiledKind::Strong));
}

TEST_CASE("derand subcommands") {
  const auto found = run({"derand", data("twin.vm"), "private", "aca"});
  CHECK(found.status == 0);
  const auto tracks = tempFile("twin.mtc", found.out);
  CHECK(run({"derand", data("twin.vm"), "private", "aca", tracks}).out == "accept\n");
  CHECK(run({"derand", data("twin.vm"), "private", "acb"}).status == 1);
  const auto transcripts = tempFile("twin.tr", "-\n-\n-\n-\n-\n-\n-\n-\n");
  CHECK(run({"derand", data("twin.vm"), "public", "aca", transcripts}).status == 1);
  const auto onenfa = run({"derand", data("twin.vm"), "onenfa"});
  CHECK(onenfa.status == 0);
  CHECK(onenfa.out.rfind("type 1nfa", 0) == 0);
}

TEST_CASE("markov and dissim") {
  const std::string coin =
      "type verifier\nalphabet ab\nmode two-way\ncoins 1\nstate s R\nstate acc accept\nstate rej reject\n"
      "start s\ntrans s CENT NULL 0 -> rej 0\ntrans s CENT NULL 1 -> acc 0\n";
  const auto r = run({"markov", tempFile("coin.vm", coin), "a", "b"});
  CHECK(r.status == 0);
  CHECK(r.out.find("accept=1/2 reject-or-loop=1/2") != std::string::npos);
  const auto d = run({"dissim", "even", "3"});
  CHECK(d.out.rfind("n=3 N=2\n", 0) == 0);
  CHECK(run({"dissim", "klingon", "3"}).status == 2);
}

TEST_CASE("output is deterministic") {
  CHECK(run({"attack", data("nh.vm"), "abab", "--maxlen", "3"}).out ==
        run({"attack", data("nh.vm"), "abab", "--maxlen", "3"}).out);
}
