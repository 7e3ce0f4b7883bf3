#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end coverage of the command-line surface: documented flag
// combinations against frozen outputs, plus byte-identical reruns.

#include <array>
#include <cstdio>
#include <cmath>
#include <string>
#include <vector>

namespace {

struct Result {
  int exit_code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(QCHAR_BINARY) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("symbols") {
  CHECK(run("symbols cg 1/2 1/2 1/2 -1/2 1 0").out == "1/2*sqrt(2)\n");
  CHECK(run("symbols cg 1/2 1/2 1/2 -1/2 0 0").out == "1/2*sqrt(2)\n");
  CHECK(run("symbols cg 1/2 -1/2 1/2 1/2 0 0").out == "-1/2*sqrt(2)\n");
  CHECK(run("--float symbols cg 1/2 1/2 1/2 1/2 1 1").out == "1\n");
  CHECK(run("symbols sixj 1 1/2 1/2 0 1/2 1/2").out == "1/2\n");
  CHECK(run("symbols ninej 0 0 0 0 0 0 0 0 0").out == "1\n");
  CHECK(run("symbols ninelambda 1 1 1 1 1 1 1 1 0").out == "1/2\n");
  // spins entered as decimals work too
  CHECK(run("symbols cg 0.5 0.5 0.5 -0.5 1 0").out == "1/2*sqrt(2)\n");
}

TEST_CASE("trees") {
  CHECK(run("trees parse --tree \"((1 2) (3 (4 5)))\"").out == "((1 2) (3 (4 5)))\n");
  CHECK(run("trees count --tree \"((1 2) 3)\" --leaves \"1/2 1/2 1/2\" --root 1/2").out == "2\n");
  const Result en = run("trees enumerate --tree \"(1 2)\" --leaves \"1/2 1/2\"");
  CHECK(en.out == "1/2 1/2 0\n1/2 1/2 1\n");
}

TEST_CASE("recouple") {
  // factorized R(T) on the cherry is a single 9-lambda symbol
  const Result r = run("recouple --tree \"(1 2)\" --alpha1 \"1/2 1/2 1\" --alpha2 \"1/2 1/2 1\" "
                       "--alpha3 \"1 0 1\"");
  const Result w = run("symbols ninelambda 1/2 1/2 1 1/2 1/2 1 1 0 1");
  CHECK(r.out == w.out);
  // projection-sum route between two 4-leaf trees
  const Result c = run("recouple --t1 \"((1 2) (3 4))\" --alpha1 \"1/2 1/2 1 1/2 1/2 1 0\" "
                       "--t2 \"(((1 2) 3) 4)\" --alpha2 \"1/2 1/2 1 1/2 1/2 1/2 0\"");
  CHECK(c.exit_code == 0);
  CHECK(!c.out.empty());
}

TEST_CASE("structprod and expand emit the documented JSON schema") {
  const Result sp = run("structprod --tree \"(1 2)\" --alpha1 \"1/2 1/2 1\" --alpha2 \"1/2 1/2 1\"");
  CHECK(sp.exit_code == 0);
  CHECK(sp.out.find("\"command\": \"structprod\"") != std::string::npos);
  CHECK(sp.out.find("\"index\"") != std::string::npos);
  CHECK(sp.out.find("\"tree\": \"(1 2)\"") != std::string::npos);
  CHECK(sp.out.find("\"alpha\"") != std::string::npos);
  CHECK(sp.out.find("\"coeff\"") != std::string::npos);
  CHECK(sp.out.find("\"version\": \"1.0.0\"") != std::string::npos);

  const Result ex = run("expand --poly \"2*tr(1 2 1 2) - 2*tr(1 1 2 2)\" --links 2");
  CHECK(ex.exit_code == 0);
  CHECK(ex.out.find("\"command\": \"expand\"") != std::string::npos);
  CHECK(ex.out.find("\"coeff\": \"3\"") != std::string::npos);
  CHECK(ex.out.find("\"coeff\": \"-2\"") != std::string::npos);
}

TEST_CASE("norms") {
  const Result n = run("--hbar 1 --beta 1 norms --tree \"(1 2)\" --alpha \"0 0 0\"");
  CHECK(n.exit_code == 0);
  // (pi^3 e^2)^(1/2)
  CHECK(n.out.substr(0, 6) == "15.136");
}

TEST_CASE("su3 surface") {
  CHECK(run("su3 dim --r1 \"2 1\"").out == "15\n");
  const Result series = run("su3 series --r1 \"2 0\" --r2 \"2 0\"");
  CHECK(series.out.find("\"multiplicity\": 1") != std::string::npos);
  const Result nl = run("su3 ninelambda --rows \"2 0 2 0 2 1 0 1 0 0 0 1 2 1 2 0 2 2\"");
  CHECK(std::abs(std::abs(std::stod(nl.out)) - 1.0) < 1e-9);
  const Result ex = run("su3 expand --poly \"tr(1 2 1 2)\"");
  CHECK(ex.out.find("20,20,40") != std::string::npos);
  const Result row = run("--beta 0.8 su3 row --poly \"tr(1 2 1 2) - tr(1 1 2 2)\" "
                         "--source \"0 1 0 0 0 1\"");
  CHECK(row.exit_code == 0);
  CHECK(row.out.find("21,20,22") != std::string::npos);
}

TEST_CASE("su3 cg dump and import round trip") {
  const std::string dump = std::string(QCHAR_TMPDIR) + "/cg_dump.csv";
  const Result d = run("su3 cg --r1 \"1 0\" --r2 \"1 0\" --target \"0 1\" --dump " + dump);
  CHECK(d.exit_code == 0);
  const Result reimport =
      run("su3 --import " + dump + " cg --r1 \"1 0\" --r2 \"1 0\" --target \"0 1\"");
  CHECK(reimport.exit_code == 0);
  // dump again without import and compare content equality
  const Result direct = run("su3 cg --r1 \"1 0\" --r2 \"1 0\" --target \"0 1\"");
  CHECK(reimport.out == direct.out);
}

TEST_CASE("hamiltonian and stratum operator") {
  const Result h = run("hamiltonian --links 1 --plaquette \"1\" --g 1.0 --delta 1.0 --jmax 1 "
                       "--tree \"1\"");
  CHECK(h.exit_code == 0);
  CHECK(h.out.find("\"eigenvalues\"") != std::string::npos);
  CHECK(h.out.find("\"dropped_couplings\"") != std::string::npos);

  // model file input produces the same record as the equivalent flags
  const std::string model = std::string(QCHAR_TMPDIR) + "/model.json";
  {
    FILE* f = fopen(model.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs("{\"n_links\": 1, \"plaquettes\": [[1]], \"g\": 1.0, \"delta\": 1.0}\n", f);
    fclose(f);
  }
  const Result hm = run("hamiltonian --model " + model + " --jmax 1 --tree \"1\"");
  CHECK(hm.exit_code == 0);
  CHECK(hm.out == h.out);

  const Result s = run("--hbar 1 --beta 0.5 stratum-op --jmax 1");
  CHECK(s.exit_code == 0);
  CHECK(s.out.find("\"matrix\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("symbols cg 1/2 1/3 1/2 -1/2 1 0").exit_code == 1); // malformed spin
  CHECK(run("symbols cg 1/2 3/2 1/2 -1/2 1 0").exit_code == 1); // |m| > j
  CHECK(run("trees parse --tree \"(1 2\"").exit_code == 1);     // parse error
  CHECK(run("nonsense").exit_code != 0);                        // usage error
  CHECK(run("trees parse").exit_code == 2);                     // missing required flag
  CHECK(run("selftest").exit_code == 0);
}

TEST_CASE("jmax cap override") {
  Result capped = run("stratum-op --jmax 2");
  CHECK(capped.exit_code == 0);
  // the environment variable lowers the cap below the request
  const std::string cmd = std::string("RECOUPLING_JMAX_CAP=1 ") + QCHAR_BINARY +
                          " stratum-op --jmax 2 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 256> buf{};
  while (fread(buf.data(), 1, buf.size(), pipe) > 0) {
  }
  CHECK(WEXITSTATUS(pclose(pipe)) == 1);
}

TEST_CASE("byte-identical reruns") {
  const std::vector<std::string> cases{
      "symbols ninej 1 1 1 1 1 1 1 1 1",
      "structprod --tree \"(1 2)\" --alpha1 \"1 1 1\" --alpha2 \"1 1 1\"",
      "--float expand --poly \"tr(1 2 -1 -2)\" --links 2",
      "--seed 7 hamiltonian --links 2 --plaquette \"1 2 -1 -2\" --jmax 1 --tree \"(1 2)\"",
      "--hbar 1 --beta 0.8 su3 row --poly \"tr(1 2 1 2) - tr(1 1 2 2)\" --source \"0 1 0 0 0 1\"",
  };
  for (const auto& c : cases) {
    const Result a = run(c), b = run(c);
    CHECK(a.exit_code == b.exit_code);
    CHECK_MESSAGE(a.out == b.out, c);
  }
}
