#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string env_or_fail(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name);
  return v;
}

// run one CLI invocation through the shell, capturing stdout, stderr, and the
// exit code separately
RunResult run(const std::string& args) {
  RunResult res;
  std::string errfile = "cli_stderr.tmp";
  std::string cmd = env_or_fail("SHRUBKIT_BIN") + " " + args + " 2>" + errfile;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream ef(errfile, std::ios::binary);
  std::stringstream ss;
  ss << ef.rdbuf();
  res.err = ss.str();
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) {
  return env_or_fail("SHRUBKIT_SRC") + "/tests/data/" + name;
}

std::string golden(const std::string& name) {
  return slurp(env_or_fail("SHRUBKIT_SRC") + "/tests/golden/" + name);
}

// stdout of the command must match the stored golden and be stable across runs
void check_golden(const std::string& args, const std::string& golden_name) {
  RunResult first = run(args);
  CAPTURE(args);
  CAPTURE(first.err);
  CHECK(first.code == 0);
  CHECK(first.out == golden(golden_name));
  RunResult second = run(args);
  CHECK(second.out == first.out);
}

}  // namespace

TEST_CASE("weak coloring reports match the stored goldens") {
  check_golden("wcol -g " + data("p3.graph") + " --order 0,1,2 -r 1,2",
               "wcol_p3.txt");
  check_golden("wcol -g " + data("k1.graph") + " -r 5", "wcol_k1.txt");
  check_golden("wcol -g " + data("c4.graph") + " --order strategy:degeneracy -r 1",
               "wcol_c4.txt");
}

TEST_CASE("bad invocations exit with the parse code") {
  CHECK(run("wcol -r 1").code == 2);
  CHECK(run("wcol -g " + data("missing.graph") + " -r 1").code == 2);
  CHECK(run("bush build -g " + data("k2.graph") + " -r 1 -q 1").code == 2);
}

TEST_CASE("tree build, decode, and verify round trip through files") {
  std::string build =
      "bush build -g " + data("k2.graph") + " -r 1 -q 1 --formula 'E(x,y)'";
  RunResult a = run(build + " -o tmp_k2_bush.json");
  CAPTURE(a.err);
  CHECK(a.code == 0);
  CHECK(slurp("tmp_k2_bush.json") == golden("k2_bush.json"));
  run(build + " -o tmp_k2_bush_again.json");
  CHECK(slurp("tmp_k2_bush_again.json") == slurp("tmp_k2_bush.json"));

  RunResult dot = run(build + " --format dot");
  CHECK(dot.code == 0);
  CHECK(dot.out.find("graph") != std::string::npos);

  check_golden("bush decode -i tmp_k2_bush.json", "k2_decode.json");

  RunResult ok = run("bush verify -i tmp_k2_bush.json -g " + data("k2.graph") +
                     " --formula 'E(x,y)'");
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok\n");

  RunResult bad = run("bush verify -i tmp_k2_bush.json -g " + data("p3.graph") +
                      " --formula 'E(x,y)'");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("decode-mismatch") != std::string::npos);
}

TEST_CASE("rank-starved tree builds exit with the adequacy code") {
  RunResult r = run("bush build -g " + data("p4.graph") +
                    " -r 1 -q 0 --formula 'E(x,y) | exists z. E(x,z) & E(z,y)'");
  CHECK(r.code == 3);
  CHECK(r.err.find("adequacy") != std::string::npos);
  CHECK(r.err.find("witness") != std::string::npos);
}

TEST_CASE("pointer-tree build, verify, and stats match the goldens") {
  std::string base = "qbush build -g " + data("p3.graph") + " --order 0,1,2 -r 1";
  RunResult skel = run(base + " -o tmp_p3_skel.json");
  CAPTURE(skel.err);
  CHECK(skel.code == 0);
  CHECK(slurp("tmp_p3_skel.json") == golden("p3_qbush_skel.json"));

  RunResult lab = run(base + " -q 1 --formula 'E(x,y)' -o tmp_p3_lab.json");
  CHECK(lab.code == 0);
  CHECK(slurp("tmp_p3_lab.json") == golden("p3_qbush_labeled.json"));

  RunResult ok = run("qbush verify -i tmp_p3_lab.json -g " + data("p3.graph") +
                     " --formula 'E(x,y)'");
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok\n");

  check_golden("qbush stats -i tmp_p3_lab.json -g " + data("p3.graph") +
                   " --order 0,1,2 -r 1",
               "p3_qbush_stats.txt");
}

TEST_CASE("kernel ledger and exported files match the goldens") {
  std::string cmd = "kernel -g " + data("star50.graph") +
                    " -A 7 --formula 'exists y. E(x,y)'";
  check_golden(cmd, "kernel_star50.json");
  RunResult r = run(cmd + " -o tmp_kern");
  CHECK(r.code == 0);
  CHECK(slurp("tmp_kern.graph") == golden("kernel_star50.graph"));
  CHECK(!slurp("tmp_kern.formula").empty());
  CHECK(slurp("tmp_kern.ledger.json") == golden("kernel_star50.json"));
}

TEST_CASE("cover reports match the goldens in both modes") {
  check_golden("cover -g " + data("p3.graph") + " -p 2 --order 0,1,2",
               "cover_p3_low.json");
  run("qbush build -g " + data("p3.graph") +
      " --order 0,1,2 -r 1 -q 1 --formula 'E(x,y)' -o tmp_p3_lab2.json");
  check_golden("cover -g " + data("p3.graph") + " -p 1 --qbush tmp_p3_lab2.json",
               "cover_p3_shrub.json");
}
