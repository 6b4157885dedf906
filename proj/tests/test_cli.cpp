#include "fixtures.hpp"

#include <json.hpp>

#include <doctest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string &args)
{
  bool takes_solver = args.rfind("analyze", 0) == 0 || args.rfind("transform", 0) == 0 || args.rfind("reduce", 0) == 0;
  std::string cmd = std::string(TWN_TERM_PATH) + " " + args;
  if (takes_solver && args.find("--solver") == std::string::npos)
    cmd += " --solver " TWN_TEST_SOLVER;
  cmd += " 2>&1";
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), p))
    out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string loop_file(const char *name) { return std::string(TWN_LOOPS_DIR) + "/" + name; }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes follow verdicts")
{
  CHECK(run("analyze " + loop_file("countdown.loop")).status == 0);
  Run up = run("analyze " + loop_file("countup.loop"));
  CHECK(up.status == 1);
  CHECK(up.out.find("witness: (0)") != std::string::npos);
  CHECK(run("analyze " + loop_file("nilpotent_3_4.loop")).status == 1);
}

TEST_CASE("machine-readable report")
{
  Run r = run("analyze --machine " + loop_file("nilpotent_3_4.loop"));
  CHECK(r.status == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["verdict"] == "NonTerminating");
  CHECK(j["witness"].size() == 3);
  CHECK(j["transformations"][0]["kind"] == "transform");
}

TEST_CASE("inspection subcommands")
{
  Run c = run("classify " + loop_file("not_triangular.loop"));
  CHECK(c.status == 0);
  CHECK(c.out.find("not triangular") != std::string::npos);

  Run q = run("closed-form " + loop_file("tnn_3_5.loop"));
  CHECK(q.status == 0);
  CHECK(q.out.find("x2 = (-2*x3^2)*n + x2") != std::string::npos);

  Run s = run("simulate " + loop_file("countdown.loop") + " --point 2 --steps 3");
  CHECK(s.status == 0);
  CHECK(s.out.find("3\t-1\tfalse") != std::string::npos);

  Run t = run("transform " + loop_file("poly_aut.loop"));
  CHECK(t.status == 0);
  CHECK(t.out.find("eta:") != std::string::npos);
}

TEST_CASE("reduce output matches the library emitter")
{
  Run r = run("reduce " + loop_file("tnn_3_5.loop") + " --set " + loop_file("image_z3.set"));
  CHECK(r.status == 0);
  twn::Loop l = twn::load_loop(loop_file("tnn_3_5.loop"));
  CHECK(r.out == twn::emit_smtlib(twn::build_certificate(l, twn::load_set(loop_file("image_z3.set"), l.vars))));
}

TEST_CASE("errors give exit codes above 2")
{
  CHECK(run("classify /nonexistent.loop").status > 2);
  CHECK(run("closed-form " + loop_file("not_triangular.loop")).status > 2);
  CHECK(run("analyze " + loop_file("countdown.loop") + " --solver /nonexistent/z3").status > 2);
}

}
