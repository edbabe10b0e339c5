#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "termxform/cli.hpp"

using namespace termxform;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path dir() {
  auto d = std::filesystem::temp_directory_path() / "termxform_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

std::string put(const std::string& name, const std::string& text) {
  const auto p = dir() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sample(const std::string& name) {
  return (std::filesystem::path(TERMXFORM_SOURCE_DIR) / "samples" / name).string();
}

}  // namespace

TEST(CliQuery, PrintsBindingsAsSlashPairs) {
  auto r = run({"query", "--rules", "prelude-only", "X is substring('hallo',1,3)"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "YES. X/hal\n");
  r = run({"query", "X is string(1.3)"});
  EXPECT_EQ(r.out, "YES. X/'1.3'\n");
}

TEST(CliQuery, InverseModeAndMax) {
  auto r = run({"query", "nth(N,[a,b,c],b)"});
  EXPECT_EQ(r.out, "YES. N/2\n");
  r = run({"query", "--max", "0", "member(X,[a,b])"});
  EXPECT_EQ(r.out, "YES. X/a\nYES. X/b\n");
  r = run({"query", "--max", "1", "member(X,[a,b])"});
  EXPECT_EQ(r.out, "YES. X/a\n");
}

TEST(CliQuery, FailureAndErrors) {
  auto r = run({"query", "fail"});
  EXPECT_EQ(r.code, kExitNoSolution);
  EXPECT_EQ(r.out, "NO\n");
  EXPECT_EQ(run({"query", "foo("}).code, kExitInputError);
  EXPECT_EQ(run({"query", "X is foo(1)"}).code, kExitInputError);
  EXPECT_EQ(run({"query", "--rules", "/nonexistent.tx", "true"}).code, kExitInputError);
  EXPECT_EQ(run({"query", "--depth-limit", "100", "length(L,N), N > 1000"}).code, kExitInternal);
}

TEST(CliQuery, DocBinding) {
  const auto in = put("doc.xml", "<r><name>n1</name></r>");
  auto r = run({"query", "--in", in, "transform(Doc/name#1,T)"});
  EXPECT_EQ(r.out, "YES. T/n1\n");
}

TEST(CliQuery, DepthLimitFromEnvironment) {
  ::setenv("TERMXFORM_DEPTH", "50", 1);
  const auto r = run({"query", "between(1,1000,X), X > 999"});
  ::unsetenv("TERMXFORM_DEPTH");
  EXPECT_EQ(r.code, kExitInternal);
  EXPECT_EQ(run({"query", "between(1,1000,X), X > 999"}).code, kExitOk);
}

TEST(CliTransform, ExampleOneEndToEnd) {
  const auto out = (dir() / "e1.xml").string();
  std::filesystem::remove(out);
  const auto r = run({"transform", "--rules", sample("example1.tx"), "--in", sample("example1.xml"), "--out", out});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(out), "a");
  EXPECT_NE(r.err.find("solutions: 1"), std::string::npos);
}

TEST(CliTransform, NoSolutionWritesNothing) {
  const auto rules = put("none.tx", "go(_,_):-fail.");
  const auto out = (dir() / "none.xml").string();
  std::filesystem::remove(out);
  const auto r = run({"transform", "--rules", rules, "--in", sample("example1.xml"), "--out", out});
  EXPECT_EQ(r.code, kExitNoSolution);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(CliTransform, MalformedInputIsInputError) {
  const auto in = put("bad.xml", "<a><b></a>");
  const auto out = (dir() / "bad_out.xml").string();
  const auto r = run({"transform", "--rules", sample("example1.tx"), "--in", in, "--out", out});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find(":1:"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(CliTransform, AllWritesNumberedFiles) {
  const auto rules = put("two.tx", "go(_,element(a,[],[])). go(_,element(b,[],[])).");
  const auto out = (dir() / "many.xml").string();
  const auto r = run({"transform", "--all", "--rules", rules, "--in", sample("example1.xml"), "--out", out});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(slurp((dir() / "many.1.xml").string()), "<a/>");
  EXPECT_EQ(slurp((dir() / "many.2.xml").string()), "<b/>");
}

TEST(CliTransform, DefaultTextCopyAndNoWrap) {
  const auto rules = put("empty.tx", "");
  const auto in = put("mixed.xml", "<r><a>x</a><b>y</b></r>");
  const auto out = (dir() / "mixed_out.xml").string();
  auto r = run({"transform", "--rules", rules, "--in", in, "--out", out, "--default-text", "copy"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(slurp(out), "<result>xy</result>");
  r = run({"transform", "--rules", rules, "--in", in, "--out", out, "--default-text", "copy", "--no-wrap"});
  EXPECT_EQ(slurp(out), "x\ny");
  std::filesystem::remove(out);
  r = run({"transform", "--rules", rules, "--in", in, "--out", out});
  EXPECT_EQ(r.code, kExitNoSolution);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(CliRoundtrip, Codes) {
  EXPECT_EQ(run({"roundtrip", "--in", put("rt.xml", "<p>a &lt; b</p>")}).code, kExitOk);
  EXPECT_EQ(run({"roundtrip", "--in", put("trunc.xml", "<p><q>")}).code, kExitInputError);
}

TEST(CliMetrics, CountsAndCsv) {
  auto r = run({"metrics", "--counts", "14,20,62,36"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("N_T     139.74"), std::string::npos) << r.out;
  r = run({"metrics", "--counts", "2,2,2,2", "--csv"});
  EXPECT_NE(r.out.find(",0.0,8.00,"), std::string::npos) << r.out;
  EXPECT_EQ(run({"metrics", "--counts", "0,0,0,0"}).code, kExitInputError);
  EXPECT_EQ(run({"metrics", "--counts", "1,2"}).code, kExitInputError);
  EXPECT_EQ(run({"metrics"}).code, kExitInputError);
  EXPECT_EQ(run({"metrics", "--src", sample("gcd.tx")}).code, kExitOk);
}

TEST(CliCheck, WarningsButSuccess) {
  auto r = run({"check", "--rules", "prelude-only"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.find("Warning"), std::string::npos) << r.out;
  r = run({"check", "--rules", put("typo.tx", "p(X):-membr(X,[a]).\ntemplate(foo,[]).")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("unknown predicate membr/2"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("can never match a node"), std::string::npos) << r.out;
  EXPECT_EQ(run({"check", "--rules", put("broken.tx", "p(:-.")}).code, kExitInputError);
}

TEST(CliCheck, LintLibraryFunction) {
  EXPECT_TRUE(lint_rules("p(X):-member(X,[a]), q(X).\nq(_).").empty());
  EXPECT_EQ(lint_rules("p:-findall(X,zz(X),_).").size(), 1u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitInputError);
  EXPECT_EQ(run({"bogus"}).code, kExitInputError);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}
