#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded unless asked for.
Result run(const std::string& args, bool with_stderr = false) {
  std::string cmd = std::string("\"") + CRNATOMS_CLI + "\" " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string("\"") + CRNATOMS_FIXTURES + "/" + name + "\""; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("crnatoms_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("enumerate --m 9").code, 1);
  EXPECT_EQ(run("lift only-one-arg").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ParsePrintsCanonicalForm) {
  Result r = run("parse " + fixture("pair.crn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "network:   2A <-> A+B; A+B <-> A+C")) << r.out;
  EXPECT_TRUE(contains(r.out, "species:   3  reactions: 4"));
}

TEST_F(Cli, ParseReadsStandardInput) {
  Result r = run("parse - < " + fixture("pair.crn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "reactions: 4"));
}

TEST_F(Cli, InputErrorsExitWithTwo) {
  Result bad = run("parse " + fixture("bad_syntax.crn"), true);
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(contains(bad.out, "offset")) << bad.out;
  EXPECT_EQ(run("parse " + fixture("bad_trivial.crn")).code, 2);
  EXPECT_EQ(run("parse " + path("missing.crn")).code, 2);
  EXPECT_EQ(run("enumerate --partition \"(3,x)\"").code, 2);
}

TEST_F(Cli, AnalyzeReportsCriterion) {
  Result r = run("analyze " + fixture("pair.crn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "tm partition:     (5,2,1)")) << r.out;
  EXPECT_TRUE(contains(r.out, "jacobian criterion (fully open CFSTR): fails"));
  EXPECT_TRUE(contains(r.out, "positive term:"));
  EXPECT_TRUE(contains(r.out, "negative term:"));
  Result n = run("analyze " + fixture("flow_n.crn"));
  EXPECT_TRUE(contains(n.out, "one-reaction classification: multistationary")) << n.out;
}

TEST_F(Cli, EnumerateCounts) {
  Result r = run("enumerate --count-only");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "m=5 (1,4,7,8,10,9,2) 41")) << r.out;
  EXPECT_TRUE(contains(r.out, "total 385"));
  Result lines = run("enumerate --m 4");
  std::istringstream in(lines.out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_TRUE(contains(line, "\"canonical_text\"")) << line;
    EXPECT_TRUE(contains(line, "\"m\":4")) << line;
  }
  EXPECT_EQ(n, 12u);
  Result cell = run("enumerate --partition \"(2,1,1,1,1,1)\" --count-only");
  EXPECT_TRUE(contains(cell.out, "total 6")) << cell.out;
}

TEST_F(Cli, SearchThenLift) {
  Result s = run("search " + fixture("running_sub.crn") + " --seed 4 --budget 200 --out " + path("w.json"));
  ASSERT_EQ(s.code, 0) << s.out;
  EXPECT_TRUE(contains(s.out, "witness (search"));
  EXPECT_TRUE(fs::exists(dir_ / "w.json"));
  Result l = run("lift " + path("w.json") + " " + fixture("running.crn") + " --out " + path("lifted.json"));
  ASSERT_EQ(l.code, 0) << l.out;
  EXPECT_TRUE(contains(l.out, "lifted to"));
  std::ifstream in(dir_ / "lifted.json");
  std::string json((std::istreambuf_iterator<char>(in)), {});
  EXPECT_TRUE(contains(json, "\"provenance\":\"lift\"")) << json;
}

TEST_F(Cli, EmbeddedLiftNeedsFlowType) {
  ASSERT_EQ(run("search " + fixture("flow_n.crn") + " --out " + path("n.json")).code, 0);
  EXPECT_EQ(run("lift " + path("n.json") + " " + fixture("flow_g.crn") + " --mode embedded").code, 3);
  EXPECT_EQ(run("lift " + path("n.json") + " " + fixture("flow_gprime.crn") + " --mode embedded --out " +
                path("g.json"))
                .code,
            0);
}

TEST_F(Cli, SearchWithoutWitnessExitsWithThree) {
  Result r = run("search --budget 20 --cfstr - --out " + path("none.json") + " <<< 'A+B -> 0'");
  // popen uses /bin/sh, which may lack here-strings; fall back to a file.
  if (r.code == 1 || r.code == 2) {
    std::ofstream(dir_ / "inj.crn") << "A+B -> 0\n";
    r = run("search --budget 20 --cfstr " + path("inj.crn") + " --out " + path("none.json"));
  }
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_TRUE(contains(r.out, "no witness found"));
}

TEST_F(Cli, SearchRejectsNonCfstrWithoutFlag) {
  std::ofstream(dir_ / "closed.crn") << "A -> 2A; A+B -> 0\n";
  EXPECT_EQ(run("search " + path("closed.crn")).code, 2);
  EXPECT_EQ(run("search --cfstr " + path("closed.crn") + " --out " + path("w.json")).code, 0);
}

TEST_F(Cli, AtlasWritesArtifacts) {
  Result r = run("--threads 2 atlas --budget 60 --seed 2 --out " + path("atlas"), true);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "# crnatoms atlas")) << r.out;
  EXPECT_TRUE(contains(r.out, "total  networks 385"));
  for (const char* f : {"report.json", "witnesses.jsonl", "minimal_witnesses.jsonl", "poset.dot", "poset.json"})
    EXPECT_TRUE(fs::exists(dir_ / "atlas" / f)) << f;
  EXPECT_TRUE(fs::exists(dir_ / "atlas" / "checkpoints"));
  // A resumed run from the checkpoints writes the same report.
  std::ifstream a(dir_ / "atlas" / "report.json");
  std::string first((std::istreambuf_iterator<char>(a)), {});
  ASSERT_EQ(run("atlas --budget 60 --seed 2 --out " + path("atlas")).code, 0);
  std::ifstream b(dir_ / "atlas" / "report.json");
  std::string second((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(first, second);
}
