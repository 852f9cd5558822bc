#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spkm/cli.hpp"
#include "spkm/io.hpp"
#include "spkm/validation.hpp"

using namespace spkm;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spkmeans");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "spkm_cli_test";
    fs::create_directories(dir_);
    validation::TopicCorpusSpec spec;
    spec.rows = 300;
    spec.dim = 800;
    spec.seed = 5;
    input_ = (dir_ / "d.svml").string();
    write_svmlight(fs::path(input_), validation::make_topic_corpus(spec));
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string input_;
};

}  // namespace

TEST_F(CliTest, UnknownVariantIsAConfigError) {
  const auto r = run_cli({"--input", input_, "--k", "3", "--variant", "bogus"});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("--variant"), std::string::npos);
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(run_cli({"--input", input_}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--k", "3"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "3", "--alpha", "3"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "3", "--init", "x"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "3,4"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "301"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "3", "--nope"}).code, cli::kConfigError);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run_cli({"--input", (dir_ / "missing.svml").string(), "--k", "3"}).code,
            cli::kDataError);
  const auto bad = (dir_ / "bad.svml").string();
  std::ofstream(bad) << "0 1:1\n0 2:x\n";
  const auto r = run_cli({"--input", bad, "--k", "1"});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  const auto zero = (dir_ / "zero.svml").string();
  std::ofstream(zero) << "0 1:1\n0 1:0\n";
  EXPECT_EQ(run_cli({"--input", zero, "--k", "1"}).code, cli::kDataError);
}

TEST_F(CliTest, RepeatedRunsAreDeterministic) {
  const std::vector<std::string> args{"--input", input_,  "--k",     "10",  "--variant",
                                      "elkan",   "--init", "kmpp",   "--alpha", "1.0",
                                      "--seed",  "42",     "--repeats", "10"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  const auto ra = csv_rows(a.out), rb = csv_rows(b.out);
  ASSERT_EQ(ra.size(), 10u);
  ASSERT_EQ(rb.size(), 10u);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ASSERT_EQ(ra[i].size(), 8u);
    EXPECT_EQ(ra[i][0], std::to_string(42 + i));
    EXPECT_EQ(ra[i][1], "elkan");
    EXPECT_EQ(ra[i][2], "10");
    // Everything except wall_ns is deterministic.
    for (std::size_t f = 0; f < 7; ++f) EXPECT_EQ(ra[i][f], rb[i][f]);
  }
}

TEST_F(CliTest, OutputsReloadConsistently) {
  const auto assign = (dir_ / "a.csv").string();
  const auto stats = (dir_ / "s.csv").string();
  const auto r = run_cli({"--input", input_, "--k", "7", "--variant", "hamerly", "--seed", "3",
                          "--out-assignments", assign, "--out-stats", stats});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto summary = csv_rows(r.out).at(0);

  const auto corpus = parse_svmlight(fs::path(input_));
  const Dataset data(corpus.rows, corpus.dim);
  const auto a = read_assignments(assign);
  ASSERT_EQ(a.size(), data.size());

  // Rebuild the centers from the assignments alone and recompute the objective.
  CentroidSet c = CentroidSet::from_centers(std::vector<DenseVector>(7, DenseVector(data.dim())));
  update_centers(data, {}, a, c, true);
  EXPECT_NEAR(std::stod(summary[6]), compute_objective(data, a, c), 1e-9);

  const auto st = read_stats_csv(stats);
  ASSERT_EQ(std::to_string(st.size()), summary[3]);
  std::uint64_t sims = 0, cc = 0;
  for (const auto& s : st) {
    sims += s.sim_count;
    cc += s.cc_sim_count;
  }
  EXPECT_EQ(std::to_string(sims), summary[4]);
  EXPECT_EQ(std::to_string(cc), summary[5]);
  EXPECT_EQ(std::to_string(cc), std::to_string(st.size() * 21));
}

TEST_F(CliTest, SingleClusterAssignments) {
  const auto assign = (dir_ / "a1.csv").string();
  ASSERT_EQ(run_cli({"--input", input_, "--k", "1", "--out-assignments", assign}).code, cli::kOk);
  std::ifstream in(assign);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.substr(line.size() - 2), ",0");
  }
  EXPECT_EQ(lines, 300u);
}

TEST_F(CliTest, PerSeedOutputFiles) {
  const auto assign = (dir_ / "out.csv").string();
  ASSERT_EQ(run_cli({"--input", input_, "--k", "4", "--seed", "8", "--repeats", "2",
                     "--out-assignments", assign})
                .code,
            cli::kOk);
  EXPECT_TRUE(fs::exists(dir_ / "out.seed8.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out.seed9.csv"));
  EXPECT_EQ(cli::per_seed_path("x/y.csv", 5, 1), fs::path("x/y.csv"));
}

TEST_F(CliTest, AuditReportsPass) {
  const auto r = run_cli({"--input", input_, "--k", "12", "--variant", "simp_elkan", "--audit"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.err.find("PASS"), std::string::npos);
}

TEST_F(CliTest, TfidfFlags) {
  EXPECT_EQ(run_cli({"--input", input_, "--k", "5", "--tfidf"}).code, cli::kOk);
  EXPECT_EQ(run_cli({"--input", input_, "--k", "5", "--tfidf-smooth"}).code, cli::kOk);
}

TEST_F(CliTest, BenchComparesVariants) {
  const auto r = run_cli({"bench", "--input", input_, "--k", "5,12", "--variant", "all",
                          "--seed", "2", "--repeats", "2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 11u);
  const auto header = csv_rows(cli::kBenchHeader).at(0);
  EXPECT_EQ(rows[0], header);

  const auto corpus = parse_svmlight(fs::path(input_));
  const Dataset data(corpus.rows, corpus.dim);
  for (std::size_t block = 0; block < 2; ++block) {
    const std::size_t k = block == 0 ? 5 : 12;
    const auto& standard = rows[1 + 5 * block];
    EXPECT_EQ(standard[0], "standard");
    EXPECT_EQ(standard[1], std::to_string(k));
    // Every standard iteration costs n * k similarities.
    EXPECT_NEAR(std::stod(standard[7]), std::stod(standard[5]) * 300.0 * k, 1e-6);
    for (std::size_t v = 1; v < 5; ++v) {
      const auto& row = rows[1 + 5 * block + v];
      EXPECT_NEAR(std::stod(row[9]), std::stod(standard[9]), 1e-9 * std::stod(standard[9]));
      EXPECT_LE(std::stod(row[7]), std::stod(standard[7]));
    }
  }
}
