#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "clq/cli_runner.hpp"

using namespace clq;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  fs::path dir(CLQ_TEST_TMPDIR);
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Cli, ConstructQ5WritesPassingArtifact) {
  const auto path = tmp("q5.json");
  const auto r = run({"construct", "--q", "5", "--threads", "1", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["format_version"], "1");
  ASSERT_EQ(j["tight_sets"].size(), 4u);
  EXPECT_EQ(j["tight_sets"][0]["label"], "T1");
  EXPECT_EQ(j["tight_sets"][0]["points"].size(), 372u);
  EXPECT_EQ(j["tight_sets"][1]["points"].size(), 372u);
  EXPECT_EQ(j["tight_sets"][0]["x"], 12);
  for (const auto& v : j["verdicts"]) EXPECT_TRUE(v["pass"].get<bool>()) << v["check"];
}

TEST(Cli, ArtifactIsByteDeterministic) {
  const auto a = tmp("det_a.json"), b = tmp("det_b.json");
  ASSERT_EQ(run({"construct", "--q", "5", "--threads", "1", "--seed", "9", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"construct", "--q", "5", "--threads", "2", "--seed", "9", "--out", b.string()}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  // stdout form matches the file form
  const auto r = run({"construct", "--q", "5", "--threads", "1", "--seed", "9"});
  EXPECT_EQ(r.out, slurp(a));
}

TEST(Cli, VerifyRoundTrip) {
  const auto path = tmp("q5_rt.json");
  ASSERT_EQ(run({"construct", "--q", "5", "--out", path.string()}).code, 0);
  const auto r = run({"verify", path.string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  bool reproducible = false;
  for (const auto& v : j["verdicts"]) reproducible = reproducible || v["check"] == "artifact_reproducible";
  EXPECT_TRUE(reproducible);
}

TEST(Cli, TamperedArtifactIsRejected) {
  const auto path = tmp("q5_src.json");
  ASSERT_EQ(run({"construct", "--q", "5", "--out", path.string()}).code, 0);
  const auto base = nlohmann::json::parse(slurp(path));

  // swap a T1 point for a T2 point: still on the quadric, no longer tight
  auto j = base;
  j["tight_sets"][0]["points"][0] = base["tight_sets"][1]["points"][0];
  const auto p1 = tmp("tampered_swap.json");
  std::ofstream(p1) << j.dump();
  EXPECT_EQ(run({"verify", p1.string()}).code, 1);

  // a point off the quadric
  j = base;
  j["tight_sets"][0]["points"][0] = {1, 1};
  const auto p2 = tmp("tampered_off.json");
  std::ofstream(p2) << j.dump();
  EXPECT_EQ(run({"verify", p2.string()}).code, 2);

  // a partition that does not come from a1
  j = base;
  std::swap(j["partition"]["X1"], j["partition"]["X2"]);
  const auto p3 = tmp("tampered_partition.json");
  std::ofstream(p3) << j.dump();
  EXPECT_NE(run({"verify", p3.string()}).code, 0);

  const auto p4 = tmp("not_json.json");
  std::ofstream(p4) << "{ nope";
  EXPECT_EQ(run({"verify", p4.string()}).code, 2);
  EXPECT_EQ(run({"verify", tmp("missing.json").string()}).code, 2);
}

TEST(Cli, InvalidOrdersExitTwo) {
  for (const char* q : {"7", "13", "25", "6"}) EXPECT_EQ(run({"construct", "--q", q}).code, 2) << q;
  const auto r = run({"construct", "--q", "13", "--json"});
  ASSERT_EQ(r.code, 2);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["error"], "InvalidQ");
  EXPECT_EQ(j["exit_code"], 2);
  EXPECT_EQ(run({"construct", "--q", "5", "--sign", "sideways"}).code, 2);
  EXPECT_EQ(run({"construct", "--q", "5", "--checks", "bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"construct", "--q", "5", "--a1", "6"}).code, 2);
}

TEST(Cli, MemoryCapExitsThree) {
  const auto r = run({"construct", "--q", "29", "--mem-cap", "1000000", "--json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(nlohmann::json::parse(r.out)["exit_code"], 3);
}

TEST(Cli, ValidateConfig) {
  cli::JobConfig c;
  c.command = "construct";
  c.q = 81;
  const auto v = cli::validate_config(c);
  EXPECT_EQ(v.p, 3u);
  EXPECT_EQ(v.h, 4u);
  c.q = 17;
  EXPECT_EQ(cli::validate_config(c).p, 17u);
  c.q = 13;
  EXPECT_THROW(cli::validate_config(c), Error);
  c.q = 0;
  c.p = 3;
  c.h = 2;
  EXPECT_EQ(cli::validate_config(c).q, 9u);
  EXPECT_EQ(cli::factor_prime_power(12), std::nullopt);
  EXPECT_EQ(cli::factor_prime_power(125), (std::pair<std::uint32_t, std::uint32_t>{5, 3}));
}

TEST(Cli, DecompositionTablesAsJson) {
  const auto r = run({"report-decomposition", "--q", "9", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["e"], 1);
  EXPECT_EQ(j["lines_per_point"]["P1"]["L1"], 30);
  EXPECT_EQ(j["lines_per_point"]["P1"]["L2"], 60);
  EXPECT_EQ(j["lines_per_point"]["pi"]["L1"], 40);
  EXPECT_EQ(j["points_per_line"]["P1"]["L1"], 3);
  EXPECT_EQ(j["points_per_line"]["P2"]["L1"], 6);
  EXPECT_EQ(j["lines_per_point"], j["expected_lines_per_point"]);
  EXPECT_EQ(j["points_per_line"], j["expected_points_per_line"]);
  EXPECT_EQ(run({"report-decomposition", "--q", "5"}).code, 2);
}

TEST(Cli, OtherCommands) {
  const auto e = run({"export-pg3", "--q", "5"});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto j = nlohmann::json::parse(e.out);
  ASSERT_EQ(j["line_classes"].size(), 2u);
  EXPECT_EQ(j["line_classes"][0]["lines"].size(), 372u);
  EXPECT_EQ(j["scene"]["lines"], 806);

  const auto p = run({"report-pattern", "--q", "5", "--line", "0"});
  EXPECT_EQ(p.code, 0) << p.err;
  EXPECT_FALSE(p.out.empty());

  const auto cs = run({"verify-charsums", "--q", "9", "--json"});
  EXPECT_EQ(cs.code, 0) << cs.err;
  EXPECT_TRUE(nlohmann::json::parse(cs.out)["pass"].get<bool>());

  EXPECT_EQ(run({"construct", "--q", "5", "--sign", "plus", "--checks", "tight,cl"}).code, 0);
  EXPECT_EQ(run({"construct", "--p", "3", "--h", "2", "--checks", "stabilizer", "--a1", "3"}).code, 0);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
