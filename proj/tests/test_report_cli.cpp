#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cli_app.hpp"
#include "pcanml/report.hpp"
#include "support/schema_lite.hpp"

using namespace pcanml;
namespace fs = std::filesystem;

namespace {

std::string source_path(const std::string& rel) { return std::string(PCANML_SOURCE_DIR) + "/" + rel; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const pcanml::testing::SchemaLite& report_schema() {
  static const pcanml::testing::SchemaLite schema(nlohmann::json::parse(slurp(source_path("schema/run_report.schema.json"))));
  return schema;
}

std::vector<std::string> schema_errors(const std::string& text) {
  return report_schema().validate(nlohmann::json::parse(text));
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pcanml_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

RunReport sample_report(std::mt19937_64& rng) {
  SyntheticSpec spec;
  spec.n = 30 + rng() % 30;
  spec.m = 4 + rng() % 6;
  spec.true_k = 1 + rng() % (spec.m - 1);
  spec.seed = rng();
  cli::SelectOptions opt;
  opt.reproducible = rng() % 2 == 0;
  opt.both_gram_modes = rng() % 2 == 0;
  InputDescriptor d;
  d.kind = "synthetic";
  d.transform = "none";
  d.synthetic = spec;
  return cli::build_report(generate_lin(spec), d, GeneratorMetadata{}, {"a note"}, opt);
}

std::vector<std::pair<int, double>> parse_scree(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "component,explained_variance");
  std::vector<std::pair<int, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stoi(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

}  // namespace

TEST(ReportJson, RoundTripsThroughText) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const RunReport r = sample_report(rng);
    const Json j = to_json(r);
    EXPECT_EQ(run_report_from_json(j), r);
    EXPECT_EQ(run_report_from_json(Json::parse(j.dump(2))), r);
  }
}

TEST(ReportJson, ValidatesAgainstSchema) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto errors = schema_errors(to_json(sample_report(rng)).dump());
    EXPECT_TRUE(errors.empty()) << errors.front();
  }
}

TEST(ReportJson, SchemaRejectsMissingField) {
  std::mt19937_64 rng(33);
  Json j = to_json(sample_report(rng));
  j.erase("selection");
  EXPECT_FALSE(schema_errors(j.dump()).empty());
  j = to_json(sample_report(rng));
  j["unexpected"] = 1;
  EXPECT_FALSE(schema_errors(j.dump()).empty());
}

TEST(Cli, EmptyCsvIsDataError) {
  EXPECT_EQ(run_cli({"select", "--input", source_path("tests/fixtures/empty.csv")}).code, cli::kData);
}

TEST(Cli, PrefixLongerThanDataIsUsageError) {
  const auto r = run_cli({"compare", "--synthetic", "lin", "--n", "50", "--m", "6", "--true-k", "2", "--lengths", "100"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("100"), std::string::npos);
}

TEST(Cli, InvalidEpsilonIsUsageError) {
  const std::string in = source_path("tests/fixtures/diag_321.csv");
  EXPECT_EQ(run_cli({"select", "--input", in, "--epsilon", "0.3"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"select", "--input", in, "--epsilon", "1/3"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"select", "--input", in, "--epsilon", "1/4"}).code, cli::kOk);
}

TEST(Cli, MissingInputIsUsageError) {
  EXPECT_EQ(run_cli({"select"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"select", "--input", "a.csv", "--synthetic", "lin"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"select", "--bogus"}).code, cli::kUsage);
}

TEST(Cli, UnreadableFileIsDataError) {
  EXPECT_EQ(run_cli({"select", "--input", source_path("tests/fixtures/none.csv")}).code, cli::kData);
}

TEST(Cli, ScreeOfDiagonalFixture) {
  const auto r = run_cli({"scree", "--input", source_path("tests/fixtures/diag_321.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = parse_scree(r.out);
  ASSERT_EQ(rows.size(), 3u);
  const double expected[] = {9.0, 4.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].first, i + 1);
    EXPECT_NEAR(rows[i].second, expected[i], 1e-12);
  }
}

TEST(Cli, NormalizedScreeSumsToOne) {
  const auto r = run_cli({"scree", "--synthetic", "lin", "--n", "80", "--m", "7", "--true-k", "3", "--normalized"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  double total = 0.0;
  for (const auto& [c, v] : parse_scree(r.out)) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST_F(TempDir, GenerateThenScreeShowsRankDrop) {
  const std::string csv = path("rank3.csv");
  auto r = run_cli({"generate", "--n", "100", "--m", "8", "--true-k", "3", "--noise", "0.001", "--out", csv});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  r = run_cli({"scree", "--input", csv});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = parse_scree(r.out);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_GT(rows[2].second / rows[3].second, 10.0);
}

TEST_F(TempDir, GenerateIsDeterministicWithSidecar) {
  const std::vector<std::string> common{"generate", "--n", "20", "--m", "5", "--true-k", "2", "--noise", "0"};
  auto a = common;
  a.insert(a.end(), {"--out", path("a.csv")});
  auto b = common;
  b.insert(b.end(), {"--out", path("b.csv"), "--meta", path("b.json")});
  ASSERT_EQ(run_cli(a).code, cli::kOk);
  ASSERT_EQ(run_cli(b).code, cli::kOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  const RealMatrix x = load_matrix_csv(path("a.csv"), true).values;
  EXPECT_LE(tail_energy(svd(x), 2), 1e-16 * frobenius_sq(x));

  const auto meta = Json::parse(slurp(path("a.csv.meta.json")));
  EXPECT_EQ(meta["generator"]["noise_sigma_note"], std::string(kNoiseSigmaNote));
  EXPECT_EQ(meta["generator"]["name"], "mt19937_64+box-muller");
  EXPECT_EQ(meta["spec"]["true_k"], 2);
  EXPECT_EQ(slurp(path("a.csv.meta.json")), slurp(path("b.json")));
}

TEST(Cli, CompareOverPrefixes) {
  const auto r = run_cli({"compare", "--synthetic", "lin", "--true-k", "5", "--lengths", "200,500", "--reproducible"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto all = Json::parse(r.out);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0]["n"], 200);
  EXPECT_EQ(all[1]["n"], 500);
  for (const auto& rep : all) {
    EXPECT_TRUE(rep["selection"].contains("k_bracket"));
    EXPECT_TRUE(rep["baselines"]["kaiser"].is_number());
    EXPECT_TRUE(rep["baselines"]["kneedle"].is_number());
    EXPECT_EQ(rep["input"]["rows_used"], rep["n"]);
    EXPECT_TRUE(schema_errors(rep.dump()).empty());
  }
}

TEST_F(TempDir, SelectWritesTable) {
  const auto r = run_cli({"select", "--synthetic", "lin", "--n", "60", "--m", "6", "--true-k", "2", "--both-gram-modes",
                          "--table", path("t.csv"), "--out", path("r.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream table(slurp(path("t.csv")));
  std::string line;
  std::getline(table, line);
  EXPECT_EQ(line, "gram_mode,k,tail_energy,tail_term,gram_term,ratio_term,count_term,lower_total,upper_total,gap_ratio,floored");
  int rows = 0;
  while (std::getline(table, line)) ++rows;
  EXPECT_EQ(rows, 2 * 5);
  const auto rep = Json::parse(slurp(path("r.json")));
  EXPECT_EQ(rep["secondary_selection"]["gram_mode"], "per_row_sum");
}

TEST(Cli, ReproducibleOutputIsByteIdentical) {
  const std::vector<std::string> args{"select", "--synthetic", "lin", "--n", "80", "--m", "8", "--true-k", "3",
                                      "--reproducible"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, cli::kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(Json::parse(a.out).contains("timestamp"));
  EXPECT_TRUE(Json::parse(run_cli({"select", "--synthetic", "lin", "--n", "80", "--m", "8", "--true-k", "3"}).out)
                  .contains("timestamp"));
}

TEST(Cli, AutoEpsilonIsHalfOverM) {
  const auto r = run_cli({"select", "--synthetic", "lin", "--n", "60", "--m", "9", "--true-k", "3", "--reproducible"});
  ASSERT_EQ(r.code, cli::kOk);
  const auto rep = Json::parse(r.out);
  EXPECT_EQ(rep["epsilon_inverse"], 18);
  EXPECT_DOUBLE_EQ(rep["epsilon"].get<double>(), 1.0 / 18.0);
}

TEST_F(TempDir, SpawnedBinaryExitCodes) {
  const std::string cli = PCANML_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " >" + path("o.txt") + " 2>" + path("e.txt")).c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("select --input " + source_path("tests/fixtures/diag_321.csv") + " --reproducible"), 0);
  EXPECT_TRUE(schema_errors(slurp(path("o.txt"))).empty());
  EXPECT_EQ(status("select --input " + source_path("tests/fixtures/empty.csv")), 3);
  EXPECT_EQ(status("select"), 2);
  EXPECT_EQ(status("--version"), 0);
}
