#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "gaborface/nmds.hpp"
#include "gaborface/rank_stats.hpp"
#include "gaborface/study.hpp"
#include "synthetic_study.hpp"

using namespace gaborface;
namespace fs = std::filesystem;

namespace {

StudyConfig make_study(const std::string& name, std::vector<std::string> expressers = {"AA", "BB"},
                       int images = 8) {
  const auto root = fixtures::scratch_dir(name);
  synth::SyntheticStudySpec spec;
  spec.expressers = std::move(expressers);
  spec.images_per_expresser = images;
  spec.size = 96;
  synth::write_synthetic_study(root, spec);
  return load_study_config(root / "study.json");
}

}  // namespace

TEST(StudyConfig, ParsesAndResolvesPaths) {
  auto c = parse_study_config(R"({
    "images": "img", "grids": "/abs/grids", "ratings": "r.csv", "output": "out",
    "expressers": {"KA.HA1": "KA", "KA.SA1": "KA", "KL.FE1": "KL"},
    "expressions": {"KL.FE1": "FE"},
    "options": {"nmds_dims": 3, "threads": 2, "exclude": ["KL"], "no_fear": true}
  })", "/base");
  EXPECT_EQ(c.image_dir, fs::path("/base/img"));
  EXPECT_EQ(c.grid_dir, fs::path("/abs/grids"));
  EXPECT_EQ(c.options.nmds_dims, 3);
  EXPECT_EQ(c.options.threads, 2u);
  EXPECT_EQ(c.options.exclude, std::vector<std::string>{"KL"});
  EXPECT_EQ(c.bank(), FilterBank::standard());
  EXPECT_EQ(c.image_ids(), (std::vector<std::string>{"KA.HA1", "KA.SA1"}));
  c.options.no_fear = false;
  EXPECT_EQ(c.groups().at("KL"), std::vector<std::string>{"KL.FE1"});
}

TEST(StudyConfig, RejectsBadInput) {
  EXPECT_THROW(parse_study_config("{", "/"), FormatError);
  EXPECT_THROW(parse_study_config(R"({"images": "i", "grids": "g", "ratings": "r", "output": "o",
                                      "expressers": {}})", "/"),
               FormatError);
  EXPECT_THROW(parse_study_config(R"({"images": "i", "grids": "g", "ratings": "r", "output": "o",
                                      "expressers": {"../x": "A"}})", "/"),
               FormatError);
  EXPECT_THROW(load_study_config("/nonexistent/study.json"), ValidationError);
}

TEST(Study, FullRunProducesEveryOutput) {
  auto c = make_study("full");
  auto reports = run_study(c);
  ASSERT_EQ(reports.size(), 6u);
  for (const auto& r : reports) EXPECT_FALSE(r.any_failed()) << r.stage;
  const fs::path out = c.output_dir;
  for (const char* rel : {"jets/AA01.json", "matrices/AA/gabor.json", "matrices/BB/semantic.csv",
                          "correlations/AA/gabor.json", "correlations/BB/geometry.json", "summary.csv",
                          "summary.txt", "nmds/AA/gabor.json", "nmds/AA/semantic_scan.csv", "align/BB.json",
                          "plots/AA/gabor.svg", "reports/embed.json", "report.json"}) {
    EXPECT_TRUE(fs::exists(out / rel)) << rel;
  }
  for (const char* e : {"AA", "BB"}) {
    auto r = correlation_from_json(read_text_file(out / "correlations" / e / "gabor.json"));
    EXPECT_EQ(r.n, 28u);
    EXPECT_GT(r.rho, 0.8) << e;
    EXPECT_LT(r.p_two_sided, 0.01) << e;
  }
  auto cfg = configuration_from_json(read_text_file(out / "nmds/AA/semantic.json"));
  EXPECT_EQ(cfg.dimension(), 2);
  EXPECT_LT(cfg.stress, 0.1);
  for (const auto& entry : fs::recursive_directory_iterator(out))
    EXPECT_NE(entry.path().extension(), ".tmp") << entry.path();
}

TEST(Study, StagesRunIndividuallyInOrder) {
  auto c = make_study("stages", {"AA"}, 5);
  auto early = run_stage(c, "matrices");
  ASSERT_TRUE(early.any_failed());
  EXPECT_NE(early.groups[0].message.find("run that stage first"), std::string::npos);
  EXPECT_THROW(run_stage(c, "bogus"), ValidationError);
  for (const char* s : {"encode", "matrices", "correlate", "embed", "align", "plot"}) {
    auto r = run_stage(c, s);
    EXPECT_EQ(r.stage, s);
    EXPECT_FALSE(r.any_failed()) << s;
  }
  EXPECT_TRUE(fs::exists(c.output_dir / "plots/AA/semantic.svg"));
}

TEST(Study, MissingGridFailsBeforeAnyOutput) {
  auto c = make_study("missing_grid", {"AA"}, 4);
  fs::remove(c.grid_dir / "AA03.json");
  try {
    run_encode(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("AA03"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(c.output_dir / "jets"));
}

TEST(Study, SmallGroupSkippedAndBrokenGroupFailsAlone) {
  auto c = make_study("groups", {"AA", "BB"}, 6);
  c.expressers["BB01"] = "CC";
  c.expressers["BB02"] = "CC";
  // Drop the rating rows of one AA image so that group fails at the matrices stage.
  std::string ratings = read_text_file(c.ratings_path), kept;
  for (std::size_t start = 0; start < ratings.size();) {
    auto end = ratings.find('\n', start);
    auto line = ratings.substr(start, end - start + 1);
    if (line.rfind("AA04,", 0) != 0) kept += line;
    start = end + 1;
  }
  write_file_atomic(c.ratings_path, kept);

  auto reports = run_study(c);
  const auto& matrices = reports[1];
  ASSERT_EQ(matrices.groups.size(), 3u);
  EXPECT_EQ(matrices.groups[0].state, GroupState::kFailed);
  EXPECT_NE(matrices.groups[0].message.find("AA04"), std::string::npos);
  EXPECT_EQ(matrices.groups[1].state, GroupState::kOk);
  EXPECT_EQ(matrices.groups[2].state, GroupState::kSkipped);
  EXPECT_FALSE(matrices.warnings.empty());
  EXPECT_TRUE(fs::exists(c.output_dir / "correlations/BB/gabor.json"));
  auto summary = read_text_file(c.output_dir / "summary.csv");
  EXPECT_NE(summary.find("BB,"), std::string::npos);
}

TEST(Study, NoFearDropsImagesAndColumn) {
  auto c = make_study("nofear", {"AA"}, 8);
  c.options.no_fear = true;
  const auto ids = c.image_ids();
  for (const auto& id : ids) EXPECT_NE(c.expressions.at(id), "FE");
  EXPECT_LT(ids.size(), 8u);
  run_study(c);
  auto m = read_text_file(c.output_dir / "matrices/AA/semantic.json");
  for (const auto& [id, label] : c.expressions)
    if (label == "FE") EXPECT_EQ(m.find(id), std::string::npos);
}

TEST(Summary, AveragesRespectExclusion) {
  std::vector<SummaryRow> rows{{"KA", 0.5, 0.01, 0.2, 0.1, false}, {"KL", 0.7, 0.001, 0.4, 0.2, false},
                               {"YM", 0.1, 0.5, std::nullopt, std::nullopt, false}};
  auto all = summarize(rows, {});
  EXPECT_NEAR(*all.gabor_average, 1.3 / 3, 1e-15);
  EXPECT_NEAR(*all.geometry_average, 0.3, 1e-15);
  auto ex = summarize(rows, {"YM"});
  EXPECT_NEAR(*ex.gabor_average, 0.6, 1e-15);
  EXPECT_TRUE(ex.rows[2].excluded);
  auto text = summary_to_text(ex);
  EXPECT_NE(text.find("YM*"), std::string::npos);
  EXPECT_NE(text.find("0.600"), std::string::npos);
  auto csv = summary_to_csv(ex);
  EXPECT_NE(csv.find("YM,0.1,0.5,,,1\n"), std::string::npos) << csv;
}
