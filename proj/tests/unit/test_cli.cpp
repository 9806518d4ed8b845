#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "gaborface/file_io.hpp"
#include "synthetic_study.hpp"

namespace fs = std::filesystem;
using namespace gaborface;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(GABORFACE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path study(const std::string& name) {
  auto root = fixtures::scratch_dir(name);
  synth::SyntheticStudySpec spec;
  spec.expressers = {"AA", "BB"};
  spec.images_per_expresser = 7;
  spec.size = 96;
  synth::write_synthetic_study(root, spec);
  return root;
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto root = study("cli_codes");
  const std::string cfg = (root / "study.json").string();
  EXPECT_EQ(run("--config " + cfg), 0);
  EXPECT_EQ(run("--config /nonexistent.json"), 1);
  EXPECT_EQ(run("--config " + cfg + " --stage nonsense"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, MissingGridIsValidationError) {
  auto root = study("cli_grid");
  fs::remove(root / "grids" / "BB02.json");
  EXPECT_EQ(run("--config " + (root / "study.json").string() + " --out " + (root / "o").string()), 1);
  EXPECT_FALSE(fs::exists(root / "o" / "jets"));
}

TEST(Cli, FailedGroupGivesRuntimeExit) {
  auto root = study("cli_fail");
  const std::string cfg = (root / "study.json").string();
  EXPECT_EQ(run("--config " + cfg + " encode"), 0);
  fs::remove(root / "out" / "jets" / "AA03.json");
  EXPECT_EQ(run("--config " + cfg + " --stage matrices"), 2);
}

TEST(Cli, ExcludeAndNoFear) {
  auto root = study("cli_opts");
  const std::string cfg = (root / "study.json").string();
  const auto out = root / "x";
  EXPECT_EQ(run("--config " + cfg + " --out " + out.string() + " --exclude BB --no-fear --threads 3"), 0);
  auto text = read_text_file(out / "summary.txt");
  EXPECT_NE(text.find("BB*"), std::string::npos) << text;
  auto csv = read_text_file(out / "summary.csv");
  EXPECT_NE(csv.find(",1\n"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / "jets" / "AA06.json"));  // labelled FE
}

TEST(Cli, SeedOverrideChangesNothingDeterministic) {
  auto root = study("cli_seed");
  const std::string cfg = (root / "study.json").string();
  EXPECT_EQ(run("--config " + cfg + " --out " + (root / "a").string() + " --seed 5"), 0);
  EXPECT_EQ(run("--config " + cfg + " --out " + (root / "b").string() + " --seed 5"), 0);
  EXPECT_EQ(read_text_file(root / "a/nmds/AA/gabor.json"), read_text_file(root / "b/nmds/AA/gabor.json"));
}
