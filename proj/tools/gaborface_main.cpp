// Command-line driver for the expression-coding study pipeline.
//
//   gaborface --config study.json [--stage <name>|<name>] [--out dir] [--seed n]
//             [--threads n] [--exclude A,B] [--no-fear]
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "gaborface/study.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void print_warnings(const gaborface::StageReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning [" << report.stage << "]: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor-jet coding of facial expression images and comparison with semantic ratings"};
  std::string config_path;
  std::string stage = "study";
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> exclude;
  bool no_fear = false;

  app.add_option("--config", config_path, "Study configuration (JSON)")->required();
  std::vector<std::string> names;
  for (auto n : gaborface::stage_names()) names.emplace_back(n);
  app.add_option("stage,--stage", stage, "Stage to run (default: study, which runs all stages)")
      ->check(CLI::IsMember(names));
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for all randomized steps");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--exclude", exclude, "Expressers left out of the summary averages")->delimiter(',');
  app.add_flag("--no-fear", no_fear, "Drop fear ratings and fear-labelled images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    gaborface::StudyConfig config = gaborface::load_study_config(config_path);
    if (*out_opt) config.output_dir = out_dir;
    if (*seed_opt) config.options.seed = seed;
    if (*threads_opt) config.options.threads = threads;
    if (!exclude.empty()) config.options.exclude = exclude;
    if (no_fear) config.options.no_fear = true;

    bool failed = false;
    if (stage == "study") {
      for (const auto& report : gaborface::run_study(config)) {
        print_warnings(report);
        failed = failed || report.any_failed();
      }
      std::cout << gaborface::read_text_file(config.output_dir / "summary.txt");
    } else {
      const auto report = gaborface::run_stage(config, stage);
      print_warnings(report);
      failed = report.any_failed();
    }
    return failed ? kExitRuntime : 0;
  } catch (const gaborface::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
