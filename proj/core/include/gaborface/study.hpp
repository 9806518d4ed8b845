#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaborface/face_grid.hpp"
#include "gaborface/gabor_bank.hpp"
#include "gaborface/rank_stats.hpp"

namespace gaborface {

struct StudyOptions {
  int nmds_dims = 2;
  /// Largest dimension of the stress-by-dimension scan.
  int scan_max_dims = 4;
  double tolerance = 1e-6;
  int max_iterations = 500;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> permutations;
  unsigned threads = 1;
  bool no_fear = false;
  /// Expressers left out of the summary averages (their rows are still reported).
  std::vector<std::string> exclude;
  ImageSize standard_size{256, 256};
};

/// A study file (JSON). Relative paths resolve against the file's directory.
///
///   {
///     "images": "images", "grids": "grids", "ratings": "ratings.csv", "output": "out",
///     "bank": {"wavenumbers": [...], "orientations": [...], "sigma": 3.14159},   (optional)
///     "grid_template": "template.json",                                           (optional)
///     "expressers": {"<image_id>": "<expresser_id>", ...},
///     "expressions": {"<image_id>": "HA", ...},                                   (optional)
///     "options": {"nmds_dims": 2, "scan_max_dims": 4, "tolerance": 1e-6, "max_iterations": 500,
///                 "seed": 20260917, "permutations": null, "threads": 1,
///                 "standard_size": [256, 256], "exclude": [], "no_fear": false}
///   }
///
/// Images are <images>/<image_id>.pgm, grids <grids>/<image_id>.json.
struct StudyConfig {
  std::filesystem::path image_dir;
  std::filesystem::path grid_dir;
  std::filesystem::path ratings_path;
  std::filesystem::path output_dir;
  std::vector<double> wavenumbers;
  std::vector<double> orientations;
  double sigma = 0.0;
  GridTemplate grid_template = GridTemplate::standard();
  std::map<std::string, std::string> expressers;
  std::map<std::string, std::string> expressions;
  StudyOptions options;

  FilterBank bank() const;

  /// Image ids taking part, sorted; drops fear-labelled images under no_fear.
  std::vector<std::string> image_ids() const;

  /// Expresser id -> sorted image ids.
  std::map<std::string, std::vector<std::string>> groups() const;
};

StudyConfig load_study_config(const std::filesystem::path& path);
StudyConfig parse_study_config(std::string_view json_text, const std::filesystem::path& base_dir);

inline constexpr std::string_view kFearLabel = "FE";
inline constexpr std::string_view kFearAdjective = "fear";

enum class GroupState { kOk, kSkipped, kFailed };
std::string_view to_string(GroupState s);

struct GroupStatus {
  std::string expresser_id;
  std::size_t images = 0;
  GroupState state = GroupState::kOk;
  std::string message;
};

struct StageReport {
  std::string stage;
  std::vector<GroupStatus> groups;
  std::vector<std::string> warnings;

  bool any_failed() const;
};

/// Stage outputs under config.output_dir:
///   jets/<image>.json
///   matrices/<expresser>/{gabor,geometry,semantic}.{json,csv}
///   correlations/<expresser>/{gabor,geometry}.json, summary.csv, summary.txt
///   nmds/<expresser>/{gabor,semantic}.json, nmds/<expresser>/{gabor,semantic}_scan.csv
///   align/<expresser>.json
///   plots/<expresser>/{gabor,semantic}.svg
///   reports/<stage>.json
StageReport run_encode(const StudyConfig& config);
StageReport run_matrices(const StudyConfig& config);
StageReport run_correlate(const StudyConfig& config);
StageReport run_embed(const StudyConfig& config);
StageReport run_align(const StudyConfig& config);
StageReport run_plot(const StudyConfig& config);

/// All stages in order; also writes report.json.
std::vector<StageReport> run_study(const StudyConfig& config);

StageReport run_stage(const StudyConfig& config, std::string_view stage);
const std::vector<std::string_view>& stage_names();

struct SummaryRow {
  std::string expresser_id;
  std::optional<double> gabor_rho;
  std::optional<double> gabor_p;
  std::optional<double> geometry_rho;
  std::optional<double> geometry_p;
  bool excluded = false;
};

struct StudySummary {
  std::vector<SummaryRow> rows;
  std::optional<double> gabor_average;
  std::optional<double> geometry_average;
};

StudySummary summarize(const std::vector<SummaryRow>& rows, const std::vector<std::string>& exclude);
std::string summary_to_csv(const StudySummary& s);
std::string summary_to_text(const StudySummary& s);

}  // namespace gaborface
