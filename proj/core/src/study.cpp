#include "gaborface/study.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "gaborface/image.hpp"
#include "gaborface/nmds.hpp"
#include "gaborface/parallel.hpp"
#include "gaborface/ratings.hpp"
#include "gaborface/similarity.hpp"
#include "gaborface/svg.hpp"
#include "json_util.hpp"

namespace gaborface {

using detail::Json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMinGroupSize = 3;

bool is_safe_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("study config: ") + what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string("study config: ") + what + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Output locations.
fs::path jet_path(const StudyConfig& c, const std::string& id) { return c.output_dir / "jets" / (id + ".json"); }
fs::path matrix_path(const StudyConfig& c, const std::string& e, const char* name, const char* ext) {
  return c.output_dir / "matrices" / e / (std::string(name) + ext);
}
fs::path correlation_path(const StudyConfig& c, const std::string& e, const char* measure) {
  return c.output_dir / "correlations" / e / (std::string(measure) + ".json");
}
fs::path nmds_path(const StudyConfig& c, const std::string& e, const std::string& name) {
  return c.output_dir / "nmds" / e / name;
}
fs::path align_path(const StudyConfig& c, const std::string& e) { return c.output_dir / "align" / (e + ".json"); }
fs::path plot_path(const StudyConfig& c, const std::string& e, const char* name) {
  return c.output_dir / "plots" / e / (std::string(name) + ".svg");
}

std::string read_output(const fs::path& p, std::string_view produced_by) {
  if (!fs::exists(p)) {
    throw ValidationError("missing " + p.filename().string() + " from the " + std::string(produced_by) +
                          " stage; run that stage first");
  }
  return read_text_file(p);
}

RatingTable study_ratings(const StudyConfig& c) {
  RatingTable t = load_ratings_file(c.ratings_path.string());
  return c.options.no_fear ? drop_adjective(t, kFearAdjective) : t;
}

GridPlacement standard_grid(const StudyConfig& c, const std::string& id) {
  const fs::path p = c.grid_dir / (id + ".json");
  if (!fs::exists(p)) throw ValidationError("image " + id + " has no grid file (" + p.string() + ")");
  GridPlacement g = load_grid_file(p);
  if (g.image_id() != id) {
    throw ValidationError("grid file " + p.string() + " is labelled '" + g.image_id() + "', expected '" + id + "'");
  }
  c.grid_template.check(g);
  return g;
}

void write_report(const StudyConfig& c, const StageReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"expresser_id", g.expresser_id},
                      {"images", g.images},
                      {"status", std::string(to_string(g.state))},
                      {"message", g.message}});
  }
  Json doc{{"stage", r.stage}, {"groups", std::move(groups)}, {"warnings", r.warnings}};
  write_file_atomic(c.output_dir / "reports" / (r.stage + ".json"), detail::dump(doc));
}

// Runs `work` for every expresser group in parallel. Groups under the minimum
// size are skipped; an exception marks only its own group failed.
template <typename Work>
StageReport for_each_group(const StudyConfig& c, std::string stage, Work&& work) {
  const auto groups = c.groups();
  std::vector<std::pair<std::string, std::vector<std::string>>> items(groups.begin(), groups.end());
  StageReport report;
  report.stage = std::move(stage);
  report.groups.resize(items.size());
  std::vector<std::vector<std::string>> warnings(items.size());

  parallel_for(items.size(), c.options.threads, [&](std::size_t g) {
    const auto& [expresser, ids] = items[g];
    GroupStatus& status = report.groups[g];
    status.expresser_id = expresser;
    status.images = ids.size();
    if (ids.size() < kMinGroupSize) {
      status.state = GroupState::kSkipped;
      status.message = "group has " + std::to_string(ids.size()) + " images; at least " +
                       std::to_string(kMinGroupSize) + " are needed";
      warnings[g].push_back("expresser " + expresser + " skipped: " + status.message);
      return;
    }
    try {
      work(expresser, ids, warnings[g]);
    } catch (const Error& e) {
      status.state = GroupState::kFailed;
      status.message = e.what();
      warnings[g].push_back("expresser " + expresser + " failed: " + e.what());
    }
  });
  for (auto& w : warnings) report.warnings.insert(report.warnings.end(), w.begin(), w.end());
  write_report(c, report);
  return report;
}

PairMatrix similarity_to_dissimilarity(const PairMatrix& s) {
  PairMatrix d(s.item_ids(), MatrixKind::kDissimilarity);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) d.set(i, j, 1.0 - s(i, j));
  return d;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string_view to_string(GroupState s) {
  switch (s) {
    case GroupState::kOk: return "ok";
    case GroupState::kSkipped: return "skipped";
    case GroupState::kFailed: return "failed";
  }
  return "unknown";
}

bool StageReport::any_failed() const {
  return std::any_of(groups.begin(), groups.end(), [](const GroupStatus& g) { return g.state == GroupState::kFailed; });
}

FilterBank StudyConfig::bank() const { return FilterBank::build(wavenumbers, orientations, sigma); }

std::vector<std::string> StudyConfig::image_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, expresser] : expressers) {
    if (options.no_fear) {
      const auto it = expressions.find(id);
      if (it != expressions.end() && it->second == kFearLabel) continue;
    }
    ids.push_back(id);
  }
  return ids;
}

std::map<std::string, std::vector<std::string>> StudyConfig::groups() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& id : image_ids()) out[expressers.at(id)].push_back(id);
  return out;
}

StudyConfig parse_study_config(std::string_view json_text, const fs::path& base_dir) {
  const char* what = "study config";
  const Json doc = detail::parse_json(json_text, what);
  StudyConfig c;
  c.image_dir = resolve(base_dir, detail::require_string(doc, "images", what));
  c.grid_dir = resolve(base_dir, detail::require_string(doc, "grids", what));
  c.ratings_path = resolve(base_dir, detail::require_string(doc, "ratings", what));
  c.output_dir = resolve(base_dir, doc.value("output", std::string("out")));

  const FilterBank standard = FilterBank::standard();
  c.wavenumbers = standard.wavenumbers();
  c.orientations = standard.orientations();
  c.sigma = standard.sigma();
  if (doc.contains("bank")) {
    const Json& b = doc.at("bank");
    if (b.contains("wavenumbers")) c.wavenumbers = numbers(b.at("wavenumbers"), "bank.wavenumbers");
    if (b.contains("orientations")) c.orientations = numbers(b.at("orientations"), "bank.orientations");
    if (b.contains("sigma")) c.sigma = detail::require_number(b, "sigma", what);
  }
  c.bank();  // validates

  if (doc.contains("grid_template")) {
    c.grid_template = parse_grid_template(
        read_text_file(resolve(base_dir, detail::require_string(doc, "grid_template", what))));
  }

  const Json& exp = detail::require(doc, "expressers", what);
  if (!exp.is_object() || exp.empty()) throw FormatError("study config: expressers must be a non-empty object");
  for (const auto& [image, expresser] : exp.items()) {
    if (!expresser.is_string()) throw FormatError("study config: expressers." + image + " must be a string");
    if (!is_safe_id(image)) throw FormatError("study config: invalid image id '" + image + "'");
    if (!is_safe_id(expresser.get<std::string>())) {
      throw FormatError("study config: invalid expresser id '" + expresser.get<std::string>() + "'");
    }
    c.expressers[image] = expresser.get<std::string>();
  }
  if (doc.contains("expressions")) {
    for (const auto& [image, label] : doc.at("expressions").items()) {
      if (!label.is_string()) throw FormatError("study config: expressions." + image + " must be a string");
      c.expressions[image] = label.get<std::string>();
    }
  }

  if (doc.contains("options")) {
    const Json& o = doc.at("options");
    StudyOptions& opt = c.options;
    opt.nmds_dims = o.value("nmds_dims", opt.nmds_dims);
    opt.scan_max_dims = o.value("scan_max_dims", opt.scan_max_dims);
    opt.tolerance = o.value("tolerance", opt.tolerance);
    opt.max_iterations = o.value("max_iterations", opt.max_iterations);
    opt.seed = o.value("seed", opt.seed);
    if (o.contains("permutations") && !o.at("permutations").is_null()) {
      opt.permutations = o.at("permutations").get<std::uint64_t>();
    }
    opt.threads = o.value("threads", opt.threads);
    opt.no_fear = o.value("no_fear", opt.no_fear);
    if (o.contains("exclude")) opt.exclude = o.at("exclude").get<std::vector<std::string>>();
    if (o.contains("standard_size")) {
      const auto size = o.at("standard_size").get<std::vector<int>>();
      if (size.size() != 2 || size[0] < 1 || size[1] < 1) {
        throw FormatError("study config: options.standard_size must be [width, height]");
      }
      opt.standard_size = {size[0], size[1]};
    }
  }
  if (c.options.nmds_dims < 1) throw ValidationError("study config: nmds_dims must be at least 1");
  if (c.options.scan_max_dims < 1) throw ValidationError("study config: scan_max_dims must be at least 1");
  return c;
}

StudyConfig load_study_config(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("study config " + path.string() + " does not exist");
  return parse_study_config(read_text_file(path), path.parent_path());
}

StageReport run_encode(const StudyConfig& config) {
  const FilterBank bank = config.bank();
  const auto ids = config.image_ids();
  if (ids.empty()) throw ValidationError("study has no images to encode");

  // Validate every input before the first output is written.
  std::vector<GridPlacement> grids;
  grids.reserve(ids.size());
  for (const auto& id : ids) {
    const fs::path image = config.image_dir / (id + ".pgm");
    if (!fs::exists(image)) throw ValidationError("image file " + image.string() + " not found");
    grids.push_back(standard_grid(config, id));
  }
  for (const auto& id : ids) read_pgm(config.image_dir / (id + ".pgm"));

  const ImageSize standard = config.options.standard_size;
  parallel_for(ids.size(), config.options.threads, [&](std::size_t i) {
    const ImageRaster image =
        resample_bilinear(read_pgm(config.image_dir / (ids[i] + ".pgm")), standard.width, standard.height);
    const GridPlacement grid = rescale_placement(grids[i], standard);
    write_file_atomic(jet_path(config, ids[i]), coded_image_to_json(code_image(image, bank, grid)));
  });

  StageReport report;
  report.stage = "encode";
  for (const auto& [expresser, members] : config.groups()) {
    report.groups.push_back({expresser, members.size(), GroupState::kOk, ""});
  }
  write_report(config, report);
  return report;
}

StageReport run_matrices(const StudyConfig& config) {
  const RatingTable ratings = study_ratings(config);
  const std::string fingerprint = config.bank().fingerprint();
  return for_each_group(config, "matrices", [&](const std::string& expresser, const std::vector<std::string>& ids,
                                                std::vector<std::string>& warnings) {
    std::vector<CodedImage> coded;
    std::vector<ShapeVector> shapes;
    std::vector<RatingVector> rows;
    for (const auto& id : ids) {
      coded.push_back(coded_image_from_json(read_output(jet_path(config, id), "encode")));
      if (coded.back().fingerprint() != fingerprint) {
        throw IncompatibleError("jets for " + id + " were computed with a different filter bank; re-run encode");
      }
      shapes.push_back(geometry_vector(rescale_placement(standard_grid(config, id), config.options.standard_size)));
      const RatingVector* r = ratings.find(id);
      if (!r) throw ValidationError("no rating row for image " + id);
      rows.push_back(*r);
    }

    SimilarityDiagnostics diag;
    const PairMatrix gabor = gabor_matrix(coded, 1, &diag);
    if (diag.degenerate_points > 0) {
      warnings.push_back("expresser " + expresser + ": " + std::to_string(diag.degenerate_points) +
                         " node comparisons involved an all-zero jet and were scored 0");
    }
    const PairMatrix geometry = geometry_matrix(ids, shapes);
    const PairMatrix semantic = pairwise_matrix(ids, MatrixKind::kDissimilarity, [&](std::size_t i, std::size_t j) {
      return semantic_dissimilarity(rows[i], rows[j]);
    });

    const std::pair<const char*, const PairMatrix*> outputs[] = {
        {"gabor", &gabor}, {"geometry", &geometry}, {"semantic", &semantic}};
    for (const auto& [name, m] : outputs) {
      write_file_atomic(matrix_path(config, expresser, name, ".json"), matrix_to_json(*m));
      write_file_atomic(matrix_path(config, expresser, name, ".csv"), matrix_to_csv(*m));
    }
  });
}

StageReport run_correlate(const StudyConfig& config) {
  CorrelationOptions opts;
  opts.permutations = config.options.permutations;
  opts.seed = config.options.seed;
  const auto groups = config.groups();
  std::map<std::string, SummaryRow> rows;
  for (const auto& [e, ids] : groups) rows[e].expresser_id = e;

  StageReport report = for_each_group(
      config, "correlate",
      [&](const std::string& expresser, const std::vector<std::string>&, std::vector<std::string>&) {
        const PairMatrix semantic = matrix_from_json(read_output(matrix_path(config, expresser, "semantic", ".json"), "matrices"));
        SummaryRow& row = rows.at(expresser);
        for (const char* measure : {"gabor", "geometry"}) {
          const PairMatrix model = matrix_from_json(read_output(matrix_path(config, expresser, measure, ".json"), "matrices"));
          const CorrelationResult r = correlate_model_with_ratings(model, semantic, opts);
          write_file_atomic(correlation_path(config, expresser, measure), correlation_to_json(r, expresser, measure));
          if (std::string_view(measure) == "gabor") {
            row.gabor_rho = r.rho;
            row.gabor_p = r.p_two_sided;
          } else {
            row.geometry_rho = r.rho;
            row.geometry_p = r.p_two_sided;
          }
        }
      });

  std::vector<SummaryRow> ordered;
  for (const auto& g : report.groups) {
    SummaryRow row = rows.at(g.expresser_id);
    if (g.state != GroupState::kOk) row = SummaryRow{g.expresser_id, {}, {}, {}, {}, false};
    ordered.push_back(std::move(row));
  }
  const StudySummary summary = summarize(ordered, config.options.exclude);
  write_file_atomic(config.output_dir / "summary.csv", summary_to_csv(summary));
  write_file_atomic(config.output_dir / "summary.txt", summary_to_text(summary));
  return report;
}

StageReport run_embed(const StudyConfig& config) {
  EmbedOptions opts;
  opts.max_iterations = config.options.max_iterations;
  opts.tolerance = config.options.tolerance;
  opts.seed = config.options.seed;
  return for_each_group(config, "embed", [&](const std::string& expresser, const std::vector<std::string>& ids,
                                             std::vector<std::string>& warnings) {
    const int d = std::min<int>(config.options.nmds_dims, static_cast<int>(ids.size()) - 1);
    if (d != config.options.nmds_dims) {
      warnings.push_back("expresser " + expresser + ": embedding in " + std::to_string(d) +
                         " dimensions (group too small for " + std::to_string(config.options.nmds_dims) + ")");
    }
    const PairMatrix gabor = similarity_to_dissimilarity(
        matrix_from_json(read_output(matrix_path(config, expresser, "gabor", ".json"), "matrices")));
    const PairMatrix semantic =
        matrix_from_json(read_output(matrix_path(config, expresser, "semantic", ".json"), "matrices"));
    const std::pair<std::string, const PairMatrix*> inputs[] = {{"gabor", &gabor}, {"semantic", &semantic}};
    for (const auto& [name, m] : inputs) {
      const Configuration c = embed(*m, d, opts);
      if (c.degenerate) warnings.push_back("expresser " + expresser + ": " + name + " dissimilarities are all equal");
      write_file_atomic(nmds_path(config, expresser, name + ".json"), configuration_to_json(c));
      const auto fits = scan_dimensions(*m, config.options.scan_max_dims, opts);
      write_file_atomic(nmds_path(config, expresser, name + "_scan.csv"), scan_to_csv(fits));
    }
  });
}

StageReport run_align(const StudyConfig& config) {
  return for_each_group(config, "align", [&](const std::string& expresser, const std::vector<std::string>&,
                                             std::vector<std::string>&) {
    const Configuration gabor = configuration_from_json(read_output(nmds_path(config, expresser, "gabor.json"), "embed"));
    const Configuration semantic =
        configuration_from_json(read_output(nmds_path(config, expresser, "semantic.json"), "embed"));
    const ProcrustesResult r = procrustes_align(gabor, semantic, /*allow_scaling=*/true);
    Json rotation = Json::array();
    for (Eigen::Index i = 0; i < r.rotation.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < r.rotation.cols(); ++j) row.push_back(r.rotation(i, j));
      rotation.push_back(std::move(row));
    }
    std::vector<double> translation(r.translation.data(), r.translation.data() + r.translation.size());
    Json doc{{"expresser_id", expresser},
             {"source", "gabor"},
             {"target", "semantic"},
             {"residual", r.residual},
             {"scale", r.scale},
             {"rotation", std::move(rotation)},
             {"translation", translation},
             {"aligned", Json::parse(configuration_to_json(r.aligned))}};
    write_file_atomic(align_path(config, expresser), detail::dump(doc));
  });
}

StageReport run_plot(const StudyConfig& config) {
  return for_each_group(config, "plot", [&](const std::string& expresser, const std::vector<std::string>&,
                                            std::vector<std::string>& warnings) {
    const Json aligned = detail::parse_json(read_output(align_path(config, expresser), "align"), "alignment");
    const Configuration gabor = configuration_from_json(aligned.at("aligned").dump());
    const Configuration semantic =
        configuration_from_json(read_output(nmds_path(config, expresser, "semantic.json"), "embed"));
    if (semantic.dimension() != 2) {
      warnings.push_back("expresser " + expresser + ": plots need a 2-dimensional embedding; skipped");
      return;
    }
    write_file_atomic(plot_path(config, expresser, "gabor"),
                      render_scatter(gabor, config.expressions, {480, 40, expresser + " Gabor (aligned)"}));
    write_file_atomic(plot_path(config, expresser, "semantic"),
                      render_scatter(semantic, config.expressions, {480, 40, expresser + " semantic ratings"}));
  });
}

const std::vector<std::string_view>& stage_names() {
  static const std::vector<std::string_view> names{"encode", "matrices", "correlate", "embed", "align", "plot", "study"};
  return names;
}

StageReport run_stage(const StudyConfig& config, std::string_view stage) {
  if (stage == "encode") return run_encode(config);
  if (stage == "matrices") return run_matrices(config);
  if (stage == "correlate") return run_correlate(config);
  if (stage == "embed") return run_embed(config);
  if (stage == "align") return run_align(config);
  if (stage == "plot") return run_plot(config);
  throw ValidationError("unknown stage '" + std::string(stage) + "'");
}

std::vector<StageReport> run_study(const StudyConfig& config) {
  std::vector<StageReport> reports;
  for (std::string_view stage : stage_names()) {
    if (stage == "study") continue;
    reports.push_back(run_stage(config, stage));
  }
  // A group is failed if any stage failed it.
  Json groups = Json::array();
  for (std::size_t g = 0; g < reports.front().groups.size(); ++g) {
    GroupStatus status = reports.front().groups[g];
    for (const auto& r : reports) {
      if (g < r.groups.size() && r.groups[g].state != GroupState::kOk && status.state == GroupState::kOk) {
        status = r.groups[g];
        if (status.state == GroupState::kFailed) status.message = r.stage + ": " + status.message;
      }
    }
    groups.push_back({{"expresser_id", status.expresser_id},
                      {"images", status.images},
                      {"status", std::string(to_string(status.state))},
                      {"message", status.message}});
  }
  Json warnings = Json::array();
  for (const auto& r : reports)
    for (const auto& w : r.warnings) warnings.push_back(r.stage + ": " + w);
  write_file_atomic(config.output_dir / "report.json",
                    detail::dump(Json{{"groups", std::move(groups)}, {"warnings", std::move(warnings)}}));
  return reports;
}

StudySummary summarize(const std::vector<SummaryRow>& rows, const std::vector<std::string>& exclude) {
  StudySummary s;
  const std::set<std::string> excluded(exclude.begin(), exclude.end());
  double gabor_sum = 0.0, geometry_sum = 0.0;
  std::size_t gabor_count = 0, geometry_count = 0;
  for (SummaryRow row : rows) {
    row.excluded = excluded.count(row.expresser_id) > 0;
    if (!row.excluded) {
      if (row.gabor_rho) {
        gabor_sum += *row.gabor_rho;
        ++gabor_count;
      }
      if (row.geometry_rho) {
        geometry_sum += *row.geometry_rho;
        ++geometry_count;
      }
    }
    s.rows.push_back(std::move(row));
  }
  if (gabor_count) s.gabor_average = gabor_sum / static_cast<double>(gabor_count);
  if (geometry_count) s.geometry_average = geometry_sum / static_cast<double>(geometry_count);
  return s;
}

std::string summary_to_csv(const StudySummary& s) {
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::string out = "expresser,gabor_rho,gabor_p,geometry_rho,geometry_p,excluded\n";
  for (const auto& r : s.rows) {
    out += r.expresser_id + "," + cell(r.gabor_rho) + "," + cell(r.gabor_p) + "," + cell(r.geometry_rho) + "," +
           cell(r.geometry_p) + "," + (r.excluded ? "1" : "0") + "\n";
  }
  out += "average," + cell(s.gabor_average) + ",," + cell(s.geometry_average) + ",,\n";
  return out;
}

std::string summary_to_text(const StudySummary& s) {
  auto cell = [](const std::optional<double>& v) { return v ? fixed3(*v) : std::string("  -  "); };
  std::size_t width = std::string_view("Expresser").size();
  for (const auto& r : s.rows) width = std::max(width, r.expresser_id.size() + 1);
  auto pad = [&](std::string text) {
    text.resize(std::max(text.size(), width + 2), ' ');
    return text;
  };
  std::string out = pad("Expresser") + "Gabor    Geometry\n";
  out += std::string(width + 2 + 17, '-') + "\n";
  for (const auto& r : s.rows) {
    out += pad(r.expresser_id + (r.excluded ? "*" : "")) + cell(r.gabor_rho) + "    " + cell(r.geometry_rho) + "\n";
  }
  out += std::string(width + 2 + 17, '-') + "\n";
  out += pad("Average") + cell(s.gabor_average) + "    " + cell(s.geometry_average) + "\n";
  bool any_excluded = std::any_of(s.rows.begin(), s.rows.end(), [](const SummaryRow& r) { return r.excluded; });
  if (any_excluded) out += "* excluded from the averages\n";
  return out;
}

}  // namespace gaborface
