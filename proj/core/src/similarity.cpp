#include "gaborface/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "json_util.hpp"

namespace gaborface {

using detail::Json;

CodedImage::CodedImage(std::string image_id, FilterBank bank, std::vector<CodedPoint> points)
    : image_id_(std::move(image_id)),
      bank_(std::move(bank)),
      fingerprint_(bank_.fingerprint()),
      points_(std::move(points)) {
  if (points_.size() != kGridNodeCount) {
    throw FormatError("coded image " + image_id_ + ": expected " + std::to_string(kGridNodeCount) +
                      " jets, found " + std::to_string(points_.size()));
  }
  for (const auto& p : points_) {
    if (p.jet.size() != bank_.size()) {
      throw FormatError("coded image " + image_id_ + ": jet at '" + p.name + "' has " +
                        std::to_string(p.jet.size()) + " amplitudes, bank has " +
                        std::to_string(bank_.size()) + " filters");
    }
    for (double a : p.jet.amplitudes) {
      if (!std::isfinite(a) || a < 0.0) {
        throw FormatError("coded image " + image_id_ + ": jet at '" + p.name +
                          "' has a negative or non-finite amplitude");
      }
    }
  }
}

CodedImage code_image(const ImageRaster& image, const FilterBank& bank,
                      const GridPlacement& placement, unsigned threads) {
  const ImageSize size{image.width(), image.height()};
  if (placement.source_size() != size) {
    throw IncompatibleError("grid " + placement.image_id() + " is placed on a " +
                            std::to_string(placement.source_size().width) + "x" +
                            std::to_string(placement.source_size().height) + " frame but the image is " +
                            std::to_string(size.width) + "x" + std::to_string(size.height));
  }
  const auto& nodes = placement.nodes();
  std::vector<CodedPoint> points(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    points[i] = {nodes[i].name, nodes[i].x, nodes[i].y,
                 compute_jet(image, bank, placement.position(i))};
  });
  return CodedImage(placement.image_id(), bank, std::move(points));
}

std::string coded_image_to_json(const CodedImage& coded) {
  Json points = Json::array();
  for (const auto& p : coded.points()) {
    points.push_back({{"name", p.name}, {"x", p.x}, {"y", p.y}, {"amplitudes", p.jet.amplitudes}});
  }
  Json doc;
  doc["image_id"] = coded.image_id();
  doc["bank"] = {{"wavenumbers", coded.bank().wavenumbers()},
                 {"orientations", coded.bank().orientations()},
                 {"sigma", coded.bank().sigma()}};
  doc["points"] = std::move(points);
  return detail::dump(doc);
}

namespace {

std::vector<double> number_array(const Json& j, std::string_view what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

CodedImage coded_image_from_json(std::string_view text) {
  const char* what = "jet set";
  const Json doc = detail::parse_json(text, what);
  std::string image_id = detail::require_string(doc, "image_id", what);
  const Json& bank_json = detail::require(doc, "bank", what);
  const auto wavenumbers = number_array(detail::require(bank_json, "wavenumbers", what), "bank.wavenumbers");
  const auto orientations = number_array(detail::require(bank_json, "orientations", what), "bank.orientations");
  FilterBank bank = FilterBank::build(wavenumbers, orientations,
                                      detail::require_number(bank_json, "sigma", what));
  const Json& points_json = detail::require(doc, "points", what);
  if (!points_json.is_array()) throw FormatError("jet set: points must be an array");
  std::vector<CodedPoint> points;
  for (const auto& p : points_json) {
    points.push_back({detail::require_string(p, "name", what), detail::require_number(p, "x", what),
                      detail::require_number(p, "y", what),
                      JetVector{number_array(detail::require(p, "amplitudes", what), "amplitudes")}});
  }
  return CodedImage(std::move(image_id), std::move(bank), std::move(points));
}

double jet_similarity(const JetVector& a, const JetVector& b) {
  if (a.size() != b.size()) {
    throw IncompatibleError("jets have different dimensions (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a.amplitudes[i] * b.amplitudes[i];
    aa += a.amplitudes[i] * a.amplitudes[i];
    bb += b.amplitudes[i] * b.amplitudes[i];
  }
  if (aa == 0.0 || bb == 0.0) throw DegenerateError("normalized dot product of an all-zero jet");
  return std::clamp(dot / std::sqrt(aa * bb), 0.0, 1.0);
}

double gabor_image_similarity(const CodedImage& a, const CodedImage& b,
                              SimilarityDiagnostics* diagnostics) {
  if (a.fingerprint() != b.fingerprint()) {
    throw IncompatibleError("images " + a.image_id() + " and " + b.image_id() +
                            " were coded with different filter banks");
  }
  const auto& pa = a.points();
  const auto& pb = b.points();
  double total = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].name != pb[i].name) {
      throw IncompatibleError("images " + a.image_id() + " and " + b.image_id() +
                              " differ in node order at position " + std::to_string(i));
    }
    try {
      total += jet_similarity(pa[i].jet, pb[i].jet);
    } catch (const DegenerateError&) {
      if (diagnostics) ++diagnostics->degenerate_points;
    }
  }
  return total / static_cast<double>(pa.size());
}

double geometry_dissimilarity(const ShapeVector& a, const ShapeVector& b) {
  if (a.size() != b.size()) {
    throw IncompatibleError("shape vectors have different lengths (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.distances[i] - b.distances[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

PairMatrix gabor_matrix(std::span<const CodedImage> images, unsigned threads,
                        SimilarityDiagnostics* diagnostics) {
  std::vector<std::string> ids;
  for (const auto& im : images) ids.push_back(im.image_id());
  std::atomic<int> degenerate{0};
  PairMatrix m = pairwise_matrix(
      std::move(ids), MatrixKind::kSimilarity,
      [&](std::size_t i, std::size_t j) {
        SimilarityDiagnostics local;
        const double s = gabor_image_similarity(images[i], images[j], &local);
        degenerate += local.degenerate_points;
        return s;
      },
      threads);
  if (diagnostics) diagnostics->degenerate_points += degenerate.load();
  return m;
}

PairMatrix geometry_matrix(std::vector<std::string> item_ids, std::span<const ShapeVector> shapes,
                           unsigned threads) {
  if (item_ids.size() != shapes.size()) throw ValidationError("one shape vector per item is required");
  return pairwise_matrix(
      std::move(item_ids), MatrixKind::kDissimilarity,
      [&](std::size_t i, std::size_t j) { return geometry_dissimilarity(shapes[i], shapes[j]); },
      threads);
}

}  // namespace gaborface
