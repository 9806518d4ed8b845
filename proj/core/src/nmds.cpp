#include "gaborface/nmds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gaborface/errors.hpp"
#include "gaborface/file_io.hpp"
#include "json_util.hpp"

namespace gaborface {

using detail::Json;

namespace {

std::vector<double> upper_triangle(const PairMatrix& m) {
  std::vector<double> out;
  out.reserve(m.size() * (m.size() - 1) / 2);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back(m(i, j));
  return out;
}

void require_dissimilarity(const PairMatrix& m, int d) {
  if (m.kind() != MatrixKind::kDissimilarity) {
    throw ValidationError("scaling needs a dissimilarity matrix, got a similarity matrix");
  }
  if (d < 1) throw ValidationError("embedding dimension must be at least 1");
  for (double v : m.values()) {
    if (v < 0.0) throw ValidationError("dissimilarities must be non-negative");
  }
}

void center_columns(Eigen::MatrixXd& x) {
  if (x.rows() == 0) return;
  x.rowwise() -= x.colwise().mean();
}

// Rescales centred coordinates so the squared pair distances sum to the pair count.
void normalize_scale(Eigen::MatrixXd& x) {
  const double n = static_cast<double>(x.rows());
  // sum_{i<j} |x_i - x_j|^2 = n * sum_i |x_i|^2 for centred x.
  const double total = n * x.squaredNorm();
  const double pairs = n * (n - 1) / 2;
  if (total > 0.0) x *= std::sqrt(pairs / total);
}

}  // namespace

std::vector<double> pair_distances(const Eigen::MatrixXd& x) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.push_back((x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm());
  return out;
}

Configuration classical_init(const PairMatrix& dissimilarity, int d, std::uint64_t seed) {
  require_dissimilarity(dissimilarity, d);
  const auto n = static_cast<Eigen::Index>(dissimilarity.size());
  Configuration c;
  c.item_ids = dissimilarity.item_ids();
  c.coordinates = Eigen::MatrixXd::Zero(n, d);
  if (std::all_of(dissimilarity.values().begin(), dissimilarity.values().end(),
                  [](double v) { return v == 0.0; })) {
    c.degenerate = true;
    return c;
  }

  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = dissimilarity(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      b(i, j) = -0.5 * v * v;
    }
  const Eigen::VectorXd row_means = b.rowwise().mean();
  const double grand = row_means.mean();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) += grand - row_means(i) - row_means(j);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw DegenerateError("eigendecomposition failed");
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double floor = 1e-10 * values.cwiseAbs().maxCoeff();

  int filled = 0;
  for (int k = 0; k < d && k < n; ++k) {
    const Eigen::Index idx = n - 1 - k;
    if (!(values(idx) > floor)) break;
    Eigen::VectorXd v = eig.eigenvectors().col(idx) * std::sqrt(values(idx));
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0) v = -v;
    c.coordinates.col(k) = v;
    ++filled;
  }

  if (filled < d) {
    c.random_fill = true;
    double spread = filled > 0 ? std::sqrt(c.coordinates.leftCols(filled).squaredNorm() /
                                           static_cast<double>(n * filled))
                               : 0.0;
    if (spread == 0.0) {
      const auto tri = upper_triangle(dissimilarity);
      spread = std::sqrt(std::inner_product(tri.begin(), tri.end(), tri.begin(), 0.0) /
                         static_cast<double>(tri.size()) / 2.0);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, spread);
    for (int k = filled; k < d; ++k)
      for (Eigen::Index i = 0; i < n; ++i) c.coordinates(i, k) = normal(rng);
  }
  center_columns(c.coordinates);
  return c;
}

Disparities isotonic_fit(std::span<const double> distances, std::span<const std::size_t> order) {
  if (distances.size() != order.size()) throw ValidationError("isotonic fit: order length mismatch");
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(order.size());
  std::vector<bool> seen(order.size(), false);
  for (std::size_t idx : order) {
    if (idx >= distances.size() || seen[idx]) throw ValidationError("isotonic fit: order is not a permutation");
    seen[idx] = true;
    blocks.push_back({distances[idx], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  Disparities out;
  out.values.resize(distances.size());
  std::size_t pos = 0;
  for (const Block& b : blocks) {
    const double m = b.mean();
    for (std::size_t k = 0; k < b.count; ++k) out.values[order[pos++]] = m;
  }
  return out;
}

double stress1(std::span<const double> distances, const Disparities& disparities) {
  if (distances.size() != disparities.values.size()) throw ValidationError("stress: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double r = distances[i] - disparities.values[i];
    num += r * r;
    den += distances[i] * distances[i];
  }
  if (den == 0.0) throw DegenerateError("stress is undefined when every distance is zero");
  return std::sqrt(num / den);
}

double rsq(std::span<const double> distances, const Disparities& disparities) {
  if (distances.size() != disparities.values.size()) throw ValidationError("rsq: length mismatch");
  const auto& h = disparities.values;
  if (std::equal(distances.begin(), distances.end(), h.begin())) return 1.0;
  const double n = static_cast<double>(distances.size());
  const double md = std::accumulate(distances.begin(), distances.end(), 0.0) / n;
  const double mh = std::accumulate(h.begin(), h.end(), 0.0) / n;
  double sdh = 0.0, sdd = 0.0, shh = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    sdh += (distances[i] - md) * (h[i] - mh);
    sdd += (distances[i] - md) * (distances[i] - md);
    shh += (h[i] - mh) * (h[i] - mh);
  }
  if (sdd == 0.0 || shh == 0.0) return 0.0;
  return std::clamp(sdh * sdh / (sdd * shh), 0.0, 1.0);
}

namespace {

// Pair indices sorted by dissimilarity; tied runs are re-sorted by the current
// distance before each fit so ties carry no order constraint.
class PrimaryOrder {
 public:
  explicit PrimaryOrder(const std::vector<double>& dissimilarities) : order_(dissimilarities.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return dissimilarities[a] < dissimilarities[b];
    });
    for (std::size_t start = 0; start < order_.size();) {
      std::size_t end = start + 1;
      while (end < order_.size() && dissimilarities[order_[end]] == dissimilarities[order_[start]]) ++end;
      if (end - start > 1) ties_.emplace_back(start, end);
      start = end;
    }
  }

  std::span<const std::size_t> for_distances(const std::vector<double>& distances) {
    for (const auto& [start, end] : ties_) {
      std::stable_sort(order_.begin() + static_cast<std::ptrdiff_t>(start),
                       order_.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
    }
    return order_;
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::pair<std::size_t, std::size_t>> ties_;
};

Eigen::MatrixXd guttman_transform(const Eigen::MatrixXd& x, const std::vector<double>& distances,
                                  const std::vector<double>& targets) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++p) {
      if (distances[p] > 0.0) {
        const double w = -targets[p] / distances[p];
        b(i, j) = w;
        b(j, i) = w;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return b * x / static_cast<double>(n);
}

}  // namespace

Configuration embed(const PairMatrix& dissimilarity, int d, const EmbedOptions& options) {
  require_dissimilarity(dissimilarity, d);
  const std::size_t n = dissimilarity.size();
  if (n < 2 || static_cast<std::size_t>(d) > n - 1) {
    throw ValidationError("embedding dimension must lie in [1, n - 1] (n = " + std::to_string(n) + ")");
  }
  if (options.max_iterations < 0 || !(options.tolerance >= 0.0)) {
    throw ValidationError("embed options: max_iterations and tolerance must be non-negative");
  }
  const std::vector<double> delta = upper_triangle(dissimilarity);

  if (std::adjacent_find(delta.begin(), delta.end(), std::not_equal_to<>()) == delta.end()) {
    Configuration c = classical_init(dissimilarity, d, options.seed);
    c.degenerate = true;
    c.options = options;
    c.stress = 0.0;
    c.rsq = 1.0;
    c.stress_history = {0.0};
    return c;
  }

  // Initialize from the ranks so the whole fit is invariant to monotone transforms.
  const std::vector<double> ranks = average_ranks(delta);
  PairMatrix rank_matrix(dissimilarity.item_ids(), MatrixKind::kDissimilarity);
  {
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) rank_matrix.set(i, j, ranks[p++]);
  }
  Configuration c = classical_init(rank_matrix, d, options.seed);
  c.options = options;
  Eigen::MatrixXd& x = c.coordinates;
  normalize_scale(x);

  PrimaryOrder order(delta);
  std::vector<double> dist = pair_distances(x);
  Disparities fit = isotonic_fit(dist, order.for_distances(dist));
  double stress = stress1(dist, fit);
  c.stress_history.push_back(stress);

  for (int it = 0; it < options.max_iterations && stress > 0.0; ++it) {
    // Scale the disparities so sum(d * dhat) = sum(d^2); with that scaling a
    // majorization step cannot raise stress-1.
    double sdd = 0.0, sdh = 0.0;
    for (std::size_t p = 0; p < dist.size(); ++p) {
      sdd += dist[p] * dist[p];
      sdh += dist[p] * fit.values[p];
    }
    if (sdh <= 0.0) break;
    std::vector<double> targets(fit.values);
    for (double& t : targets) t *= sdd / sdh;

    x = guttman_transform(x, dist, targets);
    center_columns(x);
    normalize_scale(x);
    dist = pair_distances(x);
    fit = isotonic_fit(dist, order.for_distances(dist));
    const double next = stress1(dist, fit);
    c.stress_history.push_back(next);
    c.iterations = it + 1;
    const double gain = stress - next;
    stress = next;
    if (gain < options.tolerance) break;
  }
  c.stress = stress;
  c.rsq = stress == 0.0 ? 1.0 : rsq(dist, fit);
  return c;
}

std::vector<DimensionFit> scan_dimensions(const PairMatrix& dissimilarity, int d_max,
                                          const EmbedOptions& options) {
  if (d_max < 1) throw ValidationError("dimension scan needs d_max >= 1");
  std::vector<DimensionFit> out;
  const int limit = std::min<int>(d_max, static_cast<int>(dissimilarity.size()) - 1);
  for (int d = 1; d <= limit; ++d) {
    const Configuration c = embed(dissimilarity, d, options);
    out.push_back({d, c.stress, c.rsq});
  }
  return out;
}

std::string scan_to_csv(std::span<const DimensionFit> fits) {
  std::string out = "d,stress,rsq\n";
  for (const auto& f : fits) {
    out += std::to_string(f.d) + "," + format_double(f.stress) + "," + format_double(f.rsq) + "\n";
  }
  return out;
}

ProcrustesResult procrustes_align(const Configuration& source, const Configuration& target,
                                  bool allow_scaling, bool allow_reflection) {
  if (source.item_ids != target.item_ids) {
    throw IncompatibleError("procrustes: configurations must list the same items in the same order");
  }
  if (source.coordinates.cols() != target.coordinates.cols() ||
      source.coordinates.rows() != target.coordinates.rows()) {
    throw IncompatibleError("procrustes: configurations differ in shape");
  }
  const Eigen::RowVectorXd src_mean = source.coordinates.colwise().mean();
  const Eigen::RowVectorXd tgt_mean = target.coordinates.colwise().mean();
  const Eigen::MatrixXd a = source.coordinates.rowwise() - src_mean;
  const Eigen::MatrixXd b = target.coordinates.rowwise() - tgt_mean;
  if (a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0) {
    throw DegenerateError("procrustes: fewer than 2 distinct points; the alignment is underdetermined");
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(a.cols());
  if (!allow_reflection && (u * v.transpose()).determinant() < 0.0) signs(a.cols() - 1) = -1.0;

  ProcrustesResult r;
  r.rotation = u * signs.asDiagonal() * v.transpose();
  r.scale = allow_scaling ? svd.singularValues().dot(signs) / a.squaredNorm() : 1.0;
  r.aligned = source;
  r.aligned.coordinates = (r.scale * a * r.rotation).rowwise() + tgt_mean;
  r.translation = tgt_mean - r.scale * src_mean * r.rotation;
  r.residual = std::sqrt((r.aligned.coordinates - target.coordinates).squaredNorm() /
                         static_cast<double>(a.rows()));
  return r;
}

std::string configuration_to_json(const Configuration& c) {
  Json coords = Json::array();
  for (Eigen::Index i = 0; i < c.coordinates.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < c.coordinates.cols(); ++k) row.push_back(c.coordinates(i, k));
    coords.push_back(std::move(row));
  }
  Json doc;
  doc["item_ids"] = c.item_ids;
  doc["d"] = c.dimension();
  doc["coordinates"] = std::move(coords);
  doc["stress"] = c.stress;
  doc["rsq"] = c.rsq;
  doc["iterations"] = c.iterations;
  doc["degenerate"] = c.degenerate;
  doc["random_fill"] = c.random_fill;
  doc["options"] = {{"max_iterations", c.options.max_iterations},
                    {"tolerance", c.options.tolerance},
                    {"seed", c.options.seed}};
  return detail::dump(doc);
}

Configuration configuration_from_json(std::string_view text) {
  const char* what = "configuration";
  const Json doc = detail::parse_json(text, what);
  Configuration c;
  for (const auto& id : detail::require(doc, "item_ids", what)) c.item_ids.push_back(id.get<std::string>());
  const int d = detail::require(doc, "d", what).get<int>();
  const Json& coords = detail::require(doc, "coordinates", what);
  if (!coords.is_array() || coords.size() != c.item_ids.size()) {
    throw FormatError("configuration: one coordinate row per item is required");
  }
  c.coordinates.resize(static_cast<Eigen::Index>(c.item_ids.size()), d);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].is_array() || coords[i].size() != static_cast<std::size_t>(d)) {
      throw FormatError("configuration: coordinate row " + std::to_string(i) + " must have d entries");
    }
    for (int k = 0; k < d; ++k) c.coordinates(static_cast<Eigen::Index>(i), k) = coords[i][k].get<double>();
  }
  c.stress = detail::require_number(doc, "stress", what);
  c.rsq = detail::require_number(doc, "rsq", what);
  c.iterations = detail::require(doc, "iterations", what).get<int>();
  c.degenerate = doc.value("degenerate", false);
  c.random_fill = doc.value("random_fill", false);
  if (doc.contains("options")) {
    const Json& o = doc.at("options");
    c.options.max_iterations = o.value("max_iterations", c.options.max_iterations);
    c.options.tolerance = o.value("tolerance", c.options.tolerance);
    c.options.seed = o.value("seed", c.options.seed);
  }
  return c;
}

}  // namespace gaborface
