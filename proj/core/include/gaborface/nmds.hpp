#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaborface/pair_matrix.hpp"
#include "gaborface/rank_stats.hpp"

namespace gaborface {

struct EmbedOptions {
  int max_iterations = 500;
  /// Stop once one iteration lowers stress-1 by less than this.
  double tolerance = 1e-6;
  std::uint64_t seed = kDefaultSeed;
};

/// n points in d dimensions with fit diagnostics. Pairs are indexed in
/// row-major upper-triangle order of the item list.
struct Configuration {
  std::vector<std::string> item_ids;
  Eigen::MatrixXd coordinates;  // n x d
  double stress = 0.0;
  double rsq = 1.0;
  int iterations = 0;
  /// All input dissimilarities were equal; the initialization is returned.
  bool degenerate = false;
  /// Some columns came from the seeded random fallback of classical_init.
  bool random_fill = false;
  std::vector<double> stress_history;
  EmbedOptions options;

  int dimension() const { return static_cast<int>(coordinates.cols()); }
};

struct Disparities {
  std::vector<double> values;
};

/// Euclidean distances for the n(n-1)/2 pairs (i < j), row-major.
std::vector<double> pair_distances(const Eigen::MatrixXd& coordinates);

/// Torgerson scaling: top-d eigenvectors of the double-centred squared
/// dissimilarities, scaled by sqrt(eigenvalue). Each column is sign-fixed so
/// its largest-magnitude entry is positive. Columns beyond the number of
/// positive eigenvalues are filled from a seeded normal generator and flagged.
Configuration classical_init(const PairMatrix& dissimilarity, int d, std::uint64_t seed = kDefaultSeed);

/// Least-squares fit to `distances` that is non-decreasing along `order`
/// (pool-adjacent-violators). Values are returned in pair order.
Disparities isotonic_fit(std::span<const double> distances, std::span<const std::size_t> order);

/// Kruskal stress-1: sqrt(sum (d - dhat)^2 / sum d^2).
double stress1(std::span<const double> distances, const Disparities& disparities);

/// Squared Pearson correlation of distances and disparities, in [0, 1].
double rsq(std::span<const double> distances, const Disparities& disparities);

/// Non-metric MDS: stress-1 minimized by SMACOF majorization with PAVA
/// disparities (ties in the dissimilarities impose no order). Initialized by
/// classical_init on the midranks of the dissimilarities, so the result
/// depends only on their rank order. Output is centred.
Configuration embed(const PairMatrix& dissimilarity, int d, const EmbedOptions& options = {});

struct DimensionFit {
  int d = 0;
  double stress = 0.0;
  double rsq = 0.0;
};

std::vector<DimensionFit> scan_dimensions(const PairMatrix& dissimilarity, int d_max,
                                          const EmbedOptions& options = {});
std::string scan_to_csv(std::span<const DimensionFit> fits);

struct ProcrustesResult {
  Configuration aligned;
  /// Root-mean-square distance between aligned source and target points.
  double residual = 0.0;
  Eigen::MatrixXd rotation;
  double scale = 1.0;
  Eigen::RowVectorXd translation;
};

/// Best translation + orthogonal map (+ uniform scale when allowed) taking
/// `source` onto `target` in the least-squares sense.
ProcrustesResult procrustes_align(const Configuration& source, const Configuration& target,
                                  bool allow_scaling, bool allow_reflection = true);

std::string configuration_to_json(const Configuration& c);
Configuration configuration_from_json(std::string_view text);

}  // namespace gaborface
