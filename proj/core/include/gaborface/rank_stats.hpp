#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaborface/pair_matrix.hpp"

namespace gaborface {

inline constexpr std::uint64_t kDefaultSeed = 20260917;

/// Two value series over the unordered off-diagonal pairs of one item set,
/// in lexicographic (id_i, id_j) order with id_i < id_j.
struct PairedSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::pair<std::string, std::string>> pair_labels;
};

enum class SignificanceMethod { kTApproximation, kPermutation };
std::string_view to_string(SignificanceMethod method);

struct SignificanceResult {
  double p_two_sided = 1.0;
  SignificanceMethod method = SignificanceMethod::kTApproximation;
  /// |rho| == 1 under the t approximation: the statistic is infinite and p is 0.
  bool exact_extreme = false;
};

struct CorrelationResult {
  double rho = 0.0;
  std::size_t n = 0;
  double p_two_sided = 1.0;
  SignificanceMethod method = SignificanceMethod::kTApproximation;
  bool exact_extreme = false;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> permutations;
};

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the midranks. Throws DegenerateError for a constant series.
double spearman_rho(std::span<const double> x, std::span<const double> y);
inline double spearman_rho(const PairedSeries& s) { return spearman_rho(s.x, s.y); }

/// Two-sided p-value for a Spearman coefficient over n observations.
/// Without `permutations`: Student t with n - 2 degrees of freedom on
/// t = rho sqrt((n - 2) / (1 - rho^2)). With `permutations`: Monte-Carlo
/// null distribution of rho over random orderings of 1..n, p = (hits + 1) / (B + 1).
SignificanceResult significance(double rho, std::size_t n,
                                std::optional<std::uint64_t> permutations = std::nullopt,
                                std::uint64_t seed = kDefaultSeed, unsigned threads = 1);

/// Upper triangles of two matrices over the same item set, in canonical pair
/// order. Similarity-kind matrices are negated so both series read as
/// dissimilarities.
PairedSeries aligned_series(const PairMatrix& model, const PairMatrix& semantic);

struct CorrelationOptions {
  std::optional<std::uint64_t> permutations;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

CorrelationResult correlate_model_with_ratings(const PairMatrix& model, const PairMatrix& semantic,
                                               const CorrelationOptions& options = {});

/// JSON {expresser_id, measure, rho, n_pairs, p_two_sided, method, seed}.
std::string correlation_to_json(const CorrelationResult& r, std::string_view expresser_id,
                                std::string_view measure);
CorrelationResult correlation_from_json(std::string_view text);

}  // namespace gaborface
