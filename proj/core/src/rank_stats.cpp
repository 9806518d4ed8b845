#include "gaborface/rank_stats.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "gaborface/errors.hpp"
#include "gaborface/parallel.hpp"
#include "json_util.hpp"

namespace gaborface {

using detail::Json;

namespace {

constexpr std::uint64_t kTrialsPerStream = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased integer in [0, bound) by rejection of the final partial range.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % bound;
}

}  // namespace

std::string_view to_string(SignificanceMethod method) {
  return method == SignificanceMethod::kPermutation ? "permutation" : "t_approximation";
}

std::vector<double> average_ranks(std::span<const double> values) {
  if (values.empty()) throw ValidationError("cannot rank an empty series");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("cannot rank non-finite values");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    // Ranks start+1 .. end share their mean.
    const double midrank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t i = start; i < end; ++i) ranks[order[i]] = midrank;
    start = end;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw IncompatibleError("rank correlation needs series of equal length");
  if (x.size() < 3) throw ValidationError("rank correlation needs at least 3 observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateError("rank correlation of a constant series is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SignificanceResult significance(double rho, std::size_t n, std::optional<std::uint64_t> permutations,
                                std::uint64_t seed, unsigned threads) {
  if (!std::isfinite(rho) || std::abs(rho) > 1.0) throw ValidationError("rho must lie in [-1, 1]");
  if (n < 4) throw ValidationError("significance needs at least 4 observations");

  if (!permutations) {
    SignificanceResult out;
    if (std::abs(rho) == 1.0) {
      out.p_two_sided = 0.0;
      out.exact_extreme = true;
      return out;
    }
    const double dof = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(dof / ((1.0 - rho) * (1.0 + rho)));
    const boost::math::students_t_distribution<double> dist(dof);
    out.p_two_sided = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    return out;
  }

  const std::uint64_t trials = *permutations;
  if (trials == 0) throw ValidationError("permutation count must be positive");
  const double nn = static_cast<double>(n);
  const double scale = 6.0 / (nn * (nn * nn - 1.0));
  const double threshold = std::abs(rho) - 1e-12;
  const std::uint64_t streams = (trials + kTrialsPerStream - 1) / kTrialsPerStream;

  std::atomic<std::uint64_t> hits{0};
  parallel_for(streams, threads, [&](std::size_t s) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(s)));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    const std::uint64_t begin = s * kTrialsPerStream;
    const std::uint64_t end = std::min(trials, begin + kTrialsPerStream);
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[bounded(rng, i + 1)]);
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(perm[i]);
        d2 += d * d;
      }
      if (std::abs(1.0 - scale * d2) >= threshold) ++local;
    }
    hits += local;
  });
  SignificanceResult out;
  out.method = SignificanceMethod::kPermutation;
  out.p_two_sided = static_cast<double>(hits.load() + 1) / static_cast<double>(trials + 1);
  return out;
}

PairedSeries aligned_series(const PairMatrix& model, const PairMatrix& semantic) {
  const std::set<std::string> a(model.item_ids().begin(), model.item_ids().end());
  const std::set<std::string> b(semantic.item_ids().begin(), semantic.item_ids().end());
  if (a != b) {
    std::string msg = "model and semantic matrices cover different items:";
    for (const auto& id : a)
      if (!b.count(id)) msg += " " + id + " (model only)";
    for (const auto& id : b)
      if (!a.count(id)) msg += " " + id + " (semantic only)";
    throw IncompatibleError(msg);
  }
  const std::vector<std::string> ids(a.begin(), a.end());
  std::vector<std::size_t> mi, si;
  for (const auto& id : ids) {
    mi.push_back(model.index_of(id));
    si.push_back(semantic.index_of(id));
  }
  const double model_sign = model.kind() == MatrixKind::kSimilarity ? -1.0 : 1.0;
  const double semantic_sign = semantic.kind() == MatrixKind::kSimilarity ? -1.0 : 1.0;
  PairedSeries s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      s.x.push_back(model_sign * model(mi[i], mi[j]));
      s.y.push_back(semantic_sign * semantic(si[i], si[j]));
      s.pair_labels.emplace_back(ids[i], ids[j]);
    }
  }
  return s;
}

CorrelationResult correlate_model_with_ratings(const PairMatrix& model, const PairMatrix& semantic,
                                               const CorrelationOptions& options) {
  if (model.size() < 3) throw ValidationError("correlation needs at least 3 items");
  const PairedSeries s = aligned_series(model, semantic);
  CorrelationResult r;
  r.rho = spearman_rho(s);
  r.n = s.x.size();
  r.seed = options.seed;
  r.permutations = options.permutations;
  const SignificanceResult sig = significance(r.rho, r.n, options.permutations, options.seed, options.threads);
  r.p_two_sided = sig.p_two_sided;
  r.method = sig.method;
  r.exact_extreme = sig.exact_extreme;
  return r;
}

std::string correlation_to_json(const CorrelationResult& r, std::string_view expresser_id,
                                std::string_view measure) {
  Json doc;
  doc["expresser_id"] = std::string(expresser_id);
  doc["measure"] = std::string(measure);
  doc["rho"] = r.rho;
  doc["n_pairs"] = r.n;
  doc["p_two_sided"] = r.p_two_sided;
  doc["method"] = std::string(to_string(r.method));
  doc["exact_extreme"] = r.exact_extreme;
  doc["seed"] = r.seed;
  doc["permutations"] = r.permutations ? Json(*r.permutations) : Json(nullptr);
  return detail::dump(doc);
}

CorrelationResult correlation_from_json(std::string_view text) {
  const char* what = "correlation result";
  const Json doc = detail::parse_json(text, what);
  CorrelationResult r;
  r.rho = detail::require_number(doc, "rho", what);
  r.n = detail::require(doc, "n_pairs", what).get<std::size_t>();
  r.p_two_sided = detail::require_number(doc, "p_two_sided", what);
  const std::string method = detail::require_string(doc, "method", what);
  if (method == "permutation") {
    r.method = SignificanceMethod::kPermutation;
  } else if (method == "t_approximation") {
    r.method = SignificanceMethod::kTApproximation;
  } else {
    throw FormatError("correlation result: unknown method '" + method + "'");
  }
  r.seed = detail::require(doc, "seed", what).get<std::uint64_t>();
  if (doc.contains("exact_extreme")) r.exact_extreme = doc.at("exact_extreme").get<bool>();
  if (doc.contains("permutations") && !doc.at("permutations").is_null()) {
    r.permutations = doc.at("permutations").get<std::uint64_t>();
  }
  return r;
}

}  // namespace gaborface
