#ifndef BTRATE_GEOMETRIC_HPP_
#define BTRATE_GEOMETRIC_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"

namespace btrate {

/// A result projected onto the unit sphere: unit Euclidean norm, zero sum.
struct ResultVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// One race: its entrants (item indices) and their finishing positions,
/// which must be a permutation of 1..n_k.
struct RaceRecord {
  std::string race_id;
  std::vector<std::size_t> participants;
  std::vector<int> ranks;
};

/// Win for i over j: +1/sqrt(2) at i, -1/sqrt(2) at j.
inline ResultVector pairwise_result_vector(std::size_t i, std::size_t j, std::size_t n) {
  if (i == j) throw InvalidInput("a result needs two distinct items");
  if (i >= n || j >= n) throw InvalidInput("item index out of range");
  ResultVector x{std::vector<double>(n, 0.0)};
  x.values[i] = 1.0 / std::sqrt(2.0);
  x.values[j] = -1.0 / std::sqrt(2.0);
  return x;
}

/// Centred, scaled finishing positions; position 1 maps to the largest
/// coordinate. Entry for participant i is
///   ((n_k + 1)/2 - r_ik) / sqrt(n_k (n_k^2 - 1) / 12),
/// and zero for items that did not race.
inline ResultVector rank_to_sphere(const RaceRecord& record, std::size_t n) {
  const std::size_t nk = record.participants.size();
  if (nk < 2) throw InvalidInput("race '" + record.race_id + "' needs at least 2 entrants");
  if (record.ranks.size() != nk) {
    throw InvalidInput("race '" + record.race_id + "' has mismatched ranks and entrants");
  }
  std::vector<char> rank_seen(nk + 1, 0);
  std::vector<char> item_seen(n, 0);
  for (std::size_t k = 0; k < nk; ++k) {
    const int r = record.ranks[k];
    if (r < 1 || static_cast<std::size_t>(r) > nk || rank_seen[static_cast<std::size_t>(r)]) {
      throw InvalidInput("race '" + record.race_id + "' ranks are not a permutation of 1.." +
                         std::to_string(nk));
    }
    rank_seen[static_cast<std::size_t>(r)] = 1;
    const std::size_t i = record.participants[k];
    if (i >= n) throw InvalidInput("item index out of range");
    if (item_seen[i]) throw InvalidInput("race '" + record.race_id + "' lists an entrant twice");
    item_seen[i] = 1;
  }
  const double m = static_cast<double>(nk);
  const double scale = std::sqrt(m * (m * m - 1.0) / 12.0);
  ResultVector x{std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < nk; ++k) {
    x.values[record.participants[k]] = ((m + 1.0) / 2.0 - record.ranks[k]) / scale;
  }
  return x;
}

/// Rating on the unit sphere closest, in total squared distance, to the
/// results: the normalized resultant sum_k x_k / ||sum_k x_k||.
inline std::vector<double> geometric_rating(std::span<const ResultVector> results) {
  if (results.empty()) throw InvalidInput("no results to rate");
  const std::size_t n = results.front().size();
  std::vector<double> sum(n, 0.0);
  for (const auto& x : results) {
    if (x.size() != n) throw InvalidInput("result vectors differ in length");
    for (std::size_t i = 0; i < n; ++i) sum[i] += x[i];
  }
  const double norm = std::sqrt(std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0));
  if (!(norm > 1e-12)) throw InvalidInput("results cancel out: rating direction undefined");
  for (double& v : sum) v /= norm;
  return sum;
}

/// Geometric rating of a comparison matrix: every counted preference
/// contributes its pairwise result vector, weighted by the count.
inline std::vector<double> geometric_rating(const ComparisonMatrix& c) {
  const std::size_t n = c.size();
  std::vector<double> sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = c(i, j) / std::sqrt(2.0);
      sum[i] += d;
      sum[j] -= d;
    }
  }
  const double norm = std::sqrt(std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0));
  if (!(norm > 1e-12)) throw InvalidInput("results cancel out: rating direction undefined");
  for (double& v : sum) v /= norm;
  return sum;
}

}  // namespace btrate

#endif  // BTRATE_GEOMETRIC_HPP_
