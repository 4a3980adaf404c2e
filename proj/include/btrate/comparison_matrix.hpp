#ifndef BTRATE_COMPARISON_MATRIX_HPP_
#define BTRATE_COMPARISON_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "btrate/error.hpp"

namespace btrate {

/// Labeled square matrix of observed preferences: entry (i, j) counts how
/// often item i was preferred over item j. Counts are nonnegative reals so
/// that reduced tournaments, which carry fractional counts, share the type.
///
/// Invariants: n >= 2 distinct non-empty labels, zero diagonal, finite
/// nonnegative entries. Enforced on construction.
class ComparisonMatrix {
 public:
  ComparisonMatrix(std::vector<std::string> items, Eigen::MatrixXd counts)
      : items_(std::move(items)), counts_(std::move(counts)) {
    Validate();
  }

  /// Convenience constructor for literal tables.
  ComparisonMatrix(std::vector<std::string> items,
                   std::initializer_list<std::initializer_list<double>> rows)
      : items_(std::move(items)) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    counts_ = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw InvalidInput("comparison matrix must be square");
      }
      Eigen::Index j = 0;
      for (double v : row) counts_(i, j++) = v;
      ++i;
    }
    Validate();
  }

  std::size_t size() const { return items_.size(); }
  const std::vector<std::string>& items() const { return items_; }
  const Eigen::MatrixXd& counts() const { return counts_; }

  double operator()(std::size_t i, std::size_t j) const {
    return counts_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  std::optional<std::size_t> index_of(std::string_view label) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i] == label) return i;
    }
    return std::nullopt;
  }

  /// Sum of all entries, i.e. the number of comparisons observed.
  double total() const { return counts_.sum(); }

  friend bool operator==(const ComparisonMatrix& a, const ComparisonMatrix& b) {
    return a.items_ == b.items_ && a.counts_ == b.counts_;
  }

 private:
  void Validate() const {
    const std::size_t n = items_.size();
    if (n < 2) throw InvalidInput("comparison matrix needs at least 2 items");
    if (static_cast<std::size_t>(counts_.rows()) != n ||
        static_cast<std::size_t>(counts_.cols()) != n) {
      throw InvalidInput("comparison matrix dimension does not match labels");
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : items_) {
      if (label.empty()) throw InvalidInput("empty item label");
      if (!seen.insert(label).second) {
        throw InvalidInput("duplicate item label '" + label + "'");
      }
    }
    for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
      for (Eigen::Index j = 0; j < counts_.cols(); ++j) {
        const double v = counts_(i, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw InvalidInput("count (" + items_[i] + ", " + items_[j] +
                             ") must be finite and nonnegative");
        }
        if (i == j && v != 0.0) {
          throw InvalidInput("nonzero diagonal count for '" + items_[i] + "'");
        }
      }
    }
  }

  std::vector<std::string> items_;
  Eigen::MatrixXd counts_;
};

/// Per-item win totals; sums to the total of the source matrix.
struct WinsVector {
  std::vector<double> values;

  double total() const { return std::accumulate(values.begin(), values.end(), 0.0); }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// w_i = sum_j c_ij.
inline WinsVector wins(const ComparisonMatrix& c) {
  const Eigen::VectorXd rows = c.counts().rowwise().sum();
  return WinsVector{std::vector<double>(rows.begin(), rows.end())};
}

/// Per-item loss totals (column sums), the diagonal of D in the spectral
/// methods.
inline std::vector<double> losses(const ComparisonMatrix& c) {
  const Eigen::RowVectorXd cols = c.counts().colwise().sum();
  return std::vector<double>(cols.begin(), cols.end());
}

/// M = C + C^T, the number of meetings between each pair.
inline Eigen::MatrixXd match_matrix(const ComparisonMatrix& c) {
  return c.counts() + c.counts().transpose();
}

/// True iff the preference digraph (edge j -> i whenever c_ij > 0) is
/// strongly connected; equivalently every bipartition of the items has a
/// preference crossing it in each direction.
inline bool is_irreducible(const ComparisonMatrix& c) {
  const std::size_t n = c.size();
  // Strongly connected iff every node reaches node 0 and is reached from it.
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double w = forward ? c(v, u) : c(u, v);
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

inline void require_irreducible(const ComparisonMatrix& c) {
  if (!is_irreducible(c)) {
    throw PreconditionViolation(
        "comparison matrix is reducible: ratings are not finite");
  }
}

/// Bradley-Terry probability that an item of strength `pi_i` is preferred
/// over one of strength `pi_j`.
inline double bt_probability(double pi_i, double pi_j) {
  if (!(std::isfinite(pi_i) && std::isfinite(pi_j) && pi_i > 0.0 && pi_j > 0.0)) {
    throw InvalidInput("strengths must be positive and finite");
  }
  return pi_i / (pi_i + pi_j);
}

}  // namespace btrate

#endif  // BTRATE_COMPARISON_MATRIX_HPP_
