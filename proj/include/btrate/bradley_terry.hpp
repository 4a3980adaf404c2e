#ifndef BTRATE_BRADLEY_TERRY_HPP_
#define BTRATE_BRADLEY_TERRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/rating.hpp"

namespace btrate {

struct FitOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  Normalization normalization;
  /// Starting strengths; uniform when empty.
  std::vector<double> initial;
};

/// Maximum-likelihood Bradley-Terry fit with its diagnostics.
struct FitReport {
  RatingVector ratings;
  double log_likelihood = 0.0;
  double entropy = 0.0;
  /// w_i minus expected wins at the reported ratings.
  std::vector<double> residuals;
  int iterations = 0;
  bool converged = false;

  double max_abs_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
  }
};

namespace detail {

inline void check_strengths(const ComparisonMatrix& c, std::span<const double> strengths) {
  if (strengths.size() != c.size()) {
    throw InvalidInput("rating vector has " + std::to_string(strengths.size()) +
                       " entries but the comparison matrix has " +
                       std::to_string(c.size()) + " items");
  }
  for (double v : strengths) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw InvalidInput("strengths must be positive and finite");
    }
  }
}

// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// Matrix of p_ij = pi_i / (pi_i + pi_j), zero on the diagonal.
inline Eigen::MatrixXd bt_probabilities(std::span<const double> strengths) {
  const auto n = static_cast<Eigen::Index>(strengths.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) p(i, j) = bt_probability(strengths[i], strengths[j]);
    }
  }
  return p;
}

/// sum_{i<j} c_ij log p_ij + c_ji log p_ji, without the binomial constant.
inline double log_likelihood(const ComparisonMatrix& c, std::span<const double> strengths) {
  detail::check_strengths(c, strengths);
  const std::size_t n = c.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || c(i, j) == 0.0) continue;
      // log(pi_i / (pi_i + pi_j)) without forming the ratio.
      total += c(i, j) * (std::log(strengths[i]) - std::log(strengths[i] + strengths[j]));
    }
  }
  return total;
}

inline double log_likelihood(const ComparisonMatrix& c, const RatingVector& r) {
  return log_likelihood(c, std::span<const double>(r.values));
}

/// r_i = w_i - sum_j m_ij p_ij. Zero for every item exactly at the MLE.
inline std::vector<double> retrodictive_residuals(const ComparisonMatrix& c,
                                                  std::span<const double> strengths) {
  detail::check_strengths(c, strengths);
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double observed = 0.0;
    double expected = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      observed += c(i, j);
      expected += (c(i, j) + c(j, i)) * strengths[i] / (strengths[i] + strengths[j]);
    }
    out[i] = observed - expected;
  }
  return out;
}

inline std::vector<double> retrodictive_residuals(const ComparisonMatrix& c,
                                                  const RatingVector& r) {
  return retrodictive_residuals(c, std::span<const double>(r.values));
}

/// Entropy of an arbitrary pairwise probability assignment:
/// -sum_{i<j} m_ij (p_ij log p_ij + (1 - p_ij) log(1 - p_ij)).
/// Only p_ij for i < j is read.
inline double entropy(const ComparisonMatrix& c, const Eigen::MatrixXd& p) {
  const auto n = static_cast<Eigen::Index>(c.size());
  if (p.rows() != n || p.cols() != n) {
    throw InvalidInput("probability matrix dimension does not match comparison matrix");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double m = c.counts()(i, j) + c.counts()(j, i);
      if (m == 0.0) continue;
      const double q = p(i, j);
      if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("probability outside [0, 1]");
      s -= m * (detail::xlogx(q) + detail::xlogx(1.0 - q));
    }
  }
  return s;
}

inline double entropy(const ComparisonMatrix& c, std::span<const double> strengths) {
  detail::check_strengths(c, strengths);
  return entropy(c, bt_probabilities(strengths));
}

inline double entropy(const ComparisonMatrix& c, const RatingVector& r) {
  return entropy(c, std::span<const double>(r.values));
}

/// Fits Bradley-Terry strengths by the minorization-maximization fixed point
///   pi_i <- w_i / sum_j m_ij / (pi_i + pi_j),
/// rescaled to unit geometric mean after every sweep. Stops once both the
/// largest relative parameter change and the largest retrodictive residual
/// are within `tol`.
///
/// Throws PreconditionViolation for a reducible matrix. Running out of
/// iterations is reported through `converged`, not thrown.
inline FitReport fit_bt(const ComparisonMatrix& c, const FitOptions& options = {}) {
  if (!(options.tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (options.max_iter < 1) throw InvalidInput("max_iter must be at least 1");
  require_irreducible(c);

  const std::size_t n = c.size();
  const Eigen::MatrixXd m = match_matrix(c);
  const WinsVector w = wins(c);

  std::vector<double> pi(n, 1.0);
  if (!options.initial.empty()) {
    detail::check_strengths(c, options.initial);
    pi = options.initial;
  }
  auto rescale = [](std::vector<double>& v) {
    double log_sum = 0.0;
    for (double x : v) log_sum += std::log(x);
    const double g = std::exp(log_sum / static_cast<double>(v.size()));
    for (double& x : v) x /= g;
  };
  rescale(pi);

  FitReport report;
  std::vector<double> next(n);
  std::vector<double> residuals;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /
                             (pi[i] + pi[j]);
      }
      next[i] = w[i] / denom;
    }
    rescale(next);

    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_change = std::max(max_change, std::abs(next[i] - pi[i]) / pi[i]);
    }
    pi.swap(next);
    residuals = retrodictive_residuals(c, pi);
    double max_residual = 0.0;
    for (double r : residuals) max_residual = std::max(max_residual, std::abs(r));

    report.iterations = iter;
    if (max_change <= options.tol && max_residual <= options.tol) {
      report.converged = true;
      break;
    }
  }

  report.ratings = make_ratings(c.items(), pi, options.normalization);
  report.residuals = retrodictive_residuals(c, report.ratings);
  report.log_likelihood = log_likelihood(c, report.ratings);
  report.entropy = entropy(c, report.ratings);
  return report;
}

}  // namespace btrate

#endif  // BTRATE_BRADLEY_TERRY_HPP_
