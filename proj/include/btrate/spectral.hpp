#ifndef BTRATE_SPECTRAL_HPP_
#define BTRATE_SPECTRAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/rating.hpp"

namespace btrate {

struct SpectralOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  Normalization normalization;
  /// Problems up to this size are solved by dense elimination where a
  /// direct method exists; larger ones iterate.
  std::size_t dense_limit = 64;
  /// Number of raw iterates kept by wei_kendall and cesaro_rating.
  std::size_t history = 10;
};

/// Ratings from an eigenvector method.
///
/// `residual` is ||T x - x||_inf / ||x||_inf for the method's fixed-point
/// operator T at the returned vector; `converged` means residual <= tol.
/// `limit` is the vector before normalization: the stationary distribution
/// for PageRank, the Cesaro limit for cesaro_rating and lim (C/rho)^k e for
/// wei_kendall.
struct SpectralReport {
  RatingVector ratings;
  double dominant_eigenvalue = 1.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> limit;
  std::vector<std::vector<double>> iterate_history;
};

namespace detail {

inline Eigen::VectorXd column_losses(const ComparisonMatrix& c) {
  return c.counts().colwise().sum().transpose();
}

/// Every item must have lost at least once and the matrix must be
/// irreducible.
inline void require_spectral_preconditions(const ComparisonMatrix& c) {
  const Eigen::VectorXd l = column_losses(c);
  for (Eigen::Index j = 0; j < l.size(); ++j) {
    if (!(l(j) > 0.0)) {
      throw PreconditionViolation("undefeated item '" + c.items()[j] +
                                  "': column-stochastic normalization undefined");
    }
  }
  require_irreducible(c);
}

inline double inf_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

/// Solves A x = 0, sum(x) = 1 for a singular A whose rows sum to the zero
/// vector (so any one row is redundant and can carry the normalization).
inline Eigen::VectorXd dense_null_vector(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  return a.fullPivLu().solve(rhs);
}

struct Iterate {
  Eigen::VectorXd x;
  int iterations = 0;
};

/// Power iteration on the lazy operator (I + T)/2, which shares T's unit
/// eigenvector but has no other eigenvalue on the unit circle, so periodic
/// chains converge too. The limit from x0 is the spectral projection of x0,
/// i.e. the Cesaro limit of T^k x0.
template <typename Op>
Iterate lazy_power(Op&& apply, Eigen::VectorXd x, double tol, int max_iter) {
  Iterate out;
  for (int k = 1; k <= max_iter; ++k) {
    const Eigen::VectorXd tx = apply(x);
    out.iterations = k;
    if (inf_norm(tx - x) <= tol * inf_norm(x)) break;
    x = 0.5 * (x + tx);
  }
  out.x = std::move(x);
  return out;
}

struct Stationary {
  Eigen::VectorXd alpha;  // sums to 1
  int iterations = 0;
};

// Stationary distribution of C D^-1.
inline Stationary pagerank_stationary(const ComparisonMatrix& c, const SpectralOptions& o) {
  const Eigen::VectorXd l = column_losses(c);
  const Eigen::MatrixXd p = c.counts() * l.cwiseInverse().asDiagonal();
  const auto n = static_cast<Eigen::Index>(c.size());
  Stationary s;
  if (c.size() <= o.dense_limit) {
    s.alpha = dense_null_vector(p - Eigen::MatrixXd::Identity(n, n));
    s.iterations = 1;
  } else {
    auto it = lazy_power([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return p * x; },
                         Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)), o.tol,
                         o.max_iter);
    s.alpha = std::move(it.x);
    s.iterations = it.iterations;
  }
  s.alpha /= s.alpha.sum();
  return s;
}

inline double relative_residual(const Eigen::VectorXd& tx, const Eigen::VectorXd& x) {
  return inf_norm(tx - x) / inf_norm(x);
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

inline SpectralReport finish(const ComparisonMatrix& c, const Eigen::VectorXd& x,
                             const SpectralOptions& o, double residual, int iterations) {
  SpectralReport r;
  r.residual = residual;
  r.converged = residual <= o.tol;
  r.iterations = iterations;
  r.limit = to_std(x);
  r.ratings = make_ratings(c.items(), to_std(x), o.normalization);
  return r;
}

}  // namespace detail

/// Undamped PageRank: the stationary distribution alpha = C D^-1 alpha of the
/// "fair-weather fan" chain that moves from a team to one that beat it.
/// D = diag(losses).
inline SpectralReport pagerank_undamped(const ComparisonMatrix& c,
                                        const SpectralOptions& options = {}) {
  detail::require_spectral_preconditions(c);
  const auto s = detail::pagerank_stationary(c, options);
  const Eigen::VectorXd l = detail::column_losses(c);
  const Eigen::VectorXd t = c.counts() * s.alpha.cwiseQuotient(l);
  return detail::finish(c, s.alpha, options, detail::relative_residual(t, s.alpha),
                        s.iterations);
}

/// PageRank divided by losses: pi = D^-1 alpha_PR, the unit eigenvector of
/// D^-1 C.
inline SpectralReport scroogefactor(const ComparisonMatrix& c,
                                    const SpectralOptions& options = {}) {
  detail::require_spectral_preconditions(c);
  const auto s = detail::pagerank_stationary(c, options);
  const Eigen::VectorXd l = detail::column_losses(c);
  Eigen::VectorXd pi = s.alpha.cwiseQuotient(l);
  pi /= pi.sum();
  const Eigen::VectorXd t = (c.counts() * pi).cwiseQuotient(l);
  return detail::finish(c, pi, options, detail::relative_residual(t, pi), s.iterations);
}

/// Fair-bets rating: sum_j c_ij a_j = (sum_j c_ji) a_i for every i, solved
/// directly as the null vector of C - D rather than through PageRank.
inline SpectralReport fair_bets(const ComparisonMatrix& c, const SpectralOptions& options = {}) {
  detail::require_spectral_preconditions(c);
  const Eigen::VectorXd l = detail::column_losses(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::VectorXd a;
  int iterations = 1;
  if (c.size() <= options.dense_limit) {
    a = detail::dense_null_vector(c.counts() - Eigen::MatrixXd(l.asDiagonal()));
  } else {
    auto it = detail::lazy_power(
        [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
          return (c.counts() * x).cwiseQuotient(l);
        },
        Eigen::VectorXd::Ones(n), options.tol, options.max_iter);
    a = std::move(it.x);
    iterations = it.iterations;
  }
  a /= a.sum();
  const Eigen::VectorXd t = (c.counts() * a).cwiseQuotient(l);
  return detail::finish(c, a, options, detail::relative_residual(t, a), iterations);
}

/// Removes item k, redistributing its results:
///   c'_ij = c_ij + c_ik c_kj / sum_t c_tk   (i, j != k).
inline ComparisonMatrix reduce_tournament(const ComparisonMatrix& c, std::size_t k) {
  const std::size_t n = c.size();
  if (k >= n) throw InvalidInput("item index out of range");
  if (n < 3) throw InvalidInput("cannot reduce a tournament below 2 items");
  double k_losses = 0.0;
  for (std::size_t t = 0; t < n; ++t) k_losses += c(t, k);
  if (!(k_losses > 0.0)) {
    throw PreconditionViolation("item '" + c.items()[k] +
                                "' has no losses; reduced tournament undefined");
  }
  std::vector<std::string> items;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    keep.push_back(i);
    items.push_back(c.items()[i]);
  }
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      if (a == b) continue;
      const std::size_t i = keep[a];
      const std::size_t j = keep[b];
      out(a, b) = c(i, j) + c(i, k) * c(k, j) / k_losses;
    }
  }
  return ComparisonMatrix(std::move(items), std::move(out));
}

inline ComparisonMatrix reduce_tournament(const ComparisonMatrix& c, std::string_view label) {
  const auto k = c.index_of(label);
  if (!k) throw InvalidInput("unknown item '" + std::string(label) + "'");
  return reduce_tournament(c, *k);
}

/// Wei-Kendall rating: the normalized limit of C^k e, i.e. the Perron
/// vector of C. `iterate_history[k-1]` holds the raw C^k e for
/// k = 1..options.history; `limit` holds lim (C/rho)^k e.
inline SpectralReport wei_kendall(const ComparisonMatrix& c, const SpectralOptions& options = {}) {
  require_irreducible(c);
  const Eigen::MatrixXd& a = c.counts();
  const auto n = static_cast<Eigen::Index>(c.size());

  SpectralReport report;
  Eigen::VectorXd raw = Eigen::VectorXd::Ones(n);
  for (std::size_t k = 0; k < options.history; ++k) {
    raw = a * raw;
    report.iterate_history.push_back(detail::to_std(raw));
  }

  // Shifting by s > 0 leaves the Perron root strictly dominant even when C
  // is periodic; the mean row sum is of the order of rho.
  const double shift = a.sum() / static_cast<double>(n);
  struct Perron {
    Eigen::VectorXd v;
    double rho = 0.0;
    int iterations = 0;
    bool converged = false;
  };
  auto perron = [&](const Eigen::MatrixXd& m) {
    Perron out;
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int k = 1; k <= options.max_iter; ++k) {
      const Eigen::VectorXd mx = m * x;
      out.rho = x.dot(mx) / x.dot(x);
      out.iterations = k;
      if (detail::inf_norm(mx - out.rho * x) <= options.tol * out.rho * detail::inf_norm(x)) {
        out.converged = true;
        break;
      }
      x = mx + shift * x;
      x /= x.sum();
    }
    out.v = std::move(x);
    return out;
  };
  const Perron right = perron(a);
  const Perron left = perron(a.transpose());

  // (C/rho)^k -> v u^T / (u^T v), so the limit applied to e is v (u.e)/(u.v).
  const Eigen::VectorXd limit = right.v * (left.v.sum() / left.v.dot(right.v));
  report.dominant_eigenvalue = right.rho;
  report.iterations = std::max(right.iterations, left.iterations);
  report.residual =
      detail::relative_residual(a * limit / right.rho, limit);
  report.converged = right.converged && left.converged && report.residual <= options.tol;
  report.limit = detail::to_std(limit);
  report.ratings = make_ratings(c.items(), detail::to_std(limit), options.normalization);
  return report;
}

/// (1/r) sum_{k=1..r} Chat^k e with Chat = D^-1 C, evaluated literally.
inline std::vector<double> cesaro_partial_average(const ComparisonMatrix& c, int r) {
  detail::require_spectral_preconditions(c);
  if (r < 1) throw InvalidInput("Cesaro average needs r >= 1");
  const Eigen::VectorXd l = detail::column_losses(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::VectorXd power = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (int k = 1; k <= r; ++k) {
    power = (c.counts() * power).cwiseQuotient(l);
    sum += power;
  }
  return detail::to_std(sum / static_cast<double>(r));
}

/// Win-loss-ratio rating from the Cesaro average: lim_r (1/r) sum_{k<=r}
/// Chat^k e with Chat = D^-1 C. The limit is computed by lazy power
/// iteration, which converges to the same spectral projection of e without
/// the O(1/r) bias of the running mean. `iterate_history` holds the literal
/// running means for r = 1..options.history.
inline SpectralReport cesaro_rating(const ComparisonMatrix& c,
                                    const SpectralOptions& options = {}) {
  detail::require_spectral_preconditions(c);
  const Eigen::VectorXd l = detail::column_losses(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return (c.counts() * x).cwiseQuotient(l);
  };

  std::vector<std::vector<double>> history;
  {
    Eigen::VectorXd power = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (std::size_t r = 1; r <= options.history; ++r) {
      power = apply(power);
      sum += power;
      history.push_back(detail::to_std(sum / static_cast<double>(r)));
    }
  }

  auto it = detail::lazy_power(apply, Eigen::VectorXd::Ones(n), options.tol, options.max_iter);
  SpectralReport report = detail::finish(
      c, it.x, options, detail::relative_residual(apply(it.x), it.x), it.iterations);
  report.iterate_history = std::move(history);
  return report;
}

/// RPI = w1 x + w2 Mhat x + w3 Mhat^2 x with x_i = w_i / m_i and Mhat the
/// row-normalized match matrix. Opponents' percentages include their games
/// against the rated team.
inline std::vector<double> rpi_classic(const ComparisonMatrix& c,
                                       std::array<double, 3> weights = {0.25, 0.5, 0.25}) {
  if (std::abs(weights[0] + weights[1] + weights[2] - 1.0) > 1e-12) {
    throw InvalidInput("RPI weights must sum to 1");
  }
  const Eigen::MatrixXd m = match_matrix(c);
  const Eigen::VectorXd played = m.rowwise().sum();
  for (Eigen::Index i = 0; i < played.size(); ++i) {
    if (!(played(i) > 0.0)) {
      throw PreconditionViolation("item '" + c.items()[i] + "' has played no matches");
    }
  }
  const Eigen::MatrixXd mhat = played.cwiseInverse().asDiagonal() * m;
  const Eigen::VectorXd x = c.counts().rowwise().sum().cwiseQuotient(played);
  const Eigen::VectorXd mx = mhat * x;
  const Eigen::VectorXd rpi = weights[0] * x + weights[1] * mx + weights[2] * (mhat * mx);
  return detail::to_std(rpi);
}

}  // namespace btrate

#endif  // BTRATE_SPECTRAL_HPP_
