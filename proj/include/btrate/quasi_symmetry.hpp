#ifndef BTRATE_QUASI_SYMMETRY_HPP_
#define BTRATE_QUASI_SYMMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"

namespace btrate {

/// C = A S with A = diag(a) and S symmetric. `a` is scaled so that its last
/// entry is 1.
struct QuasiSymmetryDecomposition {
  std::vector<double> a;
  Eigen::MatrixXd s;
  double max_residual = 0.0;

  /// The matrix a_i * s_ij.
  Eigen::MatrixXd recompose() const {
    Eigen::MatrixXd out = s;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) *= a[i];
    return out;
  }
};

/// Outcome of a quasi-symmetry test. `decomposition` is present iff the
/// elementwise residual is within tolerance; `max_residual` is the best
/// residual achieved either way.
struct QuasiSymmetryCheck {
  std::optional<QuasiSymmetryDecomposition> decomposition;
  double max_residual = 0.0;

  bool quasi_symmetric() const { return decomposition.has_value(); }
};

/// Tests whether C = A S. log a is estimated by least squares over
/// log a_i - log a_j = log(c_ij / c_ji) on pairs with both counts positive,
/// then the recomposition is verified elementwise against `tol`.
inline QuasiSymmetryCheck quasi_symmetry_decompose(const ComparisonMatrix& c,
                                                   double tol) {
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  require_irreducible(c);

  const auto n = static_cast<Eigen::Index>(c.size());
  const Eigen::MatrixXd& counts = c.counts();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (counts(i, j) > 0.0 && counts(j, i) > 0.0) pairs.emplace_back(i, j);
    }
  }

  // Unknowns are log a_0 .. log a_{n-2}; log a_{n-1} is pinned to 0.
  Eigen::VectorXd log_a = Eigen::VectorXd::Zero(n);
  if (!pairs.empty() && n > 1) {
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(pairs.size()), n - 1);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(pairs.size()));
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(pairs.size()); ++r) {
      const auto [i, j] = pairs[static_cast<std::size_t>(r)];
      if (i < n - 1) design(r, i) += 1.0;
      if (j < n - 1) design(r, j) -= 1.0;
      rhs(r) = std::log(counts(i, j) / counts(j, i));
    }
    log_a.head(n - 1) = design.completeOrthogonalDecomposition().solve(rhs);
  }

  QuasiSymmetryDecomposition d;
  d.a.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d.a[i] = std::exp(log_a(i) - log_a(n - 1));
  d.s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (counts(i, j) / d.a[i] + counts(j, i) / d.a[j]);
      d.s(i, j) = v;
      d.s(j, i) = v;
    }
  }
  d.max_residual = (d.recompose() - counts).cwiseAbs().maxCoeff();

  QuasiSymmetryCheck out;
  out.max_residual = d.max_residual;
  if (d.max_residual <= tol) out.decomposition = std::move(d);
  return out;
}

}  // namespace btrate

#endif  // BTRATE_QUASI_SYMMETRY_HPP_
