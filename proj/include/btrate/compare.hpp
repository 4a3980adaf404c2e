#ifndef BTRATE_COMPARE_HPP_
#define BTRATE_COMPARE_HPP_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btrate/bradley_terry.hpp"
#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/rating.hpp"
#include "btrate/spectral.hpp"

namespace btrate {

enum class Method { bt, pagerank, scroogefactor, fair_bets, cesaro, wei_kendall, rpi };

inline constexpr std::array<Method, 7> kAllMethods = {
    Method::bt,     Method::pagerank,    Method::scroogefactor, Method::fair_bets,
    Method::cesaro, Method::wei_kendall, Method::rpi};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::bt: return "bt";
    case Method::pagerank: return "pagerank";
    case Method::scroogefactor: return "scroogefactor";
    case Method::fair_bets: return "fair-bets";
    case Method::cesaro: return "cesaro";
    case Method::wei_kendall: return "wei-kendall";
    case Method::rpi: return "rpi";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  if (name == "fair_bets") return Method::fair_bets;
  if (name == "wei_kendall") return Method::wei_kendall;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

struct CompareOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  Normalization normalization;
};

struct CompareRow {
  Method method;
  RatingVector ratings;
  std::vector<std::string> ranks;
  bool converged = true;
  int iterations = 0;
};

namespace detail {

template <typename Fn>
auto annotate(Method m, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string(method_name(m)) + ": ";
  try {
    return fn();
  } catch (const PreconditionViolation& e) {
    throw PreconditionViolation(prefix + e.what());
  } catch (const ConvergenceFailure& e) {
    throw ConvergenceFailure(prefix + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix + e.what());
  }
}

}  // namespace detail

/// Runs one estimator and reports it under `options.normalization`. RPI
/// values are rescaled like the others, so they must be positive.
inline CompareRow run_method(const ComparisonMatrix& c, Method m, const CompareOptions& options) {
  return detail::annotate(m, [&] {
    CompareRow row{m, {}, {}, true, 0};
    SpectralOptions so;
    so.tol = options.tol;
    so.max_iter = options.max_iter;
    so.normalization = options.normalization;
    so.history = 0;
    auto take = [&](SpectralReport r) {
      row.ratings = std::move(r.ratings);
      row.converged = r.converged;
      row.iterations = r.iterations;
    };
    switch (m) {
      case Method::bt: {
        FitReport f = fit_bt(c, FitOptions{options.tol, options.max_iter,
                                           options.normalization, {}});
        row.ratings = std::move(f.ratings);
        row.converged = f.converged;
        row.iterations = f.iterations;
        break;
      }
      case Method::pagerank: take(pagerank_undamped(c, so)); break;
      case Method::scroogefactor: take(scroogefactor(c, so)); break;
      case Method::fair_bets: take(fair_bets(c, so)); break;
      case Method::cesaro: take(cesaro_rating(c, so)); break;
      case Method::wei_kendall: take(wei_kendall(c, so)); break;
      case Method::rpi:
        row.ratings = make_ratings(c.items(), rpi_classic(c), options.normalization);
        row.iterations = 1;
        break;
    }
    row.ranks = rank_labels(row.ratings.values, 10.0 * options.tol);
    return row;
  });
}

/// One normalized rating vector and rank order per requested method.
/// Errors carry the failing method's name as a prefix.
inline std::vector<CompareRow> compare_estimators(const ComparisonMatrix& c,
                                                  std::span<const Method> methods,
                                                  const CompareOptions& options = {}) {
  std::vector<CompareRow> rows;
  rows.reserve(methods.size());
  for (Method m : methods) rows.push_back(run_method(c, m, options));
  return rows;
}

}  // namespace btrate

#endif  // BTRATE_COMPARE_HPP_
