#ifndef BTRATE_TESTS_FIXTURES_HPP_
#define BTRATE_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "btrate/btrate.hpp"
#include "oracles.hpp"

namespace fixtures {

inline btrate::ComparisonMatrix table1() {
  return btrate::ComparisonMatrix({"A", "B", "C", "D", "E"}, {{0, 1, 1, 1, 0},
                                                              {0, 0, 1, 1, 1},
                                                              {0, 0, 0, 1, 1},
                                                              {0, 0, 0, 0, 1},
                                                              {1, 0, 0, 0, 0}});
}

inline btrate::ComparisonMatrix table2a() {
  return btrate::ComparisonMatrix({"F", "G", "H"}, {{0, 10, 12}, {5, 0, 10}, {3, 5, 0}});
}

inline btrate::ComparisonMatrix table2b() {
  return btrate::ComparisonMatrix({"F", "G", "H"}, {{0, 10, 72}, {5, 0, 60}, {18, 30, 0}});
}

inline std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

inline btrate::ComparisonMatrix from(const oracle::Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = m[i][j];
  return btrate::ComparisonMatrix(labels(m.size()), c);
}

inline oracle::Matrix to(const btrate::ComparisonMatrix& c) {
  oracle::Matrix m = oracle::zeros(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) m[i][j] = c(i, j);
  return m;
}

// Quasi-symmetric matrix a_i s_ij from random integers.
inline oracle::Matrix quasi_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> a(0.2, 5.0), s(0.5, 10.0);
  std::vector<double> av(n);
  for (double& v : av) v = a(rng);
  oracle::Matrix c = oracle::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sij = s(rng);
      c[i][j] = av[i] * sij;
      c[j][i] = av[j] * sij;
    }
  }
  return c;
}

}  // namespace fixtures

#endif  // BTRATE_TESTS_FIXTURES_HPP_
