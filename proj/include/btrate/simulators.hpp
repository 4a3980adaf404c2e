#ifndef BTRATE_SIMULATORS_HPP_
#define BTRATE_SIMULATORS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/random.hpp"

namespace btrate {

// ---------------------------------------------------------------------------
// Discriminal processes: each item draws a noisy sensation, the larger wins.

enum class DiscriminalFamily { exponential, gumbel, weibull, frechet };

inline std::string_view family_name(DiscriminalFamily f) {
  switch (f) {
    case DiscriminalFamily::exponential: return "exponential";
    case DiscriminalFamily::gumbel: return "gumbel";
    case DiscriminalFamily::weibull: return "weibull";
    case DiscriminalFamily::frechet: return "frechet";
  }
  return "?";
}

inline DiscriminalFamily parse_family(std::string_view name) {
  for (auto f : {DiscriminalFamily::exponential, DiscriminalFamily::gumbel,
                 DiscriminalFamily::weibull, DiscriminalFamily::frechet}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidInput("unknown discriminal family '" + std::string(name) + "'");
}

/// Per-item parameters by family:
///   exponential  mean pi_i                 F(x) = 1 - exp(-x / pi_i)
///   gumbel       pi_i, shape alpha         F(x) = exp(-pi_i exp(-alpha x))
///   weibull      scale lambda_i, alpha     F(x) = 1 - exp(-(x / lambda_i)^alpha)
///   frechet      pi_i, shape alpha         F(x) = exp(-pi_i x^-alpha)
/// The induced Bradley-Terry strength is pi_i, except lambda_i^alpha for
/// weibull.
struct DiscriminalSpec {
  DiscriminalFamily family = DiscriminalFamily::exponential;
  double shape = 1.0;
  std::vector<double> params;
};

/// Gumbel strength for a sensation with mean `mean`: exp(alpha*mean - gamma).
inline double gumbel_strength_from_mean(double mean, double shape) {
  return std::exp(shape * mean - std::numbers::egamma);
}

inline void validate(const DiscriminalSpec& spec) {
  if (spec.params.size() < 2) throw InvalidInput("discriminal spec needs at least 2 items");
  for (double p : spec.params) {
    if (!(std::isfinite(p) && p > 0.0)) {
      throw InvalidInput("discriminal parameters must be positive and finite");
    }
  }
  if (spec.family != DiscriminalFamily::exponential &&
      !(std::isfinite(spec.shape) && spec.shape > 0.0)) {
    throw InvalidInput("discriminal shape must be positive");
  }
}

inline double discriminal_strength(const DiscriminalSpec& spec, std::size_t i) {
  if (spec.family == DiscriminalFamily::weibull) return std::pow(spec.params[i], spec.shape);
  return spec.params[i];
}

/// One sensation draw for item i, by inversion of its CDF.
inline double sample_sensation(const DiscriminalSpec& spec, std::size_t i, Rng& rng) {
  const double p = spec.params[i];
  const double e = -std::log(rng.uniform_open());  // standard exponential
  switch (spec.family) {
    case DiscriminalFamily::exponential: return p * e;
    case DiscriminalFamily::gumbel: return (std::log(p) - std::log(e)) / spec.shape;
    case DiscriminalFamily::weibull: return p * std::pow(e, 1.0 / spec.shape);
    case DiscriminalFamily::frechet: return std::pow(p / e, 1.0 / spec.shape);
  }
  return 0.0;
}

inline void check_pair(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j) throw InvalidInput("an item cannot be compared with itself");
  if (i >= n || j >= n) throw InvalidInput("item index out of range");
}

/// Draws both sensations and returns the index with the larger one.
inline std::size_t sample_discriminal_winner(const DiscriminalSpec& spec, std::size_t i,
                                             std::size_t j, Rng& rng) {
  validate(spec);
  check_pair(spec.params.size(), i, j);
  const double bi = sample_sensation(spec, i, rng);
  const double bj = sample_sensation(spec, j, rng);
  return bi > bj ? i : j;
}

inline double theoretical_win_probability(const DiscriminalSpec& spec, std::size_t i,
                                          std::size_t j) {
  validate(spec);
  check_pair(spec.params.size(), i, j);
  return bt_probability(discriminal_strength(spec, i), discriminal_strength(spec, j));
}

// ---------------------------------------------------------------------------
// Game scenarios. Two-player games index the players 0 and 1.

/// First score wins; players score as Poisson processes with these rates.
struct PoissonRace {
  std::array<double, 2> rates{1.0, 1.0};
};

/// Rounds with independent success probabilities; a sub-contest is decided
/// by the first round with exactly one success, and the game by the first
/// side to lead by `r` sub-contests.
struct SuddenDeath {
  std::array<double, 2> p{0.5, 0.5};
  int r = 1;
};

/// A run of matches in which each player's winning chance is proportional
/// to its starting strength plus its wins so far.
struct AccumulatedWinRatio {
  std::array<double, 2> strengths{1.0, 1.0};
  std::uint64_t n_matches = 1;
};

/// Continuous-time two-state chain on {0 leading, 1 leading}. rates[k] is
/// the rate of switching into "k leading". The initial state is drawn from
/// the equilibrium distribution; the leader at `horizon` wins.
struct TwoStateChain {
  std::array<double, 2> rates{1.0, 1.0};
  double horizon = 1.0;
};

/// Winner-stays-on: the champion i meets j with probability proposal(i, j)
/// and keeps the title with the Barker acceptance probability
/// pi_i phi_ij / (pi_i phi_ij + pi_j phi_ji). The chain starts with item 0
/// as champion.
struct BarkerTournament {
  std::vector<double> strengths;
  Eigen::MatrixXd proposal;
  std::uint64_t n_games = 0;

  /// Opponents proposed uniformly at random.
  static BarkerTournament uniform(std::vector<double> strengths, std::uint64_t n_games) {
    const auto n = static_cast<Eigen::Index>(strengths.size());
    BarkerTournament b;
    b.strengths = std::move(strengths);
    b.proposal = Eigen::MatrixXd::Constant(n, n, n > 1 ? 1.0 / static_cast<double>(n - 1) : 0.0);
    b.proposal.diagonal().setZero();
    b.n_games = n_games;
    return b;
  }
};

using GameSpec =
    std::variant<PoissonRace, SuddenDeath, AccumulatedWinRatio, TwoStateChain, BarkerTournament>;

namespace detail {

inline void check_positive(const std::array<double, 2>& v, const char* what) {
  for (double x : v) {
    if (!(std::isfinite(x) && x > 0.0)) throw InvalidInput(std::string(what) + " must be positive");
  }
}

}  // namespace detail

inline void validate(const PoissonRace& g) { detail::check_positive(g.rates, "Poisson rates"); }

inline void validate(const SuddenDeath& g) {
  for (double p : g.p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("sudden-death probabilities must lie in (0, 1)");
  }
  if (g.r < 1) throw InvalidInput("sudden-death margin r must be a positive integer");
}

inline void validate(const AccumulatedWinRatio& g) {
  detail::check_positive(g.strengths, "initial strengths");
  if (g.n_matches < 1) throw InvalidInput("accumulated win ratio needs at least one match");
}

inline void validate(const TwoStateChain& g) {
  detail::check_positive(g.rates, "switch rates");
  if (!(std::isfinite(g.horizon) && g.horizon > 0.0)) {
    throw InvalidInput("horizon must be a positive time");
  }
}

inline void validate(const BarkerTournament& g) {
  const auto n = static_cast<Eigen::Index>(g.strengths.size());
  if (n < 2) throw InvalidInput("Barker tournament needs at least 2 players");
  for (double s : g.strengths) {
    if (!(std::isfinite(s) && s > 0.0)) throw InvalidInput("strengths must be positive");
  }
  if (g.proposal.rows() != n || g.proposal.cols() != n) {
    throw InvalidInput("proposal matrix dimension does not match strengths");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g.proposal(i, i) != 0.0) throw InvalidInput("proposal matrix must have zero diagonal");
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(g.proposal(i, j) >= 0.0)) throw InvalidInput("proposal probabilities must be >= 0");
      row += g.proposal(i, j);
    }
    if (std::abs(row - 1.0) > 1e-12) throw InvalidInput("proposal rows must sum to 1");
  }
}

inline void validate(const GameSpec& spec) {
  std::visit([](const auto& g) { validate(g); }, spec);
}

/// Winner of a two-player game plus the number of elementary events used
/// (rounds, state switches).
struct TwoPlayerOutcome {
  int winner = 0;
  std::uint64_t events = 0;
};

/// Winner of every match, in order.
struct WinSequence {
  std::vector<std::uint8_t> winners;
};

/// Games spent as champion by each player; sums to n_games.
struct Occupancy {
  std::vector<std::uint64_t> counts;
};

using GameOutcome = std::variant<TwoPlayerOutcome, WinSequence, Occupancy>;

inline constexpr std::uint64_t kSuddenDeathRoundCap = 1'000'000'000ULL;

inline TwoPlayerOutcome simulate_game(const PoissonRace& g, Rng& rng) {
  validate(g);
  const double t0 = rng.exponential(1.0 / g.rates[0]);
  const double t1 = rng.exponential(1.0 / g.rates[1]);
  return {t0 < t1 ? 0 : 1, 1};
}

inline TwoPlayerOutcome simulate_game(const SuddenDeath& g, Rng& rng) {
  validate(g);
  int lead = 0;  // sub-contests won by player 0 minus player 1
  std::uint64_t rounds = 0;
  while (lead < g.r && lead > -g.r) {
    for (;;) {
      if (++rounds > kSuddenDeathRoundCap) {
        throw ConvergenceFailure("sudden death exceeded the round cap");
      }
      const bool s0 = rng.bernoulli(g.p[0]);
      const bool s1 = rng.bernoulli(g.p[1]);
      if (s0 != s1) {
        lead += s0 ? 1 : -1;
        break;
      }
    }
  }
  return {lead > 0 ? 0 : 1, rounds};
}

inline WinSequence simulate_game(const AccumulatedWinRatio& g, Rng& rng) {
  validate(g);
  std::array<double, 2> s = g.strengths;
  WinSequence out;
  out.winners.reserve(g.n_matches);
  for (std::uint64_t k = 0; k < g.n_matches; ++k) {
    const int w = rng.uniform_open() * (s[0] + s[1]) < s[0] ? 0 : 1;
    s[w] += 1.0;
    out.winners.push_back(static_cast<std::uint8_t>(w));
  }
  return out;
}

inline TwoPlayerOutcome simulate_game(const TwoStateChain& g, Rng& rng) {
  validate(g);
  int state = rng.uniform_open() * (g.rates[0] + g.rates[1]) < g.rates[0] ? 0 : 1;
  double t = 0.0;
  std::uint64_t switches = 0;
  for (;;) {
    // Leaving "k leading" happens at the rate of switching into the other.
    t += rng.exponential(1.0 / g.rates[1 - state]);
    if (t > g.horizon) break;
    state = 1 - state;
    ++switches;
  }
  return {state, switches};
}

inline double barker_retention_probability(const BarkerTournament& g, std::size_t i,
                                           std::size_t j) {
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  const double keep = g.strengths[i] * g.proposal(a, b);
  const double take = g.strengths[j] * g.proposal(b, a);
  return keep / (keep + take);
}

inline Occupancy simulate_game(const BarkerTournament& g, Rng& rng) {
  validate(g);
  const std::size_t n = g.strengths.size();
  Occupancy out;
  out.counts.assign(n, 0);
  std::size_t champion = 0;
  for (std::uint64_t k = 0; k < g.n_games; ++k) {
    double u = rng.uniform_open();
    std::size_t opponent = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
      const double phi = g.proposal(static_cast<Eigen::Index>(champion), static_cast<Eigen::Index>(j));
      if (u < phi) {
        opponent = j;
        break;
      }
      u -= phi;
    }
    if (opponent == champion) opponent = (champion + 1) % n;  // rounding guard
    if (!rng.bernoulli(barker_retention_probability(g, champion, opponent))) {
      champion = opponent;
    }
    ++out.counts[champion];
  }
  return out;
}

inline GameOutcome simulate_game(const GameSpec& spec, Rng& rng) {
  return std::visit([&](const auto& g) -> GameOutcome { return simulate_game(g, rng); }, spec);
}

/// Closed-form probability that player i beats player j. For Barker this is
/// the per-game retention probability; see stationary_occupancy for the
/// long-run share.
inline double theoretical_win_probability(const GameSpec& spec, std::size_t i, std::size_t j) {
  validate(spec);
  if (const auto* b = std::get_if<BarkerTournament>(&spec)) {
    check_pair(b->strengths.size(), i, j);
    return barker_retention_probability(*b, i, j);
  }
  check_pair(2, i, j);
  return std::visit(
      [&](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PoissonRace>) {
          return bt_probability(g.rates[i], g.rates[j]);
        } else if constexpr (std::is_same_v<T, SuddenDeath>) {
          const double qi = std::pow(g.p[i] / (1.0 - g.p[i]), g.r);
          const double qj = std::pow(g.p[j] / (1.0 - g.p[j]), g.r);
          return bt_probability(qi, qj);
        } else if constexpr (std::is_same_v<T, AccumulatedWinRatio>) {
          return bt_probability(g.strengths[i], g.strengths[j]);
        } else if constexpr (std::is_same_v<T, TwoStateChain>) {
          return bt_probability(g.rates[i], g.rates[j]);
        } else {
          return 0.0;
        }
      },
      spec);
}

/// Long-run share of games spent as champion: the normalized strengths.
inline std::vector<double> stationary_occupancy(const BarkerTournament& g) {
  validate(g);
  double total = 0.0;
  for (double s : g.strengths) total += s;
  std::vector<double> out;
  for (double s : g.strengths) out.push_back(s / total);
  return out;
}

// ---------------------------------------------------------------------------
// Batch runs.

struct SimResult {
  /// Outcome tallies: wins per player for two-player games, games as
  /// champion per player for Barker.
  std::vector<std::uint64_t> counts;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;

  std::vector<double> empirical_frequencies() const {
    std::vector<double> f;
    for (auto c : counts) {
      f.push_back(n_trials ? static_cast<double>(c) / static_cast<double>(n_trials) : 0.0);
    }
    return f;
  }
};

namespace detail {

/// Splits `n_trials` across `shards` streams derived from `seed`; shard s
/// runs on Rng::stream(seed, s) and gets n/shards trials plus one of the
/// remainder when s < n % shards. `trial` returns the outcome index.
template <typename Trial>
SimResult run_sharded(std::uint64_t n_trials, std::uint64_t seed, unsigned shards,
                      std::size_t n_outcomes, Trial trial) {
  if (n_trials < 1) throw InvalidInput("trial count must be at least 1");
  if (shards < 1) throw InvalidInput("shard count must be at least 1");
  std::vector<std::vector<std::uint64_t>> tallies(shards,
                                                  std::vector<std::uint64_t>(n_outcomes, 0));
  auto work = [&](unsigned s) {
    Rng rng = Rng::stream(seed, s);
    const std::uint64_t count = n_trials / shards + (s < n_trials % shards ? 1 : 0);
    for (std::uint64_t t = 0; t < count; ++t) ++tallies[s][trial(rng)];
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned s = 0; s < shards; ++s) workers.emplace_back(work, s);
  }
  SimResult r;
  r.counts.assign(n_outcomes, 0);
  for (const auto& t : tallies) {
    for (std::size_t k = 0; k < n_outcomes; ++k) r.counts[k] += t[k];
  }
  r.n_trials = n_trials;
  r.seed = seed;
  r.shards = shards;
  return r;
}

}  // namespace detail

/// Independent replications of a two-player game; counts[k] is the number
/// won by player k. For AccumulatedWinRatio a trial's winner is the winner
/// of its last match.
inline SimResult run_trials(const GameSpec& spec, std::uint64_t n_trials, std::uint64_t seed,
                            unsigned shards = 1) {
  validate(spec);
  if (std::holds_alternative<BarkerTournament>(spec)) {
    throw InvalidInput("Barker tournaments are a single chain; use run_barker");
  }
  return detail::run_sharded(n_trials, seed, shards, 2, [&](Rng& rng) -> std::size_t {
    const GameOutcome o = simulate_game(spec, rng);
    if (const auto* seq = std::get_if<WinSequence>(&o)) return seq->winners.back();
    return static_cast<std::size_t>(std::get<TwoPlayerOutcome>(o).winner);
  });
}

/// One winner-stays-on chain of g.n_games games; counts are occupancies.
inline SimResult run_barker(const BarkerTournament& g, std::uint64_t seed) {
  validate(g);
  if (g.n_games < 1) throw InvalidInput("Barker tournament needs at least one game");
  Rng rng(seed);
  SimResult r;
  r.counts = simulate_game(g, rng).counts;
  r.n_trials = g.n_games;
  r.seed = seed;
  r.shards = 1;
  return r;
}

/// Repeated comparisons of items i and j; counts[0] = wins of i,
/// counts[1] = wins of j.
inline SimResult run_discriminal_trials(const DiscriminalSpec& spec, std::size_t i, std::size_t j,
                                        std::uint64_t n_trials, std::uint64_t seed,
                                        unsigned shards = 1) {
  validate(spec);
  check_pair(spec.params.size(), i, j);
  return detail::run_sharded(n_trials, seed, shards, 2, [&](Rng& rng) -> std::size_t {
    return sample_sensation(spec, i, rng) > sample_sensation(spec, j, rng) ? 0 : 1;
  });
}

/// Bradley-Terry tournament: c_ij ~ Binomial(m_ij, pi_i / (pi_i + pi_j))
/// independently per unordered pair, c_ji = m_ij - c_ij.
inline ComparisonMatrix generate_tournament(std::span<const double> strengths,
                                            const Eigen::MatrixXd& schedule, Rng& rng,
                                            std::vector<std::string> labels = {}) {
  const auto n = static_cast<Eigen::Index>(strengths.size());
  if (schedule.rows() != n || schedule.cols() != n) {
    throw InvalidInput("schedule dimension does not match strengths");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = schedule(i, j);
      if (!(m >= 0.0) || m != std::floor(m)) {
        throw InvalidInput("schedule entries must be nonnegative integers");
      }
      if (m != schedule(j, i)) throw InvalidInput("schedule must be symmetric");
      if (i == j && m != 0.0) throw InvalidInput("schedule must have zero diagonal");
    }
  }
  if (labels.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto m = static_cast<std::uint64_t>(schedule(i, j));
      const auto wins_i = rng.binomial(m, bt_probability(strengths[i], strengths[j]));
      c(i, j) = static_cast<double>(wins_i);
      c(j, i) = static_cast<double>(m - wins_i);
    }
  }
  return ComparisonMatrix(std::move(labels), std::move(c));
}

}  // namespace btrate

#endif  // BTRATE_SIMULATORS_HPP_
