#ifndef BTRATE_CLI_HPP_
#define BTRATE_CLI_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "btrate/bradley_terry.hpp"
#include "btrate/compare.hpp"
#include "btrate/comparison_matrix.hpp"
#include "btrate/error.hpp"
#include "btrate/geometric.hpp"
#include "btrate/io.hpp"
#include "btrate/quasi_symmetry.hpp"
#include "btrate/rating.hpp"
#include "btrate/simulators.hpp"
#include "btrate/spectral.hpp"

namespace btrate::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kPreconditionError = 3,
  kNotConverged = 4,
};

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultMaxIter = 10000;

/// Everything a batch run needs; filled from the command line by the
/// btrate tool or directly by callers.
struct RunConfig {
  std::string command;  // fit | compare | check | simulate | race
  std::vector<std::string> inputs;
  std::string input_format = "auto";  // auto | results | matrix
  std::string method = "bt";
  std::vector<std::string> methods{"bt", "pagerank", "scroogefactor"};
  double tol = kDefaultTol;
  int max_iter = kDefaultMaxIter;
  std::string normalize = "ref";  // last item
  std::uint64_t seed = 1;
  std::uint64_t n = 100000;
  unsigned shards = 1;
  std::string format = "tsv";  // tsv | json
  std::string out;             // empty: the output stream passed to run()

  // Scenario parameters for `simulate`.
  std::string scenario;
  std::vector<double> p;          // sudden-death success probabilities
  int r = 1;                      // sudden-death margin
  std::vector<double> rates;      // poisson, two-state
  std::vector<double> strengths;  // accumulated (2), barker (n)
  std::uint64_t matches = 10;     // accumulated
  double horizon = 10.0;          // two-state
  std::string family = "exponential";
  double shape = 1.0;
  std::vector<double> params;  // discriminal item parameters
};

namespace detail {

using Json = nlohmann::ordered_json;

inline void validate(const RunConfig& c) {
  if (!(c.tol > 0.0)) throw InvalidInput("--tol must be positive");
  if (c.max_iter < 1) throw InvalidInput("--max-iter must be at least 1");
  if (c.n < 1) throw InvalidInput("--n must be at least 1");
  if (c.shards < 1) throw InvalidInput("--shards must be at least 1");
  if (c.format != "tsv" && c.format != "json") {
    throw InvalidInput("--format must be tsv or json");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline const std::string& single_input(const RunConfig& c) {
  if (c.inputs.empty()) throw InvalidInput(c.command + " needs an input file");
  return c.inputs.front();
}

inline ComparisonMatrix load_matrix(const RunConfig& c) {
  const std::string text = read_file(single_input(c));
  if (c.input_format == "results") return parse_results(text);
  if (c.input_format == "matrix") return parse_matrix(text);
  if (c.input_format == "auto") return parse_comparisons(text);
  throw InvalidInput("--input-format must be auto, results or matrix");
}

inline std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_shortest(v[i]);
  return out;
}

/// Key/value header lines then a blank line, shared by every TSV report.
class Tsv {
 public:
  void kv(const std::string& key, const std::string& value) {
    text_ += key + "\t" + value + "\n";
  }
  void blank() { text_ += "\n"; }
  void row(const std::vector<std::string>& cells) { text_ += join(cells, "\t") + "\n"; }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

inline std::string run_fit(const RunConfig& cfg) {
  const ComparisonMatrix c = load_matrix(cfg);
  const Method m = parse_method(cfg.method);
  const Normalization norm = Normalization::parse(cfg.normalize);

  RatingVector ratings;
  Json diagnostics;
  diagnostics["tol"] = cfg.tol;
  diagnostics["max_iter"] = cfg.max_iter;
  std::vector<std::pair<std::string, std::string>> tsv_diag;
  std::vector<double> residuals;

  auto not_converged = [&](int iterations) {
    throw ConvergenceFailure(std::string(method_name(m)) + " did not converge within " +
                             std::to_string(iterations) + " iterations");
  };

  if (m == Method::bt) {
    FitReport f = fit_bt(c, FitOptions{cfg.tol, cfg.max_iter, norm, {}});
    if (!f.converged) not_converged(f.iterations);
    ratings = f.ratings;
    residuals = f.residuals;
    diagnostics["converged"] = f.converged;
    diagnostics["iterations"] = f.iterations;
    diagnostics["log_likelihood"] = f.log_likelihood;
    diagnostics["entropy"] = f.entropy;
    diagnostics["max_abs_residual"] = f.max_abs_residual();
    diagnostics["residuals"] = f.residuals;
    tsv_diag = {{"converged", yes_no(f.converged)},
                {"iterations", std::to_string(f.iterations)},
                {"log_likelihood", format_fixed6(f.log_likelihood)},
                {"entropy", format_fixed6(f.entropy)},
                {"max_abs_residual", format_fixed6(f.max_abs_residual())}};
  } else if (m == Method::rpi) {
    const std::vector<double> raw = rpi_classic(c);
    ratings = make_ratings(c.items(), raw, norm);
    diagnostics["raw_rpi"] = raw;
    tsv_diag = {{"raw_rpi", [&] {
                   std::vector<std::string> s;
                   for (double v : raw) s.push_back(format_fixed6(v));
                   return join(s, ",");
                 }()}};
  } else {
    SpectralOptions so;
    so.tol = cfg.tol;
    so.max_iter = cfg.max_iter;
    so.normalization = norm;
    so.history = 0;
    SpectralReport r;
    switch (m) {
      case Method::pagerank: r = pagerank_undamped(c, so); break;
      case Method::scroogefactor: r = scroogefactor(c, so); break;
      case Method::fair_bets: r = fair_bets(c, so); break;
      case Method::cesaro: r = cesaro_rating(c, so); break;
      case Method::wei_kendall: r = wei_kendall(c, so); break;
      default: break;
    }
    if (!r.converged) not_converged(r.iterations);
    ratings = r.ratings;
    diagnostics["converged"] = r.converged;
    diagnostics["iterations"] = r.iterations;
    diagnostics["dominant_eigenvalue"] = r.dominant_eigenvalue;
    diagnostics["residual"] = r.residual;
    if (!r.limit.empty()) diagnostics["limit"] = r.limit;
    tsv_diag = {{"converged", yes_no(r.converged)},
                {"iterations", std::to_string(r.iterations)},
                {"dominant_eigenvalue", format_fixed6(r.dominant_eigenvalue)},
                {"residual", format_shortest(r.residual)}};
    if (!r.limit.empty()) {
      std::vector<std::string> s;
      for (double v : r.limit) s.push_back(format_fixed6(v));
      tsv_diag.emplace_back("limit", join(s, ","));
    }
  }
  const auto ranks = rank_labels(ratings.values, 10.0 * cfg.tol);

  if (cfg.format == "json") {
    Json j;
    j["command"] = "fit";
    j["method"] = std::string(method_name(m));
    j["items"] = ratings.items;
    j["ratings"] = ratings.values;
    j["ranks"] = ranks;
    j["normalization"] = ratings.normalization.to_string();
    j["diagnostics"] = diagnostics;
    return j.dump(2) + "\n";
  }
  Tsv t;
  t.kv("command", "fit");
  t.kv("method", std::string(method_name(m)));
  t.kv("normalization", ratings.normalization.to_string());
  t.kv("tol", format_shortest(cfg.tol));
  t.kv("max_iter", std::to_string(cfg.max_iter));
  for (const auto& [k, v] : tsv_diag) t.kv(k, v);
  t.blank();
  if (!residuals.empty()) {
    t.row({"item", "rating", "rank", "residual"});
  } else {
    t.row({"item", "rating", "rank"});
  }
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    std::vector<std::string> cells{ratings.items[i], format_fixed6(ratings.values[i]), ranks[i]};
    if (!residuals.empty()) cells.push_back(format_fixed6(residuals[i]));
    t.row(cells);
  }
  return t.str();
}

inline std::string run_compare(const RunConfig& cfg) {
  const ComparisonMatrix c = load_matrix(cfg);
  std::vector<Method> methods;
  for (const auto& name : cfg.methods) methods.push_back(parse_method(name));
  if (methods.empty()) throw InvalidInput("--methods is empty");
  const CompareOptions options{cfg.tol, cfg.max_iter, Normalization::parse(cfg.normalize)};
  const auto rows = compare_estimators(c, methods, options);
  for (const auto& row : rows) {
    if (!row.converged) {
      throw ConvergenceFailure(std::string(method_name(row.method)) +
                               ": did not converge within " + std::to_string(row.iterations) +
                               " iterations");
    }
  }
  const std::string norm = rows.front().ratings.normalization.to_string();

  if (cfg.format == "json") {
    Json j;
    j["command"] = "compare";
    j["items"] = c.items();
    j["normalization"] = norm;
    Json list = Json::array();
    for (const auto& row : rows) {
      Json r;
      r["method"] = std::string(method_name(row.method));
      r["ratings"] = row.ratings.values;
      r["ranks"] = row.ranks;
      r["iterations"] = row.iterations;
      list.push_back(r);
    }
    j["methods"] = list;
    j["diagnostics"] = {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}};
    return j.dump(2) + "\n";
  }
  Tsv t;
  t.kv("command", "compare");
  t.kv("normalization", norm);
  t.kv("tol", format_shortest(cfg.tol));
  t.kv("max_iter", std::to_string(cfg.max_iter));
  t.blank();
  std::vector<std::string> head{"method"};
  head.insert(head.end(), c.items().begin(), c.items().end());
  t.row(head);
  for (const auto& row : rows) {
    std::vector<std::string> cells{std::string(method_name(row.method))};
    for (std::size_t i = 0; i < c.size(); ++i) {
      cells.push_back(format_fixed6(row.ratings.values[i]) + "(" + row.ranks[i] + ")");
    }
    t.row(cells);
  }
  return t.str();
}

inline std::string run_check(const RunConfig& cfg) {
  const ComparisonMatrix c = load_matrix(cfg);
  const bool irreducible = is_irreducible(c);
  std::optional<QuasiSymmetryCheck> qs;
  if (irreducible) qs = quasi_symmetry_decompose(c, cfg.tol);
  const WinsVector w = wins(c);
  const std::vector<double> l = losses(c);

  if (cfg.format == "json") {
    Json j;
    j["command"] = "check";
    j["items"] = c.items();
    j["wins"] = w.values;
    j["losses"] = l;
    j["irreducible"] = irreducible;
    if (qs) {
      j["quasi_symmetric"] = qs->quasi_symmetric();
      j["max_residual"] = qs->max_residual;
      if (qs->decomposition) j["a"] = qs->decomposition->a;
    } else {
      j["quasi_symmetric"] = nullptr;
    }
    j["diagnostics"] = {{"tol", cfg.tol}};
    return j.dump(2) + "\n";
  }
  Tsv t;
  t.kv("command", "check");
  t.kv("tol", format_shortest(cfg.tol));
  t.kv("irreducible", yes_no(irreducible));
  t.kv("quasi_symmetric", qs ? yes_no(qs->quasi_symmetric()) : "n/a");
  if (qs) t.kv("max_residual", format_shortest(qs->max_residual));
  t.blank();
  const bool with_a = qs && qs->decomposition;
  std::vector<std::string> head{"item", "wins", "losses"};
  if (with_a) head.push_back("a");
  t.row(head);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> cells{c.items()[i], format_fixed6(w[i]), format_fixed6(l[i])};
    if (with_a) cells.push_back(format_fixed6(qs->decomposition->a[i]));
    t.row(cells);
  }
  return t.str();
}

inline std::array<double, 2> two(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw InvalidInput(std::string(flag) + " needs exactly two values");
  return {v[0], v[1]};
}

inline std::string run_simulate(const RunConfig& cfg) {
  const std::string& s = cfg.scenario;
  Json params;
  std::vector<std::pair<std::string, std::string>> tsv_params;
  auto param = [&](const std::string& key, Json value, std::string text) {
    params[key] = std::move(value);
    tsv_params.emplace_back(key, std::move(text));
  };

  SimResult result;
  std::vector<double> theoretical;
  if (s == "barker") {
    BarkerTournament g = BarkerTournament::uniform(cfg.strengths, cfg.n);
    param("strengths", cfg.strengths, join_numbers(cfg.strengths));
    param("proposal", "uniform", "uniform");
    result = run_barker(g, cfg.seed);
    theoretical = stationary_occupancy(g);
  } else if (s == "discriminal") {
    DiscriminalSpec spec{parse_family(cfg.family), cfg.shape, cfg.params};
    validate(spec);
    if (spec.params.size() != 2) throw InvalidInput("--params needs exactly two values");
    param("family", cfg.family, cfg.family);
    if (spec.family != DiscriminalFamily::exponential) {
      param("shape", cfg.shape, format_shortest(cfg.shape));
    }
    param("params", cfg.params, join_numbers(cfg.params));
    result = run_discriminal_trials(spec, 0, 1, cfg.n, cfg.seed, cfg.shards);
    const double p = theoretical_win_probability(spec, 0, 1);
    theoretical = {p, 1.0 - p};
  } else {
    GameSpec spec;
    if (s == "poisson") {
      spec = PoissonRace{two(cfg.rates, "--rates")};
      param("rates", cfg.rates, join_numbers(cfg.rates));
    } else if (s == "sudden-death") {
      spec = SuddenDeath{two(cfg.p, "--p"), cfg.r};
      param("p", cfg.p, join_numbers(cfg.p));
      param("r", cfg.r, std::to_string(cfg.r));
    } else if (s == "accumulated") {
      spec = AccumulatedWinRatio{two(cfg.strengths, "--strengths"), cfg.matches};
      param("strengths", cfg.strengths, join_numbers(cfg.strengths));
      param("matches", cfg.matches, std::to_string(cfg.matches));
    } else if (s == "two-state") {
      spec = TwoStateChain{two(cfg.rates, "--rates"), cfg.horizon};
      param("rates", cfg.rates, join_numbers(cfg.rates));
      param("horizon", cfg.horizon, format_shortest(cfg.horizon));
    } else {
      throw InvalidInput("unknown scenario '" + s +
                         "' (poisson, sudden-death, accumulated, two-state, barker, "
                         "discriminal)");
    }
    validate(spec);
    result = run_trials(spec, cfg.n, cfg.seed, cfg.shards);
    const double p = theoretical_win_probability(spec, 0, 1);
    theoretical = {p, 1.0 - p};
  }

  const auto empirical = result.empirical_frequencies();
  Json diag;
  std::vector<std::pair<std::string, std::string>> tsv_diag;
  if (s == "barker") {
    double worst = 0.0;
    for (std::size_t k = 0; k < empirical.size(); ++k) {
      worst = std::max(worst, std::abs(empirical[k] - theoretical[k]));
    }
    diag["max_abs_deviation"] = worst;
    tsv_diag.emplace_back("max_abs_deviation", format_fixed6(worst));
  } else {
    const double p = theoretical[0];
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(result.n_trials));
    const double z = (empirical[0] - p) / se;
    diag["std_error"] = se;
    diag["z_score"] = z;
    diag["within_4sigma"] = std::abs(z) <= 4.0;
    tsv_diag = {{"std_error", format_fixed6(se)},
                {"z_score", format_fixed6(z)},
                {"within_4sigma", yes_no(std::abs(z) <= 4.0)}};
  }

  if (cfg.format == "json") {
    Json j;
    j["command"] = "simulate";
    j["scenario"] = s;
    j["parameters"] = params;
    j["seed"] = result.seed;
    j["n"] = result.n_trials;
    j["shards"] = result.shards;
    j["counts"] = result.counts;
    j["empirical"] = empirical;
    j["theoretical"] = theoretical;
    j["diagnostics"] = diag;
    return j.dump(2) + "\n";
  }
  Tsv t;
  t.kv("command", "simulate");
  t.kv("scenario", s);
  for (const auto& [k, v] : tsv_params) t.kv(k, v);
  t.kv("n", std::to_string(result.n_trials));
  t.kv("seed", std::to_string(result.seed));
  t.kv("shards", std::to_string(result.shards));
  for (const auto& [k, v] : tsv_diag) t.kv(k, v);
  t.blank();
  t.row({"outcome", "count", "empirical", "theoretical"});
  for (std::size_t k = 0; k < result.counts.size(); ++k) {
    t.row({std::to_string(k), std::to_string(result.counts[k]), format_fixed6(empirical[k]),
           format_fixed6(theoretical[k])});
  }
  return t.str();
}

inline std::string run_race(const RunConfig& cfg) {
  const RaceData data = parse_races(read_file(single_input(cfg)));
  const std::size_t n = data.items.size();
  std::vector<ResultVector> results;
  for (const auto& race : data.races) results.push_back(rank_to_sphere(race, n));
  const std::vector<double> rating = geometric_rating(results);
  const auto ranks = rank_labels(rating, 1e-12);

  if (cfg.format == "json") {
    Json j;
    j["command"] = "race";
    j["items"] = data.items;
    j["ratings"] = rating;
    j["ranks"] = ranks;
    j["normalization"] = "unit-norm";
    j["diagnostics"] = {{"races", data.races.size()}};
    return j.dump(2) + "\n";
  }
  Tsv t;
  t.kv("command", "race");
  t.kv("normalization", "unit-norm");
  t.kv("races", std::to_string(data.races.size()));
  t.blank();
  t.row({"item", "rating", "rank"});
  for (std::size_t i = 0; i < n; ++i) {
    t.row({data.items[i], format_fixed6(rating[i]), ranks[i]});
  }
  return t.str();
}

inline std::string render(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "fit") return run_fit(cfg);
  if (cfg.command == "compare") return run_compare(cfg);
  if (cfg.command == "check") return run_check(cfg);
  if (cfg.command == "simulate") return run_simulate(cfg);
  if (cfg.command == "race") return run_race(cfg);
  throw InvalidInput("unknown command '" + cfg.command + "'");
}

}  // namespace detail

/// Executes one command. The report is produced in full before anything is
/// written, so a failing run emits only a diagnostic on `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string report;
  try {
    report = detail::render(config);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionViolation& e) {
    err << "error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  }
  if (config.out.empty()) {
    out << report;
    out.flush();
    return kOk;
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write '" << config.out << "'\n";
    return kInputError;
  }
  file << report;
  return kOk;
}

}  // namespace btrate::cli

#endif  // BTRATE_CLI_HPP_
