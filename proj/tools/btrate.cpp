#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "btrate/cli.hpp"

namespace {

void add_output(CLI::App* cmd, btrate::cli::RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", cfg.out, "Write the report to this path instead of stdout");
}

void add_input(CLI::App* cmd, btrate::cli::RunConfig& cfg) {
  cmd->add_option("input", cfg.inputs, "Results or matrix CSV")->required()->expected(1);
  cmd->add_option("--input-format", cfg.input_format, "auto, results or matrix")
      ->capture_default_str();
}

void add_solver(CLI::App* cmd, btrate::cli::RunConfig& cfg) {
  cmd->add_option("--tol", cfg.tol, "Convergence tolerance")->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "Iteration budget")->capture_default_str();
  cmd->add_option("--normalize", cfg.normalize,
                  "ref (last item), ref:<label>, sum1 or geomean1")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  btrate::cli::RunConfig cfg;
  CLI::App app{"Pairwise-comparison ratings, diagnostics and game simulators"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto* fit = app.add_subcommand("fit", "Fit one rating method");
  add_input(fit, cfg);
  fit->add_option("--method", cfg.method,
                  "bt, pagerank, scroogefactor, fair-bets, cesaro, wei-kendall or rpi")
      ->capture_default_str();
  add_solver(fit, cfg);
  add_output(fit, cfg);

  auto* compare = app.add_subcommand("compare", "Run several methods side by side");
  add_input(compare, cfg);
  compare->add_option("--methods", cfg.methods, "Comma-separated methods")
      ->delimiter(',')
      ->capture_default_str();
  add_solver(compare, cfg);
  add_output(compare, cfg);

  auto* check = app.add_subcommand("check", "Irreducibility and quasi-symmetry");
  add_input(check, cfg);
  check->add_option("--tol", cfg.tol, "Quasi-symmetry tolerance")->capture_default_str();
  add_output(check, cfg);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of a game scenario");
  simulate
      ->add_option("--scenario", cfg.scenario,
                   "poisson, sudden-death, accumulated, two-state, barker or discriminal")
      ->required();
  simulate->add_option("--n", cfg.n, "Trials (games for barker)")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--shards", cfg.shards, "Independent RNG streams run in parallel")
      ->capture_default_str();
  simulate->add_option("--p", cfg.p, "sudden-death: success probabilities p_i,p_j")
      ->delimiter(',');
  simulate->add_option("--r", cfg.r, "sudden-death: winning margin")->capture_default_str();
  simulate->add_option("--rates", cfg.rates, "poisson, two-state: rates")->delimiter(',');
  simulate->add_option("--strengths", cfg.strengths, "accumulated, barker: strengths")
      ->delimiter(',');
  simulate->add_option("--matches", cfg.matches, "accumulated: matches per trial")
      ->capture_default_str();
  simulate->add_option("--horizon", cfg.horizon, "two-state: time horizon")
      ->capture_default_str();
  simulate->add_option("--family", cfg.family, "discriminal: exponential, gumbel, weibull or frechet")
      ->capture_default_str();
  simulate->add_option("--shape", cfg.shape, "discriminal: shape alpha")->capture_default_str();
  simulate->add_option("--params", cfg.params, "discriminal: parameters of the two items")
      ->delimiter(',');
  add_output(simulate, cfg);

  auto* race = app.add_subcommand("race", "Geometric rating from race results");
  race->add_option("input", cfg.inputs, "race_id,competitor,rank CSV")->required()->expected(1);
  add_output(race, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : btrate::cli::kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return btrate::cli::run(cfg, std::cout, std::cerr);
}
