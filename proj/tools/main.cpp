#include <CLI11.hpp>

#include "lpvss/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "LPV state-space models with general noise: simulation, innovation-form "
      "filtering, covariance-restart bound checks, and windowed-gain decay studies"};
  app.require_subcommand(1);

  lpvss::CommandArgs args;
  std::uint64_t seed = 0;
  int horizon = 0, trials = 0;
  double p_min = 0.0;

  const auto add_common = [&](CLI::App* sub, bool needs_model) {
    auto* model = sub->add_option("--model", args.model_path, "model specification JSON");
    if (needs_model) model->required()->check(CLI::ExistingFile);
    sub->add_option("--config", args.config_path, "run configuration JSON")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--horizon", horizon, "horizon length (overrides config)");
    sub->add_option("--trials", trials, "number of Monte Carlo trials");
    sub->add_option("--tau", args.taus, "window length; repeatable");
    sub->add_option("--out", args.out_dir, "output directory (default .)");
    sub->add_option("--p-min", p_min, "scheduling magnitude floor for example1");
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate the general-noise representation");
  add_common(sim, true);
  CLI::App* filter = app.add_subcommand(
      "filter", "innovation-form filter over recorded signals; exports the gain/covariance trace");
  add_common(filter, true);
  filter->add_option("--data", args.data_path, "signals CSV from the simulate subcommand")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::App* bound = app.add_subcommand(
      "boundcheck", "covariance restart experiment against the fading-memory bound");
  add_common(bound, true);
  CLI::App* decay =
      app.add_subcommand("gaindecay", "windowed Kalman gain remainder decay study");
  add_common(decay, true);
  CLI::App* ex1 = app.add_subcommand(
      "example1", "three-realization input-output equivalence demonstration");
  add_common(ex1, false);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) args.seed = seed;
  if (sub->count("--horizon")) args.horizon = horizon;
  if (sub->count("--trials")) args.trials = trials;
  if (sub->count("--p-min")) args.p_min = p_min;

  if (sub == sim) return lpvss::cmd_simulate(args);
  if (sub == filter) return lpvss::cmd_filter(args);
  if (sub == bound) return lpvss::cmd_boundcheck(args);
  if (sub == decay) return lpvss::cmd_gaindecay(args);
  if (sub == ex1) return lpvss::cmd_example1(args);
  return lpvss::kExitInternal;
}
