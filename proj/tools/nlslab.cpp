// Command-line front end: one experiment per invocation.
//
//   nlslab <verb> --config PATH [--out DIR] [--seed U64] [--threads N]
//
// Exit codes: 0 ok, 1 crash, 2 config or input error (nothing written),
// 3 solver blow-up (report written with status "blow_up").

#include <iostream>

#include "CLI11.hpp"
#include "nlslab/harness/config.hpp"
#include "nlslab/harness/experiments.hpp"

namespace h = nlslab::harness;

int main(int argc, char** argv) {
  CLI::App app{"nlslab: cubic NLS on the circle, experiments and reports"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  for (auto e : h::all_experiments()) {
    auto* sub = app.add_subcommand(h::to_string(e), "run the " + h::to_string(e) + " experiment");
    sub->add_option("--config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "random seed (overrides data.seed)");
    sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitConfig;
  }

  try {
    const auto verb = h::parse_experiment(app.get_subcommands().front()->get_name());
    h::ExperimentConfig cfg = h::load_config(config_path);
    if (cfg.experiment && *cfg.experiment != verb) {
      std::cerr << "nlslab: config selects '" << h::to_string(*cfg.experiment) << "' but the verb is '"
                << h::to_string(verb) << "'\n";
      return h::kExitConfig;
    }
    cfg.experiment = verb;
    h::RunContext ctx;
    if (app.get_subcommands().front()->count("--seed")) ctx.seed = seed;
    ctx.threads = threads;
    const int code = h::run(cfg, out_dir.empty() ? cfg.output.directory : out_dir, ctx);
    if (code == h::kExitOk) std::cerr << "nlslab: wrote report to " << (out_dir.empty() ? cfg.output.directory : out_dir) << "\n";
    return code;
  } catch (const h::ConfigError& e) {
    std::cerr << "nlslab: " << e.what() << "\n";
    return h::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "nlslab: internal error: " << e.what() << "\n";
    return h::kExitCrash;
  }
}
