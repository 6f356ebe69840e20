#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sloane_gap/commands.hpp"

int main(int argc, char** argv) {
  using namespace sloane_gap;

  RunConfig config;
  std::string input, output_dir = config.output_dir.string();
  double envelope_h = 0.0;

  CLI::App app{"Occurrence statistics, gap partition and synthetic comparison for OEIS snapshots", "sloane_gap"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--input", input, "OEIS stripped file, or counts.json written by 'ingest'");
  app.add_option("--n-max", config.n_max, "upper end of the counting range")->capture_default_str();
  app.add_option("--percentile", config.gap.percentile, "gap boundary percentile")->capture_default_str();
  app.add_option("--c-small", config.gap.c_small, "window half-width for n <= 1000")->capture_default_str();
  app.add_option("--c-large", config.gap.c_large, "window half-width for n > 1000")->capture_default_str();
  app.add_option("--window", config.classes.window, "omega window half-width")->capture_default_str();
  app.add_option("--omega-pct", config.classes.percentile, "omega percentile for many-factors")->capture_default_str();
  app.add_option("--functions", config.functions, "number of random functions")->capture_default_str();
  app.add_option("--terms", config.terms, "terms evaluated per function")->capture_default_str();
  app.add_option("--seed", config.seed, "simulation seed")->capture_default_str();
  auto* h_opt = app.add_option("--envelope-h", envelope_h, "envelope scale h (default: fitted k)");
  app.add_option("--c-prime", config.c_prime, "complexity-bound constant c'")->capture_default_str();
  app.add_option("--output-dir", output_dir, "output directory (SLOANE_GAP_OUTPUT overrides)")->capture_default_str();
  app.add_flag("--strict", config.strict, "fail on the first malformed line");
  app.add_flag("--no-synth", config.no_synth, "skip the synthetic comparison in 'report'");

  const std::pair<const char*, const char*> commands[] = {
      {"ingest", "build N(n) and write counts, absent and interesting numbers"},
      {"fit", "log-log regression and envelope curves"},
      {"gap", "gap boundary and set A"},
      {"classes", "primes/squares/many-factors against set A"},
      {"simulate", "random-function cloud (and comparison when --input is given)"},
      {"report", "all of the above"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  config.input_path = input;
  config.output_dir = output_dir;
  if (h_opt->count() > 0) config.envelope_h = envelope_h;
  apply_environment(config);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    nlohmann::json summary;
    if (command == "ingest") summary = cmd_ingest(config);
    else if (command == "fit") summary = cmd_fit(config);
    else if (command == "gap") summary = cmd_gap(config);
    else if (command == "classes") summary = cmd_classes(config);
    else if (command == "simulate") summary = cmd_simulate(config);
    else summary = cmd_report(config);
    std::cout << summary.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error [" << command << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
