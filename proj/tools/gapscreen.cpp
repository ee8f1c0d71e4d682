#include <CLI11.hpp>

#include <iostream>

#include "gapscreen/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gapscreen: duality-gap screening toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  gapscreen::cli_overrides ov;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "path to the JSON run config")
        ->required();
    cmd->add_option("--seed", seed_value, "override data and solver seed");
    cmd->add_flag("--no-screening", ov.no_screening,
                  "disable screening for this run");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "run the configured solve and write the trace");
  add_common(solve);
  CLI::App* compare = app.add_subcommand(
      "compare", "compare L1-ball and barycentric-simplex screening");
  add_common(compare);
  CLI::App* verify = app.add_subcommand(
      "verify", "replay screening decisions against a reference solution");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  for (auto* cmd : {solve, compare, verify})
    if (cmd->parsed() && cmd->count("--seed") > 0) ov.seed = seed_value;

  try {
    if (solve->parsed())
      return gapscreen::cmd_solve(config_path, ov, std::cout, std::cerr);
    if (compare->parsed())
      return gapscreen::cmd_compare(config_path, ov, std::cout, std::cerr);
    if (verify->parsed())
      return gapscreen::cmd_verify(config_path, ov, std::cout, std::cerr);
  } catch (const gapscreen::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
