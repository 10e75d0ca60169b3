#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyplevy/cli.hpp"

namespace cli = hyplevy::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hypergeometric Levy processes: regimes, exponent, Wiener-Hopf factors, densities"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunConfig config;
  config.truncation_K = cli::default_terms();
  std::string format = "json";
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<int> grid_points;
  std::string out_path;

  app.add_option("--beta", config.params.beta, "beta")->required();
  app.add_option("--gamma", config.params.gamma, "gamma, in (0,1)")->required();
  app.add_option("--beta-hat", config.params.beta_hat, "beta_hat")->required();
  app.add_option("--gamma-hat", config.params.gamma_hat, "gamma_hat, in (0,1)")->required();
  app.add_option("--grid-min", grid_min, "grid lower end");
  app.add_option("--grid-max", grid_max, "grid upper end");
  app.add_option("--grid-points", grid_points, "number of grid points (>= 2)");
  app.add_option("--terms", config.truncation_K, "series truncation K (default 200 or HYPLEVY_TERMS)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write the document here instead of stdout");

  const std::map<std::string, cli::Subcommand> subcommands = {
      {"validate", cli::Subcommand::Validate}, {"exponent", cli::Subcommand::Exponent},
      {"lattice", cli::Subcommand::Lattice},   {"factors", cli::Subcommand::Factors},
      {"density", cli::Subcommand::Density},   {"ladder", cli::Subcommand::Ladder},
      {"check", cli::Subcommand::Check},
  };
  const std::map<std::string, std::string> descriptions = {
      {"validate", "regime, n, eta, killing rate, variation"},
      {"exponent", "psi(i theta) over a grid"},
      {"lattice", "tagged roots and poles, interlacing verdict"},
      {"factors", "Wiener-Hopf factors, value table, Bernstein certificates"},
      {"density", "closed-form and series Levy density"},
      {"ladder", "A4 ladder height density and potential"},
      {"check", "full identity suite"},
  };
  for (const auto& [name, sub] : subcommands) app.add_subcommand(name, descriptions.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  for (const auto* sub : app.get_subcommands()) config.subcommand = subcommands.at(sub->get_name());
  config.output_format = format == "csv" ? cli::Format::Csv : cli::Format::Json;
  if (grid_min || grid_max || grid_points) {
    if (!(grid_min && grid_max && grid_points)) {
      std::cerr << "usage: --grid-min, --grid-max and --grid-points go together\n";
      return cli::kExitUsage;
    }
    config.grid = cli::Grid{*grid_min, *grid_max, *grid_points};
  }

  if (out_path.empty()) return cli::run(config, std::cout, std::cerr);
  config.output_path = out_path;
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << out_path << "\n";
    return cli::kExitUsage;
  }
  return cli::run(config, file, std::cerr);
}
