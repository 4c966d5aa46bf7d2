#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhchaos/error.hpp"
#include "bhchaos/experiments.hpp"
#include "bhchaos/version.hpp"

namespace {

using namespace bhchaos;

struct CliOptions {
  RunConfig config;
  std::string u_list;
  std::string center = "auto";
  std::vector<std::string> blocks;
  std::string eta = "discrete";
  std::string preset;
  bool oracle = false;
  bool no_envelope = false;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const auto item = text.substr(start, end - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + item + "' as a number");
    }
    start = end + 1;
  }
  return values;
}

void add_common(CLI::App& command, CliOptions& options) {
  auto& c = options.config;
  command.add_option("--L", c.params.sites, "Number of sites")->capture_default_str();
  command.add_option("--N", c.params.particles, "Number of bosons")->capture_default_str();
  command.add_option("--u", options.u_list, "Coupling u, or a comma separated list");
  command.add_option("--sigma", c.half_width, "Energy window half-width")->capture_default_str();
  command.add_option("--center", options.center, "Window center, or 'auto'")->capture_default_str();
  command.add_option("--blocks", options.blocks,
                     "Block selection: 'all', 'groups', or labels like '1,9-even' (repeatable)");
  command.add_option("--members", c.members, "Ensemble size (0: one per in-window level)");
  command.add_option("--seed", c.seed, "Ensemble seed")->capture_default_str();
  command.add_option("--threads", c.threads, "Worker threads")->capture_default_str();
  command.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  command.add_option("--cache", c.cache_root, "Spectrum cache root (default $BHCHAOS_CACHE)");
  command.add_option("--preset", options.preset, "fig2 ... fig7");
  command.add_option("--dense-cap", c.dense_cap, "Largest block to diagonalize densely")
      ->capture_default_str();
  command.add_option("--eta", options.eta, "discrete, quadrature or level-count")
      ->capture_default_str();
  command.add_option("--t-start", c.grid.start, "First time point, in units of 1/sigma")
      ->capture_default_str();
  command.add_option("--t-heisenberg", c.grid.heisenberg_multiple,
                     "Last time point, in units of 2 pi mean density")
      ->capture_default_str();
  command.add_option("--bins-per-decade", c.grid.bins_per_decade)->capture_default_str();
  command.add_option("--samples-per-bin", c.grid.samples_per_bin)->capture_default_str();
  command.add_flag("--no-envelope", options.no_envelope, "Skip the member percentile band");
  command.add_option("--unfold-degree", c.unfold_degree)->capture_default_str();
  command.add_option("--keep", c.keep_fraction, "Central fraction kept for unfolding")
      ->capture_default_str();
  command.add_option("--bin-width", c.spacing_bin, "Spacing histogram bin width")
      ->capture_default_str();
  command.add_option("--dos-bins", c.dos_bins)->capture_default_str();
}

RunConfig finalize(CliOptions& options, const std::string& command) {
  auto config = options.config;
  if (!options.preset.empty()) {
    if (preset_command(options.preset) != command) {
      throw ConfigError("preset " + options.preset + " belongs to '" +
                        preset_command(options.preset) + "'");
    }
    apply_preset(config, options.preset);
  }
  if (!options.u_list.empty()) config.u_values = parse_list(options.u_list);
  if (options.center != "auto") {
    const auto values = parse_list(options.center);
    if (values.size() != 1) throw ConfigError("--center takes one value");
    config.center = values.front();
  }
  if (!options.blocks.empty()) {
    config.selections.clear();
    for (const auto& b : options.blocks) config.selections.push_back(BlockSelection::parse(b));
  }
  config.eta = eta_estimator_from(options.eta);
  config.envelope = !options.no_envelope;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard spectral statistics and survival probability"};
  app.set_version_flag("--version", std::string(bhchaos::kVersion));
  app.require_subcommand(1);

  CliOptions options;
  auto* spectrum = app.add_subcommand("spectrum", "Diagonalize all blocks and write the DoS");
  auto* spacing = app.add_subcommand("spacing", "Level spacing histograms and gap ratios");
  auto* survival = app.add_subcommand("survival", "Ensemble survival probability vs analytic curve");
  auto* sweep = app.add_subcommand("window-sweep", "Survival probability over fixed-count windows");
  auto* oracle = app.add_subcommand("oracle", "Compare block spectra to the full-space spectrum");
  for (auto* command : {spectrum, spacing, survival, sweep, oracle}) add_common(*command, options);
  spectrum->add_flag("--oracle", options.oracle, "Also run the full-space comparison");
  sweep->add_option("--levels", options.config.sweep_levels, "Levels per window")
      ->capture_default_str();
  sweep->add_option("--block", options.config.sweep_block, "Block label")->capture_default_str();
  sweep->add_option("--positions", options.config.sweep_positions,
                    "Window centers as spectrum quantiles")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nlohmann::json summary;
    if (spectrum->parsed()) {
      summary = cmd_spectrum(finalize(options, "spectrum"), options.oracle);
    } else if (spacing->parsed()) {
      summary = cmd_spacing(finalize(options, "spacing"));
    } else if (survival->parsed()) {
      summary = cmd_survival(finalize(options, "survival"));
    } else if (sweep->parsed()) {
      summary = cmd_window_sweep(finalize(options, "window-sweep"));
    } else {
      summary = cmd_oracle(finalize(options, "oracle"));
    }
    std::cout << summary.dump(2) << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
