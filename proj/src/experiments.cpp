#include "bhchaos/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "bhchaos/spectrum_cache.hpp"
#include "bhchaos/version.hpp"

namespace bhchaos {

using nlohmann::json;

std::string to_string(EtaEstimator estimator) {
  switch (estimator) {
    case EtaEstimator::quadrature:
      return "quadrature";
    case EtaEstimator::level_count:
      return "level-count";
    default:
      return "discrete";
  }
}

EtaEstimator eta_estimator_from(const std::string& text) {
  if (text == "discrete") return EtaEstimator::discrete;
  if (text == "quadrature") return EtaEstimator::quadrature;
  if (text == "level-count") return EtaEstimator::level_count;
  throw ConfigError("unknown eta estimator '" + text + "'");
}

std::vector<double> RunConfig::couplings() const {
  return u_values.empty() ? std::vector<double>{params.u} : u_values;
}

void RunConfig::validate() const {
  for (const double u : couplings()) {
    ModelParams p = params;
    p.u = u;
    p.validate();
  }
  if (!(half_width > 0.0)) throw ConfigError("--sigma must be positive");
  if (center && !std::isfinite(*center)) throw ConfigError("--center must be finite");
  if (selections.empty()) throw ConfigError("no block selection given");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ConfigError("keep fraction must lie in (0, 1]");
  if (unfold_degree < 1) throw ConfigError("unfolding degree must be positive");
  if (!(spacing_bin > 0.0)) throw ConfigError("spacing bin width must be positive");
  if (dos_bins < 2) throw ConfigError("DoS needs at least 2 bins");
  if (!(grid.start > 0.0 && grid.heisenberg_multiple > 0.0 && grid.bins_per_decade > 0.0) ||
      grid.samples_per_bin == 0) {
    throw ConfigError("invalid time grid");
  }
  if (sweep_levels < 2) throw ConfigError("sweep windows need at least 2 levels");
  for (const double p : sweep_positions) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sweep positions must lie in [0, 1]");
  }
}

json RunConfig::to_json() const {
  json selection_list = json::array();
  for (const auto& s : selections) selection_list.push_back(s.to_string());
  return {{"version", kVersion},
          {"preset", preset},
          {"L", params.sites},
          {"N", params.particles},
          {"u", couplings()},
          {"center", center ? json(*center) : json("auto")},
          {"sigma", half_width},
          {"blocks", selection_list},
          {"members", members},
          {"seed", seed},
          {"time_grid",
           {{"start_over_sigma", grid.start},
            {"heisenberg_multiple", grid.heisenberg_multiple},
            {"bins_per_decade", grid.bins_per_decade},
            {"samples_per_bin", grid.samples_per_bin}}},
          {"eta", to_string(eta)},
          {"envelope", envelope},
          {"threads", threads},
          {"dense_cap", dense_cap},
          {"unfold_degree", unfold_degree},
          {"keep_fraction", keep_fraction},
          {"spacing_bin", spacing_bin},
          {"dos_bins", dos_bins},
          {"sweep", {{"levels", sweep_levels}, {"positions", sweep_positions}, {"block", sweep_block}}},
          {"out", out_dir.string()},
          {"cache", resolved_cache_root().string()}};
}

std::filesystem::path RunConfig::resolved_cache_root() const {
  if (!cache_root.empty()) return cache_root;
  if (const char* env = std::getenv("BHCHAOS_CACHE"); env && *env) return env;
  return "bhchaos-cache";
}

std::string preset_command(const std::string& name) {
  if (name == "fig2" || name == "fig3") return "spacing";
  if (name == "fig4" || name == "fig6" || name == "fig7") return "survival";
  if (name == "fig5") return "window-sweep";
  throw ConfigError("unknown preset '" + name + "' (expected fig2 ... fig7)");
}

void apply_preset(RunConfig& config, const std::string& name) {
  (void)preset_command(name);
  config.preset = name;
  const auto top = std::to_string(config.params.sites);
  if (name == "fig2") {
    config.u_values = {0.5};
    config.selections = {BlockSelection::parse("1")};
  } else if (name == "fig3") {
    config.u_values = {0.5};
    config.selections = {BlockSelection::parse("groups"), BlockSelection::parse("all")};
  } else if (name == "fig4") {
    config.u_values = {0.5};
    config.selections = {BlockSelection::parse("1"), BlockSelection::parse(top + "-even")};
  } else if (name == "fig5") {
    config.u_values = {0.5};
    config.sweep_block = "1";
    config.sweep_levels = 600;
  } else if (name == "fig6") {
    config.u_values = {0.3, 0.2, 0.15, 0.1};
    config.selections = {BlockSelection::parse("1")};
  } else if (name == "fig7") {
    config.u_values = {0.5, 0.3, 0.1};
    config.selections = {BlockSelection::parse("all")};
    config.members = 0;
  }
}

SpectraResult obtain_spectra(const ModelParams& params, const RunConfig& config) {
  const auto directory = cache_directory(config.resolved_cache_root(), params);
  if (auto cached = try_load_cached(directory, params)) return {std::move(*cached), true};
  SpectraResult result{compute_spectra(params, config.threads, config.dense_cap), false};
  save_spectra(result.set, directory);
  return result;
}

EnergyWindow resolve_window(const SpectrumSet& set, const RunConfig& config) {
  EnergyWindow window{0.0, config.half_width};
  if (config.center) {
    window.center = *config.center;
  } else {
    window.center = density_of_states(set.all_levels(), config.dos_bins).mean;
  }
  window.validate();
  return window;
}

// Spacing ----------------------------------------------------------------------------

SpacingReport block_spacing(const SpectrumSet& set, std::size_t block, const RunConfig& config) {
  const auto& levels = set.blocks.at(block).eigenvalues;
  SpacingReport report;
  report.label = set.blocks[block].block.label();
  const auto unfolded = unfold(levels, config.unfold_degree, config.keep_fraction);
  report.levels = unfolded.levels.size();
  // raw levels over the same central range
  const auto drop = (levels.size() - unfolded.levels.size()) / 2;
  report.raw_gap_ratio = mean_gap_ratio(
      std::span<const double>(levels).subspan(drop, unfolded.levels.size()));
  report.histogram = spacing_statistics(unfolded.levels, SpacingMode::spacing, config.spacing_bin);
  report.zero_spacing_peak = report.histogram.density[0] >= 3.0 * report.histogram.poisson_ref[0];
  return report;
}

SpacingReport pooled_spacing(const SpectrumSet& set, std::span<const std::size_t> blocks,
                             const EnergyWindow& window, const RunConfig& config) {
  std::vector<double> inside;
  std::string label;
  for (const auto b : blocks) {
    label += (label.empty() ? "" : "+") + set.blocks.at(b).block.label();
    for (const double e : set.blocks[b].eigenvalues) {
      if (window.contains(e)) inside.push_back(e);
    }
  }
  std::sort(inside.begin(), inside.end());
  SpacingReport report;
  report.label = label;
  report.levels = inside.size();
  report.raw_gap_ratio = mean_gap_ratio(inside);
  const auto unfolded = unfold(inside, config.unfold_degree, 1.0);
  report.histogram = spacing_statistics(unfolded.levels, SpacingMode::spacing, config.spacing_bin);
  report.zero_spacing_peak = report.histogram.density[0] >= 3.0 * report.histogram.poisson_ref[0];
  return report;
}

// Survival ---------------------------------------------------------------------------

json SurvivalReport::parameters() const {
  json sequence_list = json::array();
  for (const auto& s : sequences.sequences) {
    sequence_list.push_back({{"degeneracy", s.degeneracy},
                             {"mean_density", s.mean_density},
                             {"levels", s.levels}});
  }
  return {{"label", label},
          {"u", u},
          {"center", window.center},
          {"sigma", window.half_width},
          {"slots", slots},
          {"members", members},
          {"eta", eta},
          {"eta_discrete", eta_discrete},
          {"eta_quadrature", eta_quadrature},
          {"eta_level_count", eta_level_count},
          {"mean_density", mean_density},
          {"hole_density", hole_density},
          {"sp_inf_analytic", asymptotic},
          {"sp_inf_numeric", numeric_asymptotic},
          {"sequences", sequence_list},
          {"hole_range", {hole_lo, hole_hi}},
          {"hole_deviation", hole_deviation},
          {"revival", revival},
          {"long_time_ratio", long_time_ratio},
          {"initial_decay_error", initial_decay_error}};
}

SurvivalReport run_survival(const SpectrumSet& set, std::span<const std::size_t> blocks,
                            const EnergyWindow& window, const RunConfig& config,
                            const std::string& label) {
  SurvivalReport report;
  report.label = label;
  report.u = set.params.u;
  report.window = window;

  auto table = select_levels(set, blocks, window);
  const auto dos = density_of_states(pool_levels(set, blocks), config.dos_bins);
  const double width = 2.0 * window.half_width;
  report.slots = table.slot_count();
  report.mean_density = static_cast<double>(report.slots) / width;
  report.sequences.total_density = report.mean_density;
  double dominant = -1.0;
  for (const auto& s : table.sequences) {
    const double density = static_cast<double>(s.levels) / width;
    report.sequences.sequences.push_back({s.degeneracy, density, s.levels});
    const double weight = static_cast<double>(s.degeneracy) * s.degeneracy * density;
    if (weight > dominant) {
      dominant = weight;
      report.hole_density = density;
    }
  }

  const RandomStateEnsemble ensemble(std::move(table), config.members, dos, config.seed);
  report.members = ensemble.members();
  report.eta_discrete = effective_dimension_discrete(ensemble.shaping());
  report.eta_quadrature = effective_dimension(window, dos);
  report.eta_level_count = effective_dimension_flat(window, report.mean_density);
  switch (config.eta) {
    case EtaEstimator::quadrature:
      report.eta = report.eta_quadrature;
      break;
    case EtaEstimator::level_count:
      report.eta = report.eta_level_count;
      break;
    default:
      report.eta = report.eta_discrete;
  }
  report.asymptotic = asymptotic_analytic(report.sequences, MomentRatio::uniform(), report.eta);

  const auto times = default_time_grid(window.half_width, report.mean_density, config.grid);
  report.numeric = run_ensemble(ensemble, times, config.envelope);
  report.numeric_asymptotic = report.numeric.mean_asymptotic;
  report.analytic = survival_analytic(report.sequences, window.half_width, report.eta,
                                      MomentRatio::uniform(), times);
  report.numeric_binned = log_bin(report.numeric.mean, config.grid.bins_per_decade);
  report.analytic_binned = log_bin(report.analytic, config.grid.bins_per_decade);

  const double hole_time = 2.0 * std::numbers::pi * report.hole_density;
  report.hole_lo = 0.05 * hole_time;
  report.hole_hi = 5.0 * hole_time;
  report.hole_deviation = hole_deviation(report.numeric.mean, report.analytic, report.hole_lo,
                                         report.hole_hi, config.grid.bins_per_decade);
  report.revival = has_revival(report.numeric.mean, report.analytic, report.hole_lo,
                               report.hole_hi, 1.5, config.grid.bins_per_decade);

  const double heisenberg = 2.0 * std::numbers::pi * report.mean_density;
  try {
    report.long_time_ratio =
        time_average(report.numeric.mean, 10.0 * heisenberg, 100.0 * heisenberg) / report.asymptotic;
  } catch (const ConfigError&) {
    report.long_time_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  for (std::size_t k = 0; k < times.size() && times[k] <= 0.5 / window.half_width; ++k) {
    const double reference = sinc_decay(times[k], window.half_width);
    report.initial_decay_error = std::max(
        report.initial_decay_error, std::abs(report.numeric.mean.values[k] - reference) / reference);
  }
  return report;
}

EnergyWindow level_window(std::span<const double> sorted, std::size_t count, double position) {
  const auto n = sorted.size();
  if (count < 2 || count > n) throw ConfigError("window level count must lie in [2, spectrum size]");
  if (!(position >= 0.0 && position <= 1.0)) throw ConfigError("window position must lie in [0, 1]");
  const double center_index = position * static_cast<double>(n - 1);
  const double start = std::round(center_index - 0.5 * static_cast<double>(count - 1));
  const auto first = static_cast<std::size_t>(
      std::clamp(start, 0.0, static_cast<double>(n - count)));
  const auto last = first + count - 1;
  const double lo = first > 0 ? 0.5 * (sorted[first - 1] + sorted[first])
                              : sorted[first] - 0.5 * (sorted[first + 1] - sorted[first]);
  const double hi = last + 1 < n ? 0.5 * (sorted[last] + sorted[last + 1])
                                 : sorted[last] + 0.5 * (sorted[last] - sorted[last - 1]);
  if (!(hi > lo)) throw NumericalError("level window has zero width");
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

SweepReport run_window_sweep(const SpectrumSet& set, const RunConfig& config) {
  const auto block = set.find(config.sweep_block);
  const auto& levels = set.blocks[block].eigenvalues;
  if (config.sweep_levels > levels.size()) {
    throw ConfigError("sweep window exceeds the spectrum of block " + config.sweep_block);
  }
  SweepReport report;
  const std::size_t selected[] = {block};
  for (std::size_t w = 0; w < config.sweep_positions.size(); ++w) {
    const auto window = level_window(levels, config.sweep_levels, config.sweep_positions[w]);
    report.windows.push_back(
        run_survival(set, selected, window, config, config.sweep_block + "_w" + std::to_string(w)));
  }
  return report;
}

// Oracle -------------------------------------------------------------------------------

OracleReport run_oracle(const ModelParams& params, const RunConfig& config) {
  const BasisIndex basis(params.sites, params.particles);
  const auto full = build_full_sparse(params, basis, config.dense_cap);
  auto reference = diagonalize(Eigen::MatrixXd(full), "full space");
  const auto set = compute_spectra(params, config.threads, config.dense_cap);
  const auto blocks = set.all_levels();
  OracleReport report;
  report.dimension = basis.size();
  report.blocks = set.blocks.size();
  if (blocks.size() != reference.size()) {
    throw NumericalError("block spectra hold " + std::to_string(blocks.size()) +
                         " levels, full space " + std::to_string(reference.size()));
  }
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    report.max_abs_difference = std::max(report.max_abs_difference, std::abs(blocks[k] - reference[k]));
  }
  return report;
}

// Output -----------------------------------------------------------------------------------

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string u_tag(double u) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "u%.12g", u);
  return buffer;
}

std::string file_tag(std::string text) {
  std::replace(text.begin(), text.end(), ',', '+');
  return text;
}

}  // namespace

void write_curves_csv(const std::filesystem::path& path, const SurvivalCurve& numeric,
                      const SurvivalCurve& analytic, std::span<const double> lo,
                      std::span<const double> hi) {
  if (numeric.times.size() != analytic.times.size()) {
    throw ConfigError("numeric and analytic curves differ in length");
  }
  auto out = open_output(path);
  out << "t,sp_mean,sp_analytic,sp_member_lo,sp_member_hi\n";
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    out << format_number(numeric.times[k]) << ',' << format_number(numeric.values[k]) << ','
        << format_number(analytic.values[k]) << ',';
    if (k < lo.size()) out << format_number(lo[k]);
    out << ',';
    if (k < hi.size()) out << format_number(hi[k]);
    out << '\n';
  }
}

void write_histogram_csv(const std::filesystem::path& path, const SpacingHistogram& histogram) {
  auto out = open_output(path);
  out << "bin_lo,bin_hi,density,wigner_ref,poisson_ref\n";
  for (std::size_t b = 0; b < histogram.density.size(); ++b) {
    out << format_number(histogram.edges[b]) << ',' << format_number(histogram.edges[b + 1]) << ','
        << format_number(histogram.density[b]) << ',' << format_number(histogram.wigner_ref[b])
        << ',' << format_number(histogram.poisson_ref[b]) << '\n';
  }
}

void write_dos_csv(const std::filesystem::path& path, const DosModel& dos) {
  auto out = open_output(path);
  out << "bin_lo,bin_hi,density,gaussian_fit\n";
  for (std::size_t b = 0; b < dos.density.size(); ++b) {
    const double center = 0.5 * (dos.edges[b] + dos.edges[b + 1]);
    out << format_number(dos.edges[b]) << ',' << format_number(dos.edges[b + 1]) << ','
        << format_number(dos.density[b]) << ',' << format_number(dos(center)) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& value) {
  auto out = open_output(path);
  out << value.dump(2) << '\n';
}

// Commands ---------------------------------------------------------------------------

namespace {

json spacing_json(const SpacingReport& report) {
  const auto& h = report.histogram;
  return {{"label", report.label},
          {"levels", report.levels},
          {"mean_gap_ratio", report.raw_gap_ratio},
          {"chi2_wigner", h.chi2_wigner},
          {"chi2_poisson", h.chi2_poisson},
          {"closer_to", h.chi2_wigner < h.chi2_poisson ? "wigner-dyson" : "poisson"},
          {"zero_spacing_peak", report.zero_spacing_peak}};
}

json begin_run(const RunConfig& config, const std::string& command) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  auto provenance = config.to_json();
  provenance["command"] = command;
  write_json(config.out_dir / "run_config.json", provenance);
  return {{"command", command}, {"runs", json::array()}};
}

}  // namespace

json cmd_spectrum(const RunConfig& config, bool oracle) {
  auto summary = begin_run(config, "spectrum");
  for (const double u : config.couplings()) {
    ModelParams params = config.params;
    params.u = u;
    const auto spectra = obtain_spectra(params, config);
    const auto& set = spectra.set;
    const auto dos = density_of_states(set.all_levels(), config.dos_bins);
    write_dos_csv(config.out_dir / ("dos_" + u_tag(u) + ".csv"), dos);
    json blocks = json::array();
    for (const auto& b : set.blocks) blocks.push_back({{"label", b.block.label()}, {"dim", b.block.dim}});
    json groups = json::array();
    for (const auto& g : set.degeneracies.groups) {
      json labels = json::array();
      for (const auto b : g) labels.push_back(set.blocks[b].block.label());
      groups.push_back(labels);
    }
    json run = {{"u", u},
                {"cache_hit", spectra.cache_hit},
                {"dimension", set.all_levels().size()},
                {"blocks", blocks},
                {"degeneracy_groups", groups},
                {"gaussian_fit", {{"amplitude", dos.amplitude}, {"mean", dos.mean}, {"stddev", dos.stddev}}}};
    if (oracle) {
      const auto o = run_oracle(params, config);
      run["oracle"] = {{"dimension", o.dimension}, {"max_abs_difference", o.max_abs_difference}};
    }
    summary["runs"].push_back(run);
  }
  write_json(config.out_dir / "summary.json", summary);
  return summary;
}

json cmd_spacing(const RunConfig& config) {
  auto summary = begin_run(config, "spacing");
  for (const double u : config.couplings()) {
    ModelParams params = config.params;
    params.u = u;
    const auto set = obtain_spectra(params, config).set;
    const auto window = resolve_window(set, config);
    write_dos_csv(config.out_dir / ("dos_" + u_tag(u) + ".csv"),
                  density_of_states(set.all_levels(), config.dos_bins));
    json run = {{"u", u}, {"window", {window.center, window.half_width}}, {"reports", json::array()}};
    for (const auto& selection : config.selections) {
      const auto blocks = resolve_selection(set, selection);
      const auto report = blocks.size() == 1 ? block_spacing(set, blocks.front(), config)
                                             : pooled_spacing(set, blocks, window, config);
      write_histogram_csv(config.out_dir / ("spacing_" + u_tag(u) + "_" +
                                            file_tag(selection.to_string()) + ".csv"),
                          report.histogram);
      auto entry = spacing_json(report);
      entry["selection"] = selection.to_string();
      run["reports"].push_back(entry);
    }
    summary["runs"].push_back(run);
  }
  write_json(config.out_dir / "summary.json", summary);
  return summary;
}

json cmd_survival(const RunConfig& config) {
  auto summary = begin_run(config, "survival");
  for (const double u : config.couplings()) {
    ModelParams params = config.params;
    params.u = u;
    const auto set = obtain_spectra(params, config).set;
    const auto window = resolve_window(set, config);
    for (const auto& selection : config.selections) {
      const auto blocks = resolve_selection(set, selection);
      const auto tag = u_tag(u) + "_" + file_tag(selection.to_string());
      const auto report = run_survival(set, blocks, window, config, selection.to_string());
      write_curves_csv(config.out_dir / ("survival_" + tag + ".csv"), report.numeric.mean,
                       report.analytic, report.numeric.member_lo, report.numeric.member_hi);
      write_curves_csv(config.out_dir / ("survival_" + tag + "_binned.csv"), report.numeric_binned,
                       report.analytic_binned);
      auto parameters = report.parameters();
      // spacing inset: one block per degeneracy group inside the same window
      const auto groups = resolve_selection(set, BlockSelection::parse("groups"));
      const auto inset = blocks.size() == 1 ? block_spacing(set, blocks.front(), config)
                                            : pooled_spacing(set, groups, window, config);
      parameters["spacing"] = spacing_json(inset);
      write_json(config.out_dir / ("parameters_" + tag + ".json"), parameters);
      summary["runs"].push_back(parameters);
    }
  }
  write_json(config.out_dir / "summary.json", summary);
  return summary;
}

json cmd_window_sweep(const RunConfig& config) {
  auto summary = begin_run(config, "window-sweep");
  for (const double u : config.couplings()) {
    ModelParams params = config.params;
    params.u = u;
    const auto set = obtain_spectra(params, config).set;
    const auto sweep = run_window_sweep(set, config);
    for (std::size_t w = 0; w < sweep.windows.size(); ++w) {
      const auto& report = sweep.windows[w];
      const auto tag = u_tag(u) + "_" + file_tag(config.sweep_block) + "_w" + std::to_string(w);
      write_curves_csv(config.out_dir / ("sweep_" + tag + ".csv"), report.numeric.mean,
                       report.analytic, report.numeric.member_lo, report.numeric.member_hi);
      write_curves_csv(config.out_dir / ("sweep_" + tag + "_binned.csv"), report.numeric_binned,
                       report.analytic_binned);
      auto parameters = report.parameters();
      parameters["position"] = config.sweep_positions[w];
      summary["runs"].push_back(parameters);
    }
  }
  write_json(config.out_dir / "summary.json", summary);
  return summary;
}

json cmd_oracle(const RunConfig& config) {
  auto summary = begin_run(config, "oracle");
  for (const double u : config.couplings()) {
    ModelParams params = config.params;
    params.u = u;
    const auto report = run_oracle(params, config);
    summary["runs"].push_back({{"u", u},
                               {"dimension", report.dimension},
                               {"blocks", report.blocks},
                               {"max_abs_difference", report.max_abs_difference}});
  }
  write_json(config.out_dir / "summary.json", summary);
  return summary;
}

}  // namespace bhchaos
