#ifndef BHCHAOS_EXPERIMENTS_HPP
#define BHCHAOS_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhchaos/rmt.hpp"
#include "bhchaos/spectral_statistics.hpp"
#include "bhchaos/survival.hpp"

namespace bhchaos {

enum class EtaEstimator { discrete, quadrature, level_count };

std::string to_string(EtaEstimator estimator);
EtaEstimator eta_estimator_from(const std::string& text);

/// Everything a CLI run needs; serialized next to its outputs.
struct RunConfig {
  ModelParams params;
  std::vector<double> u_values;          // empty: just params.u
  std::optional<double> center;          // nullopt: Gaussian mean of the full spectrum
  double half_width = 2.0;
  std::vector<BlockSelection> selections{BlockSelection::parse("1")};
  std::size_t members = 0;               // 0: one member per in-window slot
  std::uint64_t seed = 20210317;
  TimeGridSpec grid;
  EtaEstimator eta = EtaEstimator::discrete;
  bool envelope = true;
  unsigned threads = 1;
  std::size_t dense_cap = kDefaultDenseCap;
  int unfold_degree = kDefaultUnfoldDegree;
  double keep_fraction = 0.8;
  double spacing_bin = 0.1;
  std::size_t dos_bins = 60;
  std::size_t sweep_levels = 600;
  std::vector<double> sweep_positions{0.5, 0.7, 1.0};
  std::string sweep_block = "1";
  std::filesystem::path out_dir = "bhchaos-out";
  std::filesystem::path cache_root;      // empty: $BHCHAOS_CACHE or ./bhchaos-cache
  std::string preset;

  std::vector<double> couplings() const;
  /// Throws ConfigError on any inconsistent field.
  void validate() const;
  nlohmann::json to_json() const;
  std::filesystem::path resolved_cache_root() const;
};

/// Applies a named preset (fig2 ... fig7) on top of `config`.
void apply_preset(RunConfig& config, const std::string& name);
/// Subcommand a preset belongs to.
std::string preset_command(const std::string& name);

struct SpectraResult {
  SpectrumSet set;
  bool cache_hit = false;
};

/// Loads the cached spectra for `params` or computes and stores them.
SpectraResult obtain_spectra(const ModelParams& params, const RunConfig& config);

/// Full-spectrum Gaussian mean, or the configured center.
EnergyWindow resolve_window(const SpectrumSet& set, const RunConfig& config);

// Spacing ----------------------------------------------------------------------

struct SpacingReport {
  std::string label;
  std::size_t levels = 0;
  double raw_gap_ratio = 0.0;  // on raw levels, unfolding-free
  SpacingHistogram histogram;  // unfolded spacings
  bool zero_spacing_peak = false;
};

/// Central `keep_fraction` of one block, unfolded.
SpacingReport block_spacing(const SpectrumSet& set, std::size_t block, const RunConfig& config);

/// Levels of several blocks inside `window`, pooled and unfolded as one
/// sequence. The zero-spacing peak flag is raised when the first histogram bin
/// exceeds three times the Poisson reference.
SpacingReport pooled_spacing(const SpectrumSet& set, std::span<const std::size_t> blocks,
                             const EnergyWindow& window, const RunConfig& config);

// Survival -------------------------------------------------------------------------

struct SurvivalReport {
  std::string label;
  double u = 0.0;
  EnergyWindow window;
  std::size_t slots = 0;
  std::size_t members = 0;
  SequenceSpec sequences;
  double eta = 0.0;  // the estimator used by the analytic curve
  double eta_discrete = 0.0;
  double eta_quadrature = 0.0;
  double eta_level_count = 0.0;
  double mean_density = 0.0;      // nu_bar of the whole selection
  double hole_density = 0.0;      // nu_i of the dominant b2 term
  double asymptotic = 0.0;        // analytic <S_P^inf>
  double numeric_asymptotic = 0.0;
  EnsembleRun numeric;
  SurvivalCurve analytic;
  SurvivalCurve numeric_binned;
  SurvivalCurve analytic_binned;
  double hole_lo = 0.0;  // hole region [0.05, 5] * 2 pi hole_density
  double hole_hi = 0.0;
  double hole_deviation = 0.0;
  bool revival = false;
  double long_time_ratio = 0.0;      // time average over [10, 100] * 2 pi nu_bar / analytic
  double initial_decay_error = 0.0;  // max relative gap to sinc^2 for t <= 0.5 / sigma_R

  nlohmann::json parameters() const;
};

/// Random-state ensemble on the selected blocks plus the matching analytic
/// curve. nu(E) in the profile is the Gaussian fit of the selection's levels.
SurvivalReport run_survival(const SpectrumSet& set, std::span<const std::size_t> blocks,
                            const EnergyWindow& window, const RunConfig& config,
                            const std::string& label);

/// Window holding `count` consecutive levels of a sorted spectrum, centered on
/// the level at `position` (0 = bottom, 1 = top) and clamped to the spectrum.
EnergyWindow level_window(std::span<const double> sorted_levels, std::size_t count,
                          double position);

struct SweepReport {
  std::vector<SurvivalReport> windows;
};

SweepReport run_window_sweep(const SpectrumSet& set, const RunConfig& config);

// Oracle -------------------------------------------------------------------------

struct OracleReport {
  std::size_t dimension = 0;
  std::size_t blocks = 0;
  double max_abs_difference = 0.0;
};

/// Sorted union of block spectra against dense diagonalization of the
/// full-space matrix.
OracleReport run_oracle(const ModelParams& params, const RunConfig& config);

// Output ---------------------------------------------------------------------------

/// t,sp_mean,sp_analytic,sp_member_lo,sp_member_hi
void write_curves_csv(const std::filesystem::path& path, const SurvivalCurve& numeric,
                      const SurvivalCurve& analytic, std::span<const double> lo = {},
                      std::span<const double> hi = {});
/// bin_lo,bin_hi,density,wigner_ref,poisson_ref
void write_histogram_csv(const std::filesystem::path& path, const SpacingHistogram& histogram);
/// bin_lo,bin_hi,density,gaussian_fit
void write_dos_csv(const std::filesystem::path& path, const DosModel& dos);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// Formats a double so that rereading it gives the same value.
std::string format_number(double value);

// Commands ---------------------------------------------------------------------------

nlohmann::json cmd_spectrum(const RunConfig& config, bool oracle);
nlohmann::json cmd_spacing(const RunConfig& config);
nlohmann::json cmd_survival(const RunConfig& config);
nlohmann::json cmd_window_sweep(const RunConfig& config);
nlohmann::json cmd_oracle(const RunConfig& config);

}  // namespace bhchaos

#endif  // BHCHAOS_EXPERIMENTS_HPP
