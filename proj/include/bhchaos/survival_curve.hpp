#ifndef BHCHAOS_SURVIVAL_CURVE_HPP
#define BHCHAOS_SURVIVAL_CURVE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bhchaos {

/// Rectangular energy profile [center - half_width, center + half_width].
struct EnergyWindow {
  double center = 0.0;
  double half_width = 0.0;

  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
  bool contains(double energy) const { return energy >= lo() && energy <= hi(); }
  /// Throws ConfigError unless half_width > 0.
  void validate() const;
};

struct SurvivalCurve {
  enum class Kind { single_member, ensemble_mean, log_binned_mean, analytic };

  Kind kind = Kind::ensemble_mean;
  std::vector<double> times;   // ascending
  std::vector<double> values;  // S_P(t)

  std::size_t size() const { return times.size(); }
};

std::string to_string(SurvivalCurve::Kind kind);

/// `points` logarithmically spaced times in [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, std::size_t points);

/// Grid resolved for log-binning: the decade-anchored windows
/// [10^(b/B), 10^((b+1)/B)) covering [t_min, t_max], B = bins_per_decade, each
/// sampled at `samples_per_bin` evenly spaced interior points. Averaging many
/// samples per window is what suppresses the temporal fluctuations.
std::vector<double> log_bin_grid(double t_min, double t_max, double bins_per_decade,
                                 std::size_t samples_per_bin);

struct TimeGridSpec {
  double start = 1e-2;               // t_min in units of 1 / sigma_R
  double heisenberg_multiple = 1e3;  // t_max in units of 2 pi nu_bar
  double bins_per_decade = 20.0;
  std::size_t samples_per_bin = 64;
};

/// Grid from t_min = start / sigma_R to t_max = multiple * 2 pi nu_bar.
std::vector<double> default_time_grid(double half_width, double mean_density,
                                      const TimeGridSpec& spec = {});

/// Pointwise mean across curves sharing one time grid. Throws ConfigError for
/// an empty input or mismatched grids.
SurvivalCurve ensemble_average(std::span<const SurvivalCurve> curves);

/// Averages over geometric time windows, `bins_per_decade` per decade,
/// anchored at t = 1. Each output point is placed at the mean time of the
/// samples it averages; empty windows are skipped. Requires t > 0.
SurvivalCurve log_bin(const SurvivalCurve& curve, double bins_per_decade = 20.0);

}  // namespace bhchaos

#endif  // BHCHAOS_SURVIVAL_CURVE_HPP
