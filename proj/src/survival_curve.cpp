#include "bhchaos/survival_curve.hpp"

#include <cmath>
#include <numbers>

#include "bhchaos/error.hpp"

namespace bhchaos {

void EnergyWindow::validate() const {
  if (!(half_width > 0.0)) throw ConfigError("energy window half-width must be positive");
  if (!std::isfinite(center)) throw ConfigError("energy window center must be finite");
}

std::string to_string(SurvivalCurve::Kind kind) {
  switch (kind) {
    case SurvivalCurve::Kind::single_member:
      return "single-member";
    case SurvivalCurve::Kind::ensemble_mean:
      return "ensemble-mean";
    case SurvivalCurve::Kind::log_binned_mean:
      return "log-binned-mean";
    default:
      return "analytic";
  }
}

std::vector<double> log_time_grid(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0.0 && t_max > t_min) || points < 2) {
    throw ConfigError("time grid needs 0 < t_min < t_max and at least 2 points");
  }
  std::vector<double> out(points);
  const double step = std::log(t_max / t_min) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) out[k] = t_min * std::exp(step * static_cast<double>(k));
  out.back() = t_max;
  return out;
}

std::vector<double> log_bin_grid(double t_min, double t_max, double bins_per_decade,
                                 std::size_t samples_per_bin) {
  if (!(t_min > 0.0 && t_max > t_min)) throw ConfigError("time grid needs 0 < t_min < t_max");
  if (!(bins_per_decade > 0.0) || samples_per_bin == 0) {
    throw ConfigError("time grid needs positive bins per decade and samples per bin");
  }
  const auto first = static_cast<long>(std::floor(std::log10(t_min) * bins_per_decade));
  const auto last = static_cast<long>(std::ceil(std::log10(t_max) * bins_per_decade));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(last - first) * samples_per_bin);
  const double n = static_cast<double>(samples_per_bin);
  for (long b = first; b < last; ++b) {
    const double lo = std::pow(10.0, static_cast<double>(b) / bins_per_decade);
    const double hi = std::pow(10.0, static_cast<double>(b + 1) / bins_per_decade);
    for (std::size_t i = 0; i < samples_per_bin; ++i) {
      out.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / n);
    }
  }
  return out;
}

std::vector<double> default_time_grid(double half_width, double mean_density,
                                      const TimeGridSpec& spec) {
  if (!(half_width > 0.0 && mean_density > 0.0)) {
    throw ConfigError("time grid needs positive half-width and density");
  }
  return log_bin_grid(spec.start / half_width,
                      spec.heisenberg_multiple * 2.0 * std::numbers::pi * mean_density,
                      spec.bins_per_decade, spec.samples_per_bin);
}

SurvivalCurve ensemble_average(std::span<const SurvivalCurve> curves) {
  if (curves.empty()) throw ConfigError("ensemble average of no curves");
  SurvivalCurve out;
  out.kind = SurvivalCurve::Kind::ensemble_mean;
  out.times = curves.front().times;
  out.values.assign(out.times.size(), 0.0);
  for (const auto& curve : curves) {
    if (curve.times != out.times || curve.values.size() != out.times.size()) {
      throw ConfigError("ensemble average over mismatched time grids");
    }
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += curve.values[k];
  }
  const double scale = 1.0 / static_cast<double>(curves.size());
  for (auto& v : out.values) v *= scale;
  return out;
}

SurvivalCurve log_bin(const SurvivalCurve& curve, double bins_per_decade) {
  if (!(bins_per_decade > 0.0)) throw ConfigError("bins per decade must be positive");
  SurvivalCurve out;
  out.kind = curve.kind == SurvivalCurve::Kind::analytic ? SurvivalCurve::Kind::analytic
                                                         : SurvivalCurve::Kind::log_binned_mean;
  std::size_t k = 0;
  while (k < curve.size()) {
    if (!(curve.times[k] > 0.0)) throw ConfigError("log binning needs strictly positive times");
    const auto bin = std::floor(std::log10(curve.times[k]) * bins_per_decade);
    double t_sum = 0.0;
    double v_sum = 0.0;
    std::size_t count = 0;
    while (k < curve.size() && std::floor(std::log10(curve.times[k]) * bins_per_decade) == bin) {
      t_sum += curve.times[k];
      v_sum += curve.values[k];
      ++count;
      ++k;
    }
    out.times.push_back(t_sum / static_cast<double>(count));
    out.values.push_back(v_sum / static_cast<double>(count));
  }
  return out;
}

}  // namespace bhchaos
