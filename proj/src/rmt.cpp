#include "bhchaos/rmt.hpp"

#include <numbers>

#include "bhchaos/error.hpp"

namespace bhchaos {

MomentRatio MomentRatio::from_samples(std::span<const double> r) {
  if (r.empty()) throw ConfigError("moment ratio of no samples");
  double m1 = 0.0;
  double m2 = 0.0;
  for (const double x : r) {
    m1 += x;
    m2 += x * x;
  }
  const double n = static_cast<double>(r.size());
  m1 /= n;
  m2 /= n;
  if (!(m1 > 0.0)) throw NumericalError("moment ratio needs a positive mean");
  return {m2 / (m1 * m1)};
}

double SequenceSpec::density() const {
  if (total_density > 0.0) return total_density;
  double sum = 0.0;
  for (const auto& s : sequences) sum += s.degeneracy * s.mean_density;
  return sum;
}

void SequenceSpec::validate(double tolerance) const {
  if (sequences.empty()) throw ConfigError("sequence spec has no sequences");
  double sum = 0.0;
  for (const auto& s : sequences) {
    if (s.degeneracy < 1) throw ConfigError("sequence degeneracy must be at least 1");
    if (!(s.mean_density > 0.0)) throw ConfigError("sequence density must be positive");
    sum += s.degeneracy * s.mean_density;
  }
  const double total = density();
  if (std::abs(sum - total) > tolerance * total) {
    throw ConfigError("sum rule violated: sum d_i nu_i = " + std::to_string(sum) +
                      " but nu = " + std::to_string(total));
  }
}

SequenceSpec SequenceSpec::single(double mean_density) {
  return {{{1, mean_density, 0}}, mean_density};
}

SequenceSpec SequenceSpec::ring(unsigned sites, double mean_density) {
  if (sites < 1) throw ConfigError("ring needs at least one site");
  SequenceSpec spec;
  spec.total_density = mean_density;
  const double per_sector = mean_density / sites;
  for (unsigned j = 1; 2 * j < sites; ++j) spec.sequences.push_back({2, per_sector, 0});
  const unsigned parity_sectors = sites % 2 == 0 ? 2 : 1;
  for (unsigned s = 0; s < 2 * parity_sectors; ++s) {
    spec.sequences.push_back({1, 0.5 * per_sector, 0});
  }
  return spec;
}

namespace {

template <typename F>
double simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
               double tolerance, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tolerance * std::abs(left + right)) {
    return left + right + delta / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tolerance, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tolerance, depth - 1);
}

}  // namespace

double effective_dimension(const EnergyWindow& window, const DosModel& dos) {
  window.validate();
  auto inverse_density = [&](double e) {
    const double nu = dos(e);
    if (!(nu > 0.0) || !std::isfinite(nu)) {
      throw NumericalError("density of states vanishes inside the energy window");
    }
    return 1.0 / nu;
  };
  const double a = window.lo();
  const double b = window.hi();
  const double fa = inverse_density(a);
  const double fm = inverse_density(0.5 * (a + b));
  const double fb = inverse_density(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double integral = simpson(inverse_density, a, b, fa, fm, fb, whole, 1e-8, 40);
  return 4.0 * window.half_width * window.half_width / integral;
}

double effective_dimension_discrete(std::span<const double> profile) {
  double sum = 0.0;
  double squares = 0.0;
  for (const double f : profile) {
    if (!(f >= 0.0)) throw NumericalError("profile weights must be non-negative");
    sum += f;
    squares += f * f;
  }
  if (!(squares > 0.0)) throw NumericalError("profile weights vanish");
  return sum * sum / squares;
}

double asymptotic_analytic(const SequenceSpec& spec, const MomentRatio& moments, double eta) {
  if (!(eta > 1.0)) throw ConfigError("effective dimension must exceed 1");
  spec.validate();
  const double nu = spec.density();
  double degenerate = 0.0;
  for (const auto& s : spec.sequences) {
    degenerate += s.degeneracy * (s.degeneracy - 1.0) * s.mean_density / nu;
  }
  const double diagonal = moments.value / eta;
  return diagonal + (1.0 - diagonal) / (eta - 1.0) * degenerate;
}

SurvivalCurve survival_analytic(const SequenceSpec& spec, double half_width, double eta,
                                const MomentRatio& moments, std::span<const double> times) {
  if (!(half_width > 0.0)) throw ConfigError("window half-width must be positive");
  const double s_inf = asymptotic_analytic(spec, moments, eta);
  const double nu = spec.density();
  const double prefactor = (1.0 - moments.value / eta) / (eta - 1.0);
  SurvivalCurve out;
  out.kind = SurvivalCurve::Kind::analytic;
  out.times.assign(times.begin(), times.end());
  out.values.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    double hole = 0.0;
    for (const auto& s : spec.sequences) {
      const double d = s.degeneracy;
      hole += d * d * (s.mean_density / nu) *
              b2(t / (2.0 * std::numbers::pi * s.mean_density));
    }
    out.values[k] = s_inf + prefactor * (eta * sinc_decay(t, half_width) - hole);
  }
  return out;
}

namespace {

struct BinnedPair {
  SurvivalCurve numeric;
  SurvivalCurve analytic;
};

BinnedPair bin_both(const SurvivalCurve& numeric, const SurvivalCurve& analytic,
                    double bins_per_decade) {
  if (numeric.times != analytic.times) {
    throw ConfigError("numeric and analytic curves use different time grids");
  }
  return {log_bin(numeric, bins_per_decade), log_bin(analytic, bins_per_decade)};
}

}  // namespace

double hole_deviation(const SurvivalCurve& numeric, const SurvivalCurve& analytic, double t_lo,
                      double t_hi, double bins_per_decade) {
  const auto binned = bin_both(numeric, analytic, bins_per_decade);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < binned.numeric.size(); ++k) {
    const double t = binned.numeric.times[k];
    if (t < t_lo || t > t_hi) continue;
    const double a = binned.analytic.values[k];
    total += std::abs(binned.numeric.values[k] - a) / std::abs(a);
    ++count;
  }
  if (count == 0) throw ConfigError("no time bins inside the deviation range");
  return total / static_cast<double>(count);
}

bool has_revival(const SurvivalCurve& numeric, const SurvivalCurve& analytic, double t_lo,
                 double t_hi, double factor, double bins_per_decade) {
  const auto binned = bin_both(numeric, analytic, bins_per_decade);
  const auto& v = binned.numeric.values;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const double t = binned.numeric.times[k];
    if (t < t_lo || t > t_hi) continue;
    if (v[k] > v[k - 1] && v[k] > v[k + 1] && v[k] > factor * binned.analytic.values[k]) {
      return true;
    }
  }
  return false;
}

}  // namespace bhchaos
