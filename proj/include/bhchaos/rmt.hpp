#ifndef BHCHAOS_RMT_HPP
#define BHCHAOS_RMT_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bhchaos/spectral_statistics.hpp"
#include "bhchaos/survival_curve.hpp"

namespace bhchaos {

/// GOE two-level form factor, t in units of the Heisenberg time.
/// The first branch is used at exactly t = 1.
template <typename T>
T b2(T t) {
  using std::log;
  if (t <= T(1)) return T(1) - T(2) * t + t * log(T(2) * t + T(1));
  return t * log((T(2) * t + T(1)) / (T(2) * t - T(1))) - T(1);
}

/// Initial decay for a rectangular profile, sin^2(sigma t) / (sigma t)^2.
template <typename T>
T sinc_decay(T t, T half_width) {
  using std::sin;
  const T x = half_width * t;
  if (x == T(0)) return T(1);
  const T s = sin(x) / x;
  return s * s;
}

/// <r^2> / <r>^2 of the distribution the random components are drawn from.
struct MomentRatio {
  double value = 4.0 / 3.0;

  static MomentRatio uniform() { return {4.0 / 3.0}; }
  /// Estimate from samples of r.
  static MomentRatio from_samples(std::span<const double> r);
};

/// Energy sequences that make up an ensemble: sequence i has levels of
/// degeneracy d_i and mean in-window density nu_i; sum_i d_i nu_i = nu.
struct SequenceSpec {
  struct Sequence {
    unsigned degeneracy = 1;
    double mean_density = 0.0;
    std::size_t levels = 0;  // in-window level count, informational
  };
  std::vector<Sequence> sequences;
  /// Total mean density nu_bar. When zero, sum_i d_i nu_i is used.
  double total_density = 0.0;

  double density() const;
  /// Throws ConfigError for empty specs, d_i < 1, nu_i <= 0, or a sum rule
  /// violated by more than `tolerance` (relative).
  void validate(double tolerance = 0.05) const;

  static SequenceSpec single(double mean_density);
  /// Periodic Bose-Hubbard structure for L sites: conjugate momentum pairs
  /// (d = 2, nu / L each) plus the parity-resolved kappa in {0, pi} sectors
  /// (d = 1, nu / (2L) each).
  static SequenceSpec ring(unsigned sites, double mean_density);
};

/// eta = 4 sigma^2 / int_window dE / nu(E), adaptive Simpson quadrature to
/// relative tolerance 1e-8. Throws NumericalError when nu <= 0 in the window.
double effective_dimension(const EnergyWindow& window, const DosModel& dos);

/// Discrete effective dimension (sum_k f_k)^2 / sum_k f_k^2 of the profile
/// weights f_k = rho(E_k) / nu(E_k) over the component slots; the integral
/// form above is its continuum approximation.
double effective_dimension_discrete(std::span<const double> profile);

/// Flat-density approximation eta = 2 sigma nu_bar.
inline double effective_dimension_flat(const EnergyWindow& window, double mean_density) {
  return 2.0 * window.half_width * mean_density;
}

/// Ensemble-averaged asymptotic value of the survival probability:
/// q / eta + (1 - q / eta) / (eta - 1) * sum_i d_i (d_i - 1) nu_i / nu,
/// with q = <r^2>/<r>^2. Throws ConfigError for eta <= 1.
double asymptotic_analytic(const SequenceSpec& spec, const MomentRatio& moments, double eta);

/// Ensemble-averaged survival probability for random states over several
/// GOE-correlated, mutually uncorrelated sequences:
/// S_inf + (1 - S_inf) / (eta - 1) * [eta S_bc(t) - sum_i d_i^2 (nu_i / nu) b2(t / (2 pi nu_i))].
SurvivalCurve survival_analytic(const SequenceSpec& spec, double half_width, double eta,
                                const MomentRatio& moments, std::span<const double> times);

/// Mean relative deviation |numeric - analytic| / analytic of the log-binned
/// curves over the bins whose mean time lies in [t_lo, t_hi]. Both curves
/// must share a time grid. Throws ConfigError when no bin falls in range.
double hole_deviation(const SurvivalCurve& numeric, const SurvivalCurve& analytic, double t_lo,
                      double t_hi, double bins_per_decade = 20.0);

/// Whether the log-binned numeric curve has a local maximum in [t_lo, t_hi]
/// exceeding `factor` times the log-binned analytic value there.
bool has_revival(const SurvivalCurve& numeric, const SurvivalCurve& analytic, double t_lo,
                 double t_hi, double factor = 1.5, double bins_per_decade = 20.0);

}  // namespace bhchaos

#endif  // BHCHAOS_RMT_HPP
