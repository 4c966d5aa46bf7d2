#ifndef BHCHAOS_SURVIVAL_HPP
#define BHCHAOS_SURVIVAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/spectral_statistics.hpp"
#include "bhchaos/survival_curve.hpp"

namespace bhchaos {

/// In-window levels of a block selection.
///
/// Blocks of one degeneracy group are exactly degenerate by symmetry, so a
/// group contributes one level per eigenvalue of its first selected block,
/// carrying one component slot per selected group member.
struct LevelTable {
  struct Level {
    double energy;
    unsigned slots;
    std::size_t sequence;  // index into `sequences`
  };
  struct Sequence {
    std::size_t block;      // block whose eigenvalues represent the group
    unsigned degeneracy;    // selected members of the group
    std::size_t levels = 0; // distinct in-window levels
  };

  EnergyWindow window;
  std::vector<Level> levels;  // ascending energy
  std::vector<Sequence> sequences;

  std::size_t slot_count() const;
};

/// Throws NumericalError when the window holds no level.
LevelTable select_levels(const SpectrumSet& set, std::span<const std::size_t> blocks,
                         const EnergyWindow& window);

/// Random states with |c|^2 = r f(E) / sum r f(E), f = rho / nu, r ~ U[0, 1).
///
/// Member m draws from its own 64-bit Mersenne Twister seeded with the
/// sequence {seed_lo, seed_hi, m_lo, m_hi} (32-bit halves), one variate per
/// slot in slot order; r = (x >> 11) * 2^-53. Members are generated on demand
/// so large ensembles are never stored whole.
class RandomStateEnsemble {
 public:
  /// `members == 0` selects one member per slot. Throws NumericalError when
  /// nu(E) <= 0 for an in-window level.
  RandomStateEnsemble(LevelTable table, std::size_t members, const DosModel& dos,
                      std::uint64_t seed);

  const LevelTable& table() const { return table_; }
  std::size_t members() const { return members_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> shaping() const { return shaping_; }

  /// Normalized weights of member m, one per slot.
  std::vector<double> weights(std::size_t member) const;

 private:
  LevelTable table_;
  std::size_t members_;
  std::uint64_t seed_;
  std::vector<double> shaping_;  // f(E) per slot
};

/// |sum_k w_k exp(-i E_k t)|^2; slots sharing a level add coherently.
SurvivalCurve survival_numeric(std::span<const double> weights, const LevelTable& table,
                               std::span<const double> times);

/// sum over levels of (sum of the level's slot weights)^2. With one slot per
/// level this is the non-degenerate sum_k w_k^2.
double asymptotic_value(std::span<const double> weights, const LevelTable& table);

struct EnsembleRun {
  SurvivalCurve mean;
  std::vector<double> member_lo;  // 5th percentile per time (empty unless requested)
  std::vector<double> member_hi;  // 95th percentile per time
  double mean_asymptotic = 0.0;   // ensemble mean of asymptotic_value
};

/// Evolves every member on `times`. Members are processed in fixed-size
/// chunks and summed in member order, so results are bit-reproducible.
EnsembleRun run_ensemble(const RandomStateEnsemble& ensemble, std::span<const double> times,
                         bool envelope = false);

/// Mean of the curve's samples with t in [t_lo, t_hi].
double time_average(const SurvivalCurve& curve, double t_lo, double t_hi);

}  // namespace bhchaos

#endif  // BHCHAOS_SURVIVAL_HPP
