#ifndef BHCHAOS_SPECTRAL_STATISTICS_HPP
#define BHCHAOS_SPECTRAL_STATISTICS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/block_hamiltonian.hpp"
#include "bhchaos/error.hpp"
#include "bhchaos/symmetry_blocks.hpp"

namespace bhchaos {

/// Block metadata kept alongside spectra (the basis itself is not stored).
struct BlockInfo {
  unsigned j = 0;
  Parity parity = Parity::none;
  std::size_t dim = 0;

  std::string label() const;
};

struct BlockSpectrum {
  BlockInfo block;
  std::vector<double> eigenvalues;  // ascending
};

struct SpectrumSet {
  ModelParams params;
  std::vector<BlockSpectrum> blocks;
  DegeneracyMap degeneracies;
  std::string created;       // ISO-8601 UTC
  std::string code_version;

  std::size_t find(const std::string& label) const;
  /// Every level of the full space, sorted.
  std::vector<double> all_levels() const;
};

/// Full ascending spectrum of a Hermitian matrix (lower triangle is read).
/// Throws NumericalError naming `label` when the solver fails.
template <typename Derived>
std::vector<double> diagonalize(const Eigen::MatrixBase<Derived>& matrix,
                                const std::string& label = "matrix") {
  using Matrix = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix.eval(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed on block " + label);
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

/// Builds and diagonalizes every symmetry block of the model. Blocks are
/// independent and are spread over `threads` workers; the result does not
/// depend on the thread count.
SpectrumSet compute_spectra(const ModelParams& params, unsigned threads = 1,
                            std::size_t dense_cap = kDefaultDenseCap);

/// Block subsets used by the statistics and ensembles.
struct BlockSelection {
  enum class Kind { list, one_per_group, all };
  Kind kind = Kind::all;
  std::vector<std::string> labels;  // for Kind::list

  /// "all", "groups" (one block per degeneracy group) or a comma list
  /// such as "1" or "1,2,9-even".
  static BlockSelection parse(const std::string& text);
  std::string to_string() const;
};

std::vector<std::size_t> resolve_selection(const SpectrumSet& set, const BlockSelection& selection);

/// Sorted union of the chosen blocks' levels.
std::vector<double> pool_levels(const SpectrumSet& set, std::span<const std::size_t> blocks);

// Density of states --------------------------------------------------------

enum class GaussianFit { moments, least_squares };

struct DosModel {
  // nu(E) = amplitude * exp(-(E - mean)^2 / (2 stddev^2)) / (stddev sqrt(2 pi))
  double amplitude = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> edges;  // histogram, levels per unit energy
  std::vector<double> density;

  double operator()(double energy) const;
  /// Integral of the Gaussian fit over [lo, hi].
  double integral(double lo, double hi) const;
};

/// Histogram with `bins` bins over [min, max] plus a Gaussian fit.
/// Moment matching uses the sample mean and variance; least squares fits a
/// parabola to log counts weighted by the counts.
DosModel density_of_states(std::span<const double> levels, std::size_t bins,
                           GaussianFit fit = GaussianFit::moments);

// Unfolding and spacings -------------------------------------------------------

struct Unfolded {
  std::vector<double> levels;
  double condition = 0.0;  // 2-norm condition number of the fit design matrix
};

inline constexpr int kDefaultUnfoldDegree = 6;

/// Keeps the central `keep_fraction` of the sorted spectrum and maps each
/// retained level E_k to a polynomial fit of the staircase N(E).
Unfolded unfold(std::span<const double> levels, int degree = kDefaultUnfoldDegree,
                double keep_fraction = 0.8);

enum class SpacingMode { spacing, gap_ratio };

struct SpacingHistogram {
  SpacingMode mode = SpacingMode::spacing;
  std::vector<double> edges;
  std::vector<double> density;
  std::vector<double> wigner_ref;   // GOE reference at bin centers
  std::vector<double> poisson_ref;  // Poisson reference at bin centers
  std::size_t samples = 0;
  double mean_gap_ratio = 0.0;
  double chi2_wigner = 0.0;   // chi-square distance to the GOE reference
  double chi2_poisson = 0.0;  // chi-square distance to the Poisson reference

  double bin_width() const { return edges.size() > 1 ? edges[1] - edges[0] : 0.0; }
};

inline constexpr double kGoeMeanGapRatio = 0.5307;
inline constexpr double kPoissonMeanGapRatio = 0.38629436111989061;  // 2 ln 2 - 1

double wigner_surmise(double s);
double poisson_spacing(double s);
/// Densities of r = min/max of adjacent gaps, r in [0, 1].
double goe_gap_ratio_density(double r);
double poisson_gap_ratio_density(double r);

/// Mean of min(s_k, s_{k+1}) / max(s_k, s_{k+1}) over consecutive gaps.
/// Pairs of zero gaps are skipped. Throws ConfigError for fewer than 3 levels.
double mean_gap_ratio(std::span<const double> levels);

/// spacing mode: histogram of nearest-neighbour spacings of unfolded levels
/// with bin width `bin_width` over [0, 4], extended to cover the largest
/// spacing. gap_ratio mode: histogram of the gap ratio on [0, 1] from raw
/// levels. Both report the mean gap ratio.
SpacingHistogram spacing_statistics(std::span<const double> levels, SpacingMode mode,
                                    double bin_width = 0.1);

}  // namespace bhchaos

#endif  // BHCHAOS_SPECTRAL_STATISTICS_HPP
