#include "bhchaos/spectral_statistics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "bhchaos/version.hpp"

namespace bhchaos {

std::string BlockInfo::label() const {
  auto out = std::to_string(j);
  if (parity != Parity::none) out += "-" + bhchaos::to_string(parity);
  return out;
}

std::size_t SpectrumSet::find(const std::string& label) const {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].block.label() == label) return b;
  }
  throw ConfigError("no block labelled '" + label + "'");
}

std::vector<double> SpectrumSet::all_levels() const {
  std::vector<std::size_t> every(blocks.size());
  for (std::size_t b = 0; b < every.size(); ++b) every[b] = b;
  return pool_levels(*this, every);
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

SpectrumSet compute_spectra(const ModelParams& params, unsigned threads, std::size_t dense_cap) {
  params.validate();
  const BasisIndex basis(params.sites, params.particles);
  const OrbitTable orbits(basis);
  const auto decomposition = build_blocks(orbits);
  const auto& blocks = decomposition.blocks;
  for (const auto& block : blocks) {
    if (block.dim() > dense_cap) {
      throw ConfigError("block " + block.label() + " has dim " + std::to_string(block.dim()) +
                        " above the dense cap " + std::to_string(dense_cap));
    }
  }

  SpectrumSet set;
  set.params = params;
  set.degeneracies = decomposition.degeneracies;
  set.code_version = kVersion;
  set.created = utc_now();
  set.blocks.resize(blocks.size());

  // largest blocks first keeps the workers balanced
  std::vector<std::size_t> order(blocks.size());
  for (std::size_t b = 0; b < order.size(); ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return blocks[a].dim() > blocks[b].dim(); });

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const auto slot = next.fetch_add(1);
      if (slot >= order.size()) return;
      const auto b = order[slot];
      const auto& block = blocks[b];
      try {
        BlockSpectrum spectrum{{block.j, block.parity, block.dim()}, {}};
        if (is_real_sector(block, params.sites)) {
          spectrum.eigenvalues = diagonalize(
              build_block_matrix<double>(params, orbits, block, dense_cap), block.label());
        } else {
          spectrum.eigenvalues = diagonalize(
              build_block_matrix<std::complex<double>>(params, orbits, block, dense_cap),
              block.label());
        }
        set.blocks[b] = std::move(spectrum);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = order.size();
        return;
      }
    }
  };

  const auto workers = std::max(1u, std::min<unsigned>(threads, blocks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

BlockSelection BlockSelection::parse(const std::string& text) {
  BlockSelection out;
  if (text == "all") return out;
  if (text == "groups" || text == "one-per-group") {
    out.kind = Kind::one_per_group;
    return out;
  }
  out.kind = Kind::list;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.labels.push_back(item);
  }
  if (out.labels.empty()) throw ConfigError("empty block selection");
  return out;
}

std::string BlockSelection::to_string() const {
  switch (kind) {
    case Kind::all:
      return "all";
    case Kind::one_per_group:
      return "groups";
    default: {
      std::string out;
      for (const auto& label : labels) out += (out.empty() ? "" : ",") + label;
      return out;
    }
  }
}

std::vector<std::size_t> resolve_selection(const SpectrumSet& set,
                                           const BlockSelection& selection) {
  std::vector<std::size_t> out;
  switch (selection.kind) {
    case BlockSelection::Kind::all:
      for (std::size_t b = 0; b < set.blocks.size(); ++b) out.push_back(b);
      break;
    case BlockSelection::Kind::one_per_group:
      for (const auto& group : set.degeneracies.groups) out.push_back(group.front());
      std::sort(out.begin(), out.end());
      break;
    case BlockSelection::Kind::list:
      for (const auto& label : selection.labels) {
        const auto b = set.find(label);
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
      }
      break;
  }
  return out;
}

std::vector<double> pool_levels(const SpectrumSet& set, std::span<const std::size_t> blocks) {
  std::vector<double> out;
  for (const auto b : blocks) {
    const auto& values = set.blocks.at(b).eigenvalues;
    out.insert(out.end(), values.begin(), values.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Density of states --------------------------------------------------------

double DosModel::operator()(double energy) const {
  const double z = (energy - mean) / stddev;
  return amplitude * std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

double DosModel::integral(double lo, double hi) const {
  const double scale = stddev * std::numbers::sqrt2;
  return 0.5 * amplitude * (std::erf((hi - mean) / scale) - std::erf((lo - mean) / scale));
}

DosModel density_of_states(std::span<const double> levels, std::size_t bins, GaussianFit fit) {
  if (bins < 2) throw ConfigError("density of states needs at least 2 bins");
  if (levels.empty()) throw ConfigError("density of states of an empty spectrum");
  DosModel dos;
  const auto [lo_it, hi_it] = std::minmax_element(levels.begin(), levels.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double count = static_cast<double>(levels.size());

  double mean = 0.0;
  for (const double e : levels) mean += e;
  mean /= count;
  double variance = 0.0;
  for (const double e : levels) variance += (e - mean) * (e - mean);
  variance /= count;
  if (!(variance > 0.0) || hi == lo) {
    throw NumericalError("degenerate density-of-states fit: spectrum has zero variance");
  }

  const double width = (hi - lo) / static_cast<double>(bins);
  dos.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) dos.edges[b] = lo + width * static_cast<double>(b);
  dos.edges.back() = hi;
  std::vector<double> counts(bins, 0.0);
  for (const double e : levels) {
    auto b = static_cast<std::size_t>((e - lo) / width);
    counts[std::min(b, bins - 1)] += 1.0;
  }
  dos.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) dos.density[b] = counts[b] / width;

  dos.amplitude = count;
  dos.mean = mean;
  dos.stddev = std::sqrt(variance);
  if (fit == GaussianFit::least_squares) {
    // ln density = c0 + c1 x + c2 x^2, x in units of the moment stddev
    Eigen::MatrixXd design(static_cast<Eigen::Index>(bins), 3);
    Eigen::VectorXd target(static_cast<Eigen::Index>(bins));
    Eigen::Index rows = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      if (counts[b] <= 0.0) continue;
      const double x = (0.5 * (dos.edges[b] + dos.edges[b + 1]) - mean) / dos.stddev;
      const double weight = std::sqrt(counts[b]);
      design.row(rows) << weight, weight * x, weight * x * x;
      target(rows) = weight * std::log(dos.density[b]);
      ++rows;
    }
    if (rows < 3) throw NumericalError("least-squares DoS fit needs 3 occupied bins");
    const Eigen::Vector3d c =
        design.topRows(rows).colPivHouseholderQr().solve(target.head(rows));
    if (!(c(2) < 0.0)) throw NumericalError("least-squares DoS fit is not a Gaussian");
    const double s = std::sqrt(-0.5 / c(2));
    const double shift = s * s * c(1);
    const double peak = std::exp(c(0) + 0.5 * c(1) * shift);
    dos.mean = mean + shift * dos.stddev;
    dos.stddev *= s;
    dos.amplitude = peak * dos.stddev * std::sqrt(2.0 * std::numbers::pi);
  }
  return dos;
}

// Unfolding ------------------------------------------------------------------

Unfolded unfold(std::span<const double> levels, int degree, double keep_fraction) {
  if (degree < 1) throw ConfigError("unfolding degree must be positive");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ConfigError("keep_fraction must lie in (0, 1]");
  }
  const auto min_levels = static_cast<std::size_t>(degree) + 2;
  if (levels.size() < min_levels) throw ConfigError("too few levels to unfold");
  std::vector<double> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());

  const auto n = sorted.size();
  const auto drop = static_cast<std::size_t>(std::floor(0.5 * (1.0 - keep_fraction) * n));
  const auto first = drop;
  const auto kept = n - 2 * drop;
  if (kept < min_levels) throw ConfigError("too few levels left after trimming");

  const double lo = sorted[first];
  const double hi = sorted[first + kept - 1];
  if (!(hi > lo)) throw NumericalError("retained window has zero width");
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);

  // Chebyshev basis on the retained window
  const auto m = static_cast<Eigen::Index>(kept);
  Eigen::MatrixXd design(m, degree + 1);
  Eigen::VectorXd staircase(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double x = (sorted[first + static_cast<std::size_t>(k)] - mid) / half;
    design(k, 0) = 1.0;
    design(k, 1) = x;
    for (int d = 2; d <= degree; ++d) design(k, d) = 2.0 * x * design(k, d - 1) - design(k, d - 2);
    staircase(k) = static_cast<double>(k) + 0.5;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Unfolded out;
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                          : std::numeric_limits<double>::infinity();
  if (!(out.condition < 1e12)) {
    std::ostringstream msg;
    msg << "ill-conditioned unfolding fit: degree " << degree << ", " << kept
        << " levels, condition number " << out.condition;
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd fitted = design * svd.solve(staircase);
  out.levels.assign(fitted.data(), fitted.data() + fitted.size());
  return out;
}

// Spacing statistics ---------------------------------------------------------

double wigner_surmise(double s) {
  return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

double poisson_spacing(double s) { return std::exp(-s); }

double goe_gap_ratio_density(double r) {
  // surmise for r in [0, inf) folded onto [0, 1]
  const double z = 1.0 + r + r * r;
  return 2.0 * (27.0 / 8.0) * (r + r * r) / std::pow(z, 2.5);
}

double poisson_gap_ratio_density(double r) { return 2.0 / ((1.0 + r) * (1.0 + r)); }

namespace {

std::vector<double> gap_ratios(std::span<const double> levels) {
  if (levels.size() < 3) throw ConfigError("gap ratios need at least 3 levels");
  std::vector<double> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(sorted.size() - 2);
  for (std::size_t k = 0; k + 2 < sorted.size(); ++k) {
    const double a = sorted[k + 1] - sorted[k];
    const double b = sorted[k + 2] - sorted[k + 1];
    const double big = std::max(a, b);
    if (big <= 0.0) continue;
    out.push_back(std::min(a, b) / big);
  }
  return out;
}

double chi2_distance(std::span<const double> p, std::span<const double> q, double width) {
  double total = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    const double sum = p[b] + q[b];
    if (sum > 0.0) total += (p[b] - q[b]) * (p[b] - q[b]) / sum;
  }
  return 0.5 * total * width;
}

}  // namespace

double mean_gap_ratio(std::span<const double> levels) {
  const auto ratios = gap_ratios(levels);
  if (ratios.empty()) throw NumericalError("all gaps vanish");
  double total = 0.0;
  for (const double r : ratios) total += r;
  return total / static_cast<double>(ratios.size());
}

SpacingHistogram spacing_statistics(std::span<const double> levels, SpacingMode mode,
                                    double bin_width) {
  if (levels.size() < 3) throw ConfigError("spacing statistics need at least 3 levels");
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  SpacingHistogram out;
  out.mode = mode;
  out.mean_gap_ratio = mean_gap_ratio(levels);

  std::vector<double> samples;
  double upper = 1.0;
  if (mode == SpacingMode::spacing) {
    std::vector<double> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());
    samples.reserve(sorted.size() - 1);
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) samples.push_back(sorted[k + 1] - sorted[k]);
    upper = std::max(4.0, *std::max_element(samples.begin(), samples.end()));
  } else {
    samples = gap_ratios(levels);
  }
  auto bins = static_cast<std::size_t>(std::ceil(upper / bin_width - 1e-9));
  bins = std::max<std::size_t>(bins, 1);

  out.samples = samples.size();
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) out.edges[b] = bin_width * static_cast<double>(b);
  std::vector<double> counts(bins, 0.0);
  for (const double s : samples) {
    counts[std::min(static_cast<std::size_t>(s / bin_width), bins - 1)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bin_width);
  out.density.resize(bins);
  out.wigner_ref.resize(bins);
  out.poisson_ref.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double center = bin_width * (static_cast<double>(b) + 0.5);
    out.density[b] = counts[b] * norm;
    if (mode == SpacingMode::spacing) {
      out.wigner_ref[b] = wigner_surmise(center);
      out.poisson_ref[b] = poisson_spacing(center);
    } else {
      out.wigner_ref[b] = goe_gap_ratio_density(center);
      out.poisson_ref[b] = poisson_gap_ratio_density(center);
    }
  }
  out.chi2_wigner = chi2_distance(out.density, out.wigner_ref, bin_width);
  out.chi2_poisson = chi2_distance(out.density, out.poisson_ref, bin_width);
  return out;
}

}  // namespace bhchaos
