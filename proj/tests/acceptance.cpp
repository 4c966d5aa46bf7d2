// Acceptance suite: prints one PASS/FAIL line per criterion, exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "bhchaos/error.hpp"
#include "bhchaos/experiments.hpp"

using namespace bhchaos;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (condition ? "" : " [failed]");
  }
};

std::string fmt(double value, const char* format = "%.6g") {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

RunConfig base_config() {
  RunConfig config;
  config.params = {9, 9, 0.5};
  config.center = 3.60;
  config.half_width = 2.0;
  config.threads = std::max(1u, std::thread::hardware_concurrency());
  return config;
}

class Spectra {
 public:
  const SpectrumSet& at(double u) {
    auto it = sets_.find(u);
    if (it == sets_.end()) {
      auto config = base_config();
      config.params.u = u;
      const auto start = std::chrono::steady_clock::now();
      auto result = obtain_spectra(config.params, config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      std::printf("# spectra u=%g: %s in %.1f s\n", u, result.cache_hit ? "cache hit" : "computed",
                  elapsed.count());
      std::fflush(stdout);
      it = sets_.emplace(u, std::move(result.set)).first;
    }
    return it->second;
  }

 private:
  std::map<double, SpectrumSet> sets_;
};

Spectra spectra;

struct SurvivalKey {
  double u;
  std::string selection;
  auto operator<=>(const SurvivalKey&) const = default;
};
std::map<SurvivalKey, SurvivalReport> survival_runs;

const SurvivalReport& survival(double u, const std::string& selection) {
  const SurvivalKey key{u, selection};
  if (auto it = survival_runs.find(key); it != survival_runs.end()) return it->second;
  const auto& set = spectra.at(u);
  auto config = base_config();
  config.params.u = u;
  const auto blocks = resolve_selection(set, BlockSelection::parse(selection));
  const auto window = resolve_window(set, config);
  auto report = run_survival(set, blocks, window, config, selection);
  std::printf("# survival u=%g blocks=%s: M=%zu eta=%.1f deviation=%.4f revival=%d\n", u,
              selection.c_str(), report.members, report.eta, report.hole_deviation, report.revival);
  std::fflush(stdout);
  return survival_runs.emplace(key, std::move(report)).first->second;
}

// 1 ------------------------------------------------------------------------------
void dimensions(Outcome& out) {
  const BasisIndex basis(9, 9);
  const OrbitTable orbits(basis);
  const auto blocks = build_blocks(orbits).blocks;
  out.require(basis.size() == 24310, "D=" + std::to_string(basis.size()));
  const std::map<std::string, std::size_t> expected{
      {"1", 2700}, {"2", 2700}, {"3", 2703}, {"4", 2700}, {"5", 2700}, {"6", 2703},
      {"7", 2700}, {"8", 2700}, {"9-even", 1387}, {"9-odd", 1317}};
  bool match = blocks.size() == expected.size();
  std::string dims;
  for (const auto& b : blocks) {
    const auto it = expected.find(b.label());
    match = match && it != expected.end() && it->second == b.dim();
    dims += (dims.empty() ? "" : " ") + b.label() + ":" + std::to_string(b.dim());
  }
  out.require(match, "blocks " + dims);
}

// 2 ------------------------------------------------------------------------------
void oracle_equivalence(Outcome& out) {
  for (auto [L, N] : {std::pair{4u, 4u}, std::pair{5u, 4u}}) {
    auto config = base_config();
    const auto report = run_oracle({L, N, 0.5}, config);
    out.require(report.max_abs_difference <= 1e-10,
                "L=" + std::to_string(L) + " N=" + std::to_string(N) + " D=" +
                    std::to_string(report.dimension) + " max|diff|=" + fmt(report.max_abs_difference, "%.2e"));
  }
}

// 3 ------------------------------------------------------------------------------
void degeneracy(Outcome& out) {
  const auto& set = spectra.at(0.5);
  double worst = 0.0;
  for (unsigned j = 1; j < 9; ++j) {
    const auto& a = set.blocks[set.find(std::to_string(j))].eigenvalues;
    const auto& b = set.blocks[set.find(std::to_string(9 - j))].eigenvalues;
    if (a.size() != b.size()) {
      out.require(false, "sizes differ for j=" + std::to_string(j));
      return;
    }
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  out.require(worst <= 1e-8, "max |E_j - E_{L-j}| = " + fmt(worst, "%.2e"));
}

// 4 ------------------------------------------------------------------------------
void goe_sector(Outcome& out) {
  const auto& set = spectra.at(0.5);
  const auto report = block_spacing(set, set.find("1"), base_config());
  out.require(std::abs(report.raw_gap_ratio - kGoeMeanGapRatio) <= 0.01,
              "<r>=" + fmt(report.raw_gap_ratio, "%.4f") + " (0.5307 +- 0.01)");
  const auto& h = report.histogram;
  out.require(h.chi2_poisson >= 5.0 * h.chi2_wigner,
              "chi2 Wigner " + fmt(h.chi2_wigner, "%.4f") + ", Poisson " + fmt(h.chi2_poisson, "%.4f") +
                  " (ratio " + fmt(h.chi2_poisson / h.chi2_wigner, "%.1f") + " >= 5)");
}

// 5 ------------------------------------------------------------------------------
void poisson_pooled(Outcome& out) {
  const auto& set = spectra.at(0.5);
  const auto config = base_config();
  const auto window = resolve_window(set, config);
  const auto groups = resolve_selection(set, BlockSelection::parse("groups"));
  const auto pooled = pooled_spacing(set, groups, window, config);
  out.require(std::abs(pooled.raw_gap_ratio - kPoissonMeanGapRatio) <= 0.02,
              "groups " + pooled.label + " <r>=" + fmt(pooled.raw_gap_ratio, "%.4f") + " (0.3863 +- 0.02)");
  const auto all = resolve_selection(set, BlockSelection::parse("all"));
  const auto everything = pooled_spacing(set, all, window, config);
  const double ratio = everything.histogram.density[0] / everything.histogram.poisson_ref[0];
  out.require(ratio >= 3.0, "all-sector first bin " + fmt(everything.histogram.density[0], "%.3f") +
                                " = " + fmt(ratio, "%.2f") + "x Poisson");
}

// 6 ------------------------------------------------------------------------------
void table_one(Outcome& out) {
  const auto& set = spectra.at(0.5);
  const auto config = base_config();
  const auto window = resolve_window(set, config);
  struct Row {
    std::string selection;
    std::size_t count;
    double asymptotic;
  };
  const Row rows[] = {{"1", 1174, 1.11e-3},   {"2", 1175, 1.13e-3}, {"3", 1178, 1.13e-3},
                      {"4", 1179, 1.13e-3},   {"9-even", 597, 2.23e-3},
                      {"9-odd", 574, 2.32e-3}, {"all", 10581, 0.210e-3}};
  for (const auto& row : rows) {
    const auto blocks = resolve_selection(set, BlockSelection::parse(row.selection));
    const auto table = select_levels(set, blocks, window);
    SequenceSpec spec;
    const double width = 2.0 * window.half_width;
    spec.total_density = static_cast<double>(table.slot_count()) / width;
    for (const auto& s : table.sequences) {
      spec.sequences.push_back({s.degeneracy, static_cast<double>(s.levels) / width, s.levels});
    }
    const auto dos = density_of_states(pool_levels(set, blocks), config.dos_bins);
    const double eta = effective_dimension(window, dos);
    const double s_inf = asymptotic_analytic(spec, MomentRatio::uniform(), eta);
    const double count_error = std::abs(double(table.slot_count()) - row.count) / row.count;
    const double s_error = std::abs(s_inf - row.asymptotic) / row.asymptotic;
    out.require(count_error <= 0.01 && s_error <= 0.03,
                row.selection + ": n=" + std::to_string(table.slot_count()) + " (" +
                    fmt(100 * count_error, "%.2f") + "%), S_inf=" + fmt(s_inf * 1e3, "%.4f") +
                    "e-3 (" + fmt(100 * s_error, "%.2f") + "%)");
  }
}

// 7 ------------------------------------------------------------------------------
void single_sector_hole(Outcome& out) {
  const auto& r = survival(0.5, "1");
  out.require(r.hole_deviation <= 0.10, "M=" + std::to_string(r.members) + " hole deviation " +
                                            fmt(100 * r.hole_deviation, "%.2f") + "% (<= 10%)");
  out.require(r.initial_decay_error <= 0.02,
              "initial decay error " + fmt(100 * r.initial_decay_error, "%.3f") + "% (<= 2%)");
  out.require(std::abs(r.long_time_ratio - 1.0) <= 0.05,
              "long-time mean / S_inf = " + fmt(r.long_time_ratio, "%.4f"));
}

// 8 ------------------------------------------------------------------------------
void full_space_hole(Outcome& out) {
  for (const double u : {0.5, 0.3}) {
    const auto& r = survival(u, "all");
    const double reference = 20.0 / (9.0 * r.eta);
    const double long_time = r.long_time_ratio * r.asymptotic;
    out.require(r.hole_deviation <= 0.10, "u=" + fmt(u) + " M=" + std::to_string(r.members) +
                                              " hole deviation " + fmt(100 * r.hole_deviation, "%.2f") + "%");
    out.require(std::abs(r.asymptotic / reference - 1.0) <= 0.05 &&
                    std::abs(r.numeric_asymptotic / reference - 1.0) <= 0.05 &&
                    std::abs(long_time / reference - 1.0) <= 0.05,
                "u=" + fmt(u) + " 20/(9eta)=" + fmt(reference, "%.4e") + ": analytic " +
                    fmt(r.asymptotic / reference, "%.4f") + "x, ensemble " +
                    fmt(r.numeric_asymptotic / reference, "%.4f") + "x, long-time " +
                    fmt(long_time / reference, "%.4f") + "x");
  }
}

// 9 ------------------------------------------------------------------------------
void integrability_contrast(Outcome& out) {
  for (const std::string selection : {"1", "all"}) {
    const auto& regular = survival(0.1, selection);
    out.require(regular.hole_deviation > 0.30 && regular.revival,
                "u=0.1 " + selection + ": deviation " + fmt(100 * regular.hole_deviation, "%.1f") +
                    "%, revival " + (regular.revival ? "yes" : "no"));
    const auto& chaotic = survival(0.3, selection);
    out.require(chaotic.hole_deviation <= 0.10,
                "u=0.3 " + selection + ": deviation " + fmt(100 * chaotic.hole_deviation, "%.2f") + "%");
  }
}

// 10 -----------------------------------------------------------------------------
void analytic_consistency(Outcome& out) {
  const double jump = std::abs(b2(1.0) - (std::log(3.0) - 1.0)) +
                      std::abs(b2(std::nextafter(1.0, 2.0)) - (std::log(3.0) - 1.0));
  out.require(jump <= 1e-14, "b2 branches at t=1 differ by " + fmt(jump, "%.1e"));

  std::mt19937_64 engine(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_zero = 0.0;
  double worst_single = 0.0;
  double worst_ring = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int draw = 0; draw < 200; ++draw) {
    SequenceSpec spec;
    const int count = 1 + static_cast<int>(8 * unit(engine));
    for (int s = 0; s < count; ++s) {
      spec.sequences.push_back({1u + static_cast<unsigned>(3 * unit(engine)), 1.0 + 800.0 * unit(engine), 0});
    }
    spec.total_density = spec.density();
    const double sigma = 0.1 + 4.0 * unit(engine);
    const double eta = 1.5 + 2.0 * sigma * spec.total_density * unit(engine);
    const std::vector<double> zero{0.0};
    worst_zero = std::max(worst_zero,
                          std::abs(survival_analytic(spec, sigma, eta, MomentRatio::uniform(), zero).values[0] - 1.0));

    const double nu = 10.0 + 3000.0 * unit(engine);
    const double eta_w = 2.0 * sigma * nu * (0.9 + 0.2 * unit(engine));
    const std::vector<double> t{std::pow(10.0, -3.0 + 7.0 * unit(engine))};
    const double q = 4.0 / 3.0;
    // one sequence, direct form
    const double s1 = q / eta_w;
    const double single = s1 + (1.0 - s1) / (eta_w - 1.0) *
                                   (eta_w * sinc_decay(t[0], sigma) - b2(t[0] / (two_pi * nu)));
    worst_single = std::max(worst_single, std::abs(survival_analytic(SequenceSpec::single(nu), sigma, eta_w,
                                                                     MomentRatio::uniform(), t).values[0] - single));
    // nine sites, direct form
    const double s9 = q / eta_w + 8.0 / 9.0 * (1.0 - q / eta_w) / (eta_w - 1.0);
    const double ring = s9 + (1.0 - q / eta_w) / (eta_w - 1.0) *
                                 (eta_w * sinc_decay(t[0], sigma) - 16.0 / 9.0 * b2(9.0 * t[0] / (two_pi * nu)) -
                                  1.0 / 9.0 * b2(9.0 * t[0] / (std::numbers::pi * nu)));
    worst_ring = std::max(worst_ring, std::abs(survival_analytic(SequenceSpec::ring(9, nu), sigma, eta_w,
                                                                 MomentRatio::uniform(), t).values[0] - ring));
  }
  out.require(worst_zero <= 1e-12, "max |S(0) - 1| = " + fmt(worst_zero, "%.1e"));
  out.require(worst_single <= 1e-12, "single sequence max diff " + fmt(worst_single, "%.1e"));
  out.require(worst_ring <= 1e-12, "nine-site max diff " + fmt(worst_ring, "%.1e"));
}

// 11 -----------------------------------------------------------------------------
void border_window(Outcome& out) {
  const auto& set = spectra.at(0.5);
  auto config = base_config();
  config.sweep_block = "1";
  config.sweep_levels = 600;
  config.sweep_positions = {0.5, 0.7, 1.0};
  const auto sweep = run_window_sweep(set, config);
  std::string detail;
  for (std::size_t w = 0; w < sweep.windows.size(); ++w) {
    const auto& r = sweep.windows[w];
    detail += (detail.empty() ? "" : ", ") + fmt(r.window.center, "%.2f") + "+-" +
              fmt(r.window.half_width, "%.2f") + ": " + fmt(100 * r.hole_deviation, "%.1f") + "%";
  }
  const double ratio = sweep.windows.back().hole_deviation / sweep.windows.front().hole_deviation;
  out.require(ratio >= 2.0, "windows " + detail + "; border/central = " + fmt(ratio, "%.2f"));
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"dimensions", dimensions},
      {"oracle equivalence", oracle_equivalence},
      {"structural degeneracy", degeneracy},
      {"GOE statistics in one sector", goe_sector},
      {"Poisson statistics across sectors", poisson_pooled},
      {"in-window counts and asymptotic values", table_one},
      {"single-sector correlation hole", single_sector_hole},
      {"full-space correlation hole", full_space_hole},
      {"integrability contrast", integrability_contrast},
      {"analytic self-consistency", analytic_consistency},
      {"border-of-spectrum deviation", border_window},
  };
  int failed = 0;
  int number = 0;
  for (const auto& [name, check] : criteria) {
    ++number;
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      check(outcome);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    failed += outcome.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", number, outcome.pass ? "PASS" : "FAIL", name,
                outcome.detail.str().c_str(), elapsed.count());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", number - failed, number);
  return failed == 0 ? 0 : 1;
}
