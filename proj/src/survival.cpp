#include "bhchaos/survival.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bhchaos {

std::size_t LevelTable::slot_count() const {
  std::size_t total = 0;
  for (const auto& level : levels) total += level.slots;
  return total;
}

LevelTable select_levels(const SpectrumSet& set, std::span<const std::size_t> blocks,
                         const EnergyWindow& window) {
  window.validate();
  if (blocks.empty()) throw ConfigError("empty block selection");
  LevelTable table;
  table.window = window;
  // group the selection by degeneracy group, keeping first-selected order
  std::vector<std::size_t> group_of_sequence;
  for (const auto b : blocks) {
    if (b >= set.blocks.size()) throw ConfigError("block index out of range");
    const auto g = set.degeneracies.group_of(b);
    const auto it = std::find(group_of_sequence.begin(), group_of_sequence.end(), g);
    if (it == group_of_sequence.end()) {
      group_of_sequence.push_back(g);
      table.sequences.push_back({b, 1, 0});
    } else {
      auto& sequence = table.sequences[static_cast<std::size_t>(it - group_of_sequence.begin())];
      ++sequence.degeneracy;
      sequence.block = std::min(sequence.block, b);
    }
  }
  for (std::size_t s = 0; s < table.sequences.size(); ++s) {
    auto& sequence = table.sequences[s];
    for (const double e : set.blocks[sequence.block].eigenvalues) {
      if (!window.contains(e)) continue;
      table.levels.push_back({e, sequence.degeneracy, s});
      ++sequence.levels;
    }
  }
  if (table.levels.empty()) throw NumericalError("energy window contains no levels");
  std::stable_sort(table.levels.begin(), table.levels.end(),
                   [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return table;
}

RandomStateEnsemble::RandomStateEnsemble(LevelTable table, std::size_t members,
                                         const DosModel& dos, std::uint64_t seed)
    : table_(std::move(table)), members_(members), seed_(seed) {
  if (members_ == 0) members_ = table_.slot_count();
  const double rho = 1.0 / (2.0 * table_.window.half_width);
  shaping_.reserve(table_.slot_count());
  for (const auto& level : table_.levels) {
    const double nu = dos(level.energy);
    if (!(nu > 0.0) || !std::isfinite(nu)) {
      throw NumericalError("density of states vanishes at an in-window level");
    }
    for (unsigned m = 0; m < level.slots; ++m) shaping_.push_back(rho / nu);
  }
}

std::vector<double> RandomStateEnsemble::weights(std::size_t member) const {
  const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  const std::uint64_t m = member;
  std::seed_seq sequence{lo(seed_), hi(seed_), lo(m), hi(m)};
  std::mt19937_64 engine(sequence);
  std::vector<double> out(shaping_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double r = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    out[k] = r * shaping_[k];
    total += out[k];
  }
  if (!(total > 0.0)) {
    // every draw was zero: fall back to the profile itself
    std::copy(shaping_.begin(), shaping_.end(), out.begin());
    total = 0.0;
    for (const double w : out) total += w;
  }
  for (auto& w : out) w /= total;
  return out;
}

namespace {

// per-level weight sums of a member (coherent slots collapse onto one level)
Eigen::VectorXd level_weights(std::span<const double> weights, const LevelTable& table) {
  if (weights.size() != table.slot_count()) throw ConfigError("weights do not match level table");
  Eigen::VectorXd out(static_cast<Eigen::Index>(table.levels.size()));
  std::size_t slot = 0;
  for (std::size_t k = 0; k < table.levels.size(); ++k) {
    double sum = 0.0;
    for (unsigned m = 0; m < table.levels[k].slots; ++m) sum += weights[slot++];
    out(static_cast<Eigen::Index>(k)) = sum;
  }
  return out;
}

struct PhaseTable {
  Eigen::MatrixXd cosines;  // levels x times
  Eigen::MatrixXd sines;
};

PhaseTable phases(const LevelTable& table, std::span<const double> times) {
  const auto levels = static_cast<Eigen::Index>(table.levels.size());
  const auto steps = static_cast<Eigen::Index>(times.size());
  PhaseTable out{Eigen::MatrixXd(levels, steps), Eigen::MatrixXd(levels, steps)};
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index k = 0; k < levels; ++k) {
      const double phase = table.levels[static_cast<std::size_t>(k)].energy *
                           times[static_cast<std::size_t>(t)];
      out.cosines(k, t) = std::cos(phase);
      out.sines(k, t) = std::sin(phase);
    }
  }
  return out;
}

}  // namespace

SurvivalCurve survival_numeric(std::span<const double> weights, const LevelTable& table,
                               std::span<const double> times) {
  const Eigen::RowVectorXd w = level_weights(weights, table).transpose();
  const auto table_phases = phases(table, times);
  const Eigen::RowVectorXd re = w * table_phases.cosines;
  const Eigen::RowVectorXd im = w * table_phases.sines;
  SurvivalCurve out;
  out.kind = SurvivalCurve::Kind::single_member;
  out.times.assign(times.begin(), times.end());
  out.values.resize(times.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    out.values[t] = std::min(1.0, re(i) * re(i) + im(i) * im(i));
  }
  return out;
}

double asymptotic_value(std::span<const double> weights, const LevelTable& table) {
  return level_weights(weights, table).squaredNorm();
}

EnsembleRun run_ensemble(const RandomStateEnsemble& ensemble, std::span<const double> times,
                         bool envelope) {
  constexpr std::size_t kMemberChunk = 128;
  constexpr std::size_t kTimeChunk = 1024;
  const auto& table = ensemble.table();
  const auto levels = static_cast<Eigen::Index>(table.levels.size());
  const auto members = ensemble.members();

  EnsembleRun run;
  run.mean.kind = SurvivalCurve::Kind::ensemble_mean;
  run.mean.times.assign(times.begin(), times.end());
  run.mean.values.assign(times.size(), 0.0);
  if (envelope) {
    run.member_lo.resize(times.size());
    run.member_hi.resize(times.size());
  }
  const double scale = 1.0 / static_cast<double>(members);
  const auto lo_rank = static_cast<std::size_t>(0.05 * static_cast<double>(members - 1));
  const auto hi_rank = static_cast<std::size_t>(0.95 * static_cast<double>(members - 1));

  // Time chunks outermost keep the phase table small; member weights are
  // regenerated per chunk from their seeds.
  Eigen::MatrixXd w(static_cast<Eigen::Index>(std::min(kMemberChunk, members)), levels);
  Eigen::MatrixXd all;
  std::vector<double> column(envelope ? members : 0);
  double asymptotic_sum = 0.0;
  for (std::size_t t0 = 0; t0 < times.size(); t0 += kTimeChunk) {
    const auto steps = std::min(kTimeChunk, times.size() - t0);
    const auto table_phases = phases(table, times.subspan(t0, steps));
    const auto cols = static_cast<Eigen::Index>(steps);
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(cols);
    if (envelope) all.resize(static_cast<Eigen::Index>(members), cols);
    for (std::size_t first = 0; first < members; first += kMemberChunk) {
      const auto rows = static_cast<Eigen::Index>(std::min(kMemberChunk, members - first));
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto member_weights = ensemble.weights(first + static_cast<std::size_t>(r));
        w.row(r) = level_weights(member_weights, table).transpose();
        if (t0 == 0) asymptotic_sum += w.row(r).squaredNorm();
      }
      const Eigen::MatrixXd re = w.topRows(rows) * table_phases.cosines;
      const Eigen::MatrixXd im = w.topRows(rows) * table_phases.sines;
      const Eigen::MatrixXd sp = (re.array().square() + im.array().square()).min(1.0).matrix();
      for (Eigen::Index r = 0; r < rows; ++r) sum += sp.row(r);
      if (envelope) all.middleRows(static_cast<Eigen::Index>(first), rows) = sp;
    }
    for (Eigen::Index t = 0; t < cols; ++t) {
      const auto k = t0 + static_cast<std::size_t>(t);
      run.mean.values[k] = sum(t) * scale;
      if (!envelope) continue;
      for (std::size_t m = 0; m < members; ++m) column[m] = all(static_cast<Eigen::Index>(m), t);
      std::nth_element(column.begin(), column.begin() + lo_rank, column.end());
      run.member_lo[k] = column[lo_rank];
      std::nth_element(column.begin(), column.begin() + hi_rank, column.end());
      run.member_hi[k] = column[hi_rank];
    }
  }
  if (times.empty()) {
    for (std::size_t m = 0; m < members; ++m) asymptotic_sum += asymptotic_value(ensemble.weights(m), table);
  }
  run.mean_asymptotic = asymptotic_sum * scale;
  return run;
}

double time_average(const SurvivalCurve& curve, double t_lo, double t_hi) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve.times[k] < t_lo || curve.times[k] > t_hi) continue;
    total += curve.values[k];
    ++count;
  }
  if (count == 0) throw ConfigError("no samples inside the averaging range");
  return total / static_cast<double>(count);
}

}  // namespace bhchaos
