#include "bhchaos/fock_basis.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bhchaos/error.hpp"

namespace bhchaos {

unsigned FockState::particles() const {
  return std::accumulate(n.begin(), n.end(), 0u);
}

std::uint64_t fock_dimension(unsigned sites, unsigned particles) {
  if (sites == 0) throw ConfigError("Fock basis needs at least one site");
  // C(N+L-1, k) with k = min(N, L-1), built incrementally so every partial
  // product is itself a binomial coefficient.
  const unsigned top = particles + sites - 1;
  const unsigned k = std::min(particles, sites - 1);
  unsigned __int128 value = 1;
  for (unsigned i = 1; i <= k; ++i) {
    value = value * (top - k + i) / i;
    if (value > std::numeric_limits<std::uint64_t>::max()) {
      throw ConfigError("Fock dimension C(" + std::to_string(top) + "," + std::to_string(k) +
                        ") overflows the 64-bit index type");
    }
  }
  return static_cast<std::uint64_t>(value);
}

namespace {

void enumerate(unsigned site, unsigned remaining, FockState& current,
               std::vector<FockState>& out) {
  const auto last = current.n.size() - 1;
  if (site == last) {
    current.n[site] = static_cast<Occupation>(remaining);
    out.push_back(current);
    return;
  }
  for (unsigned m = remaining + 1; m-- > 0;) {
    current.n[site] = static_cast<Occupation>(m);
    enumerate(site + 1, remaining - m, current, out);
  }
}

}  // namespace

BasisIndex::BasisIndex(unsigned sites, unsigned particles)
    : sites_(sites), particles_(particles) {
  if (particles > std::numeric_limits<Occupation>::max()) {
    throw ConfigError("at most 255 bosons are supported");
  }
  const auto dim = fock_dimension(sites, particles);
  if (dim > std::numeric_limits<std::size_t>::max() / sizeof(FockState)) {
    throw ConfigError("Fock dimension too large to enumerate");
  }

  compositions_.assign(sites + 1, std::vector<std::uint64_t>(particles + 1, 0));
  compositions_[0][0] = 1;
  for (unsigned k = 1; k <= sites; ++k) {
    for (unsigned m = 0; m <= particles; ++m) {
      // place j bosons on the first of k sites
      std::uint64_t total = 0;
      for (unsigned j = 0; j <= m; ++j) total += compositions_[k - 1][m - j];
      compositions_[k][m] = total;
    }
  }

  states_.reserve(static_cast<std::size_t>(dim));
  FockState scratch{std::vector<Occupation>(sites, 0)};
  enumerate(0, particles, scratch, states_);
}

std::size_t BasisIndex::index(const FockState& state) const {
  return index(std::span<const Occupation>(state.n));
}

std::size_t BasisIndex::index(std::span<const Occupation> occupations) const {
  if (occupations.size() != sites_) throw ConfigError("state has wrong number of sites");
  std::uint64_t rank = 0;
  unsigned remaining = particles_;
  for (std::size_t i = 0; i < sites_; ++i) {
    const unsigned ni = occupations[i];
    if (ni > remaining) throw ConfigError("state has wrong particle number");
    if (i + 1 == sites_) {
      if (ni != remaining) throw ConfigError("state has wrong particle number");
      break;
    }
    const auto rest = sites_ - i - 1;
    // states with a larger occupation here come first
    for (unsigned m = ni + 1; m <= remaining; ++m) rank += compositions_[rest][remaining - m];
    remaining -= ni;
  }
  return static_cast<std::size_t>(rank);
}

std::optional<HopResult> apply_hop(const FockState& state, std::size_t from, std::size_t to) {
  const auto sites = state.n.size();
  from %= sites;
  to %= sites;
  const double n_from = state.n[from];
  if (n_from == 0) return std::nullopt;
  if (from == to) return HopResult{state, n_from};
  FockState out = state;
  const double n_to = out.n[to];
  --out.n[from];
  ++out.n[to];
  return HopResult{std::move(out), std::sqrt(n_from * (n_to + 1.0))};
}

double interaction_energy(const FockState& state, double interaction) {
  double pairs = 0.0;
  for (const auto ni : state.n) pairs += static_cast<double>(ni) * (ni - 1.0);
  return 0.5 * interaction * pairs;
}

}  // namespace bhchaos
