#include "bhchaos/symmetry_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bhchaos/error.hpp"

namespace bhchaos {

FockState shift(const FockState& state) {
  FockState out = state;
  std::rotate(out.n.rbegin(), out.n.rbegin() + 1, out.n.rend());
  return out;
}

FockState parity(const FockState& state) {
  FockState out = state;
  std::reverse(out.n.begin(), out.n.end());
  return out;
}

std::string to_string(Parity parity) {
  switch (parity) {
    case Parity::even:
      return "even";
    case Parity::odd:
      return "odd";
    default:
      return "none";
  }
}

double quasimomentum(unsigned j, unsigned sites) {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(sites);
}

bool momentum_compatible(std::size_t period, unsigned j, unsigned sites) {
  return (static_cast<std::size_t>(j) * period) % sites == 0;
}

double momentum_basis_entry(const Orbit& orbit, unsigned j, unsigned sites) {
  if (!momentum_compatible(orbit.period, j, sites)) {
    throw ConfigError("orbit of period " + std::to_string(orbit.period) +
                      " has no component in sector j=" + std::to_string(j));
  }
  return 1.0 / std::sqrt(static_cast<double>(orbit.period));
}

std::string SymmetryBlock::label() const {
  auto out = std::to_string(j);
  if (parity != Parity::none) out += "-" + to_string(parity);
  return out;
}

std::size_t DegeneracyMap::group_of(std::size_t block) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), block) != groups[g].end()) return g;
  }
  throw ConfigError("block " + std::to_string(block) + " not in degeneracy map");
}

OrbitTable::OrbitTable(const BasisIndex& basis)
    : basis_(&basis),
      orbit_of_(basis.size(), static_cast<std::size_t>(-1)),
      shift_of_(basis.size(), 0) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (orbit_of_[i] != static_cast<std::size_t>(-1)) continue;
    // ascending scan: the first unvisited member is the minimum-index one
    Orbit orbit{i, 0, {i}};
    const auto id = orbits_.size();
    orbit_of_[i] = id;
    FockState current = shift(basis.state(i));
    while (current != basis.state(i)) {
      const auto k = basis.index(current);
      orbit_of_[k] = id;
      shift_of_[k] = orbit.members.size();
      orbit.members.push_back(k);
      current = shift(current);
    }
    orbit.period = orbit.members.size();
    orbits_.push_back(std::move(orbit));
  }
}

BlockDecomposition build_blocks(const OrbitTable& table) {
  const auto& basis = table.basis();
  const unsigned sites = basis.sites();
  const auto& orbits = table.orbits();
  BlockDecomposition out;
  std::vector<std::size_t> first_block_of_j(sites + 1, 0);
  std::vector<bool> split(sites + 1, false);

  for (unsigned j = 1; j <= sites; ++j) {
    first_block_of_j[j] = out.blocks.size();
    const bool real_sector = (j == sites) || (2 * j == sites);
    if (!real_sector) {
      SymmetryBlock block;
      block.j = j;
      block.degeneracy_partner = sites - j;
      for (std::size_t a = 0; a < orbits.size(); ++a) {
        if (momentum_compatible(orbits[a].period, j, sites)) {
          block.basis.push_back({{{a, 1.0}}});
        }
      }
      if (block.dim() > 0) out.blocks.push_back(std::move(block));
      continue;
    }

    split[j] = true;
    SymmetryBlock even{j, Parity::even, {}, std::nullopt};
    SymmetryBlock odd{j, Parity::odd, {}, std::nullopt};
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (std::size_t a = 0; a < orbits.size(); ++a) {
      if (!momentum_compatible(orbits[a].period, j, sites)) continue;
      // P|a;j> = chi |b;j> with chi = exp(-i kappa p) = +-1
      const auto mirrored = basis.index(parity(basis.state(orbits[a].representative)));
      const auto b = table.orbit_of(mirrored);
      const auto p = table.shift_of(mirrored);
      const double chi = (j == sites || p % 2 == 0) ? 1.0 : -1.0;
      if (b == a) {
        (chi > 0 ? even : odd).basis.push_back({{{a, 1.0}}});
      } else if (a < b) {
        even.basis.push_back({{{a, inv_sqrt2}, {b, chi * inv_sqrt2}}});
        odd.basis.push_back({{{a, inv_sqrt2}, {b, -chi * inv_sqrt2}}});
      }
    }
    if (even.dim() > 0) out.blocks.push_back(std::move(even));
    if (odd.dim() > 0) out.blocks.push_back(std::move(odd));
  }

  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto& block = out.blocks[b];
    if (split[block.j] || !block.degeneracy_partner) {
      out.degeneracies.groups.push_back({b});
      continue;
    }
    const unsigned partner = *block.degeneracy_partner;
    if (partner < block.j) continue;
    out.degeneracies.groups.push_back({b, first_block_of_j[partner]});
  }
  return out;
}

}  // namespace bhchaos
