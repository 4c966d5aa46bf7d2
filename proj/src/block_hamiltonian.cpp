#include "bhchaos/block_hamiltonian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bhchaos/error.hpp"

namespace bhchaos {

void ModelParams::validate() const {
  if (sites == 0) throw ConfigError("L must be at least 1");
  if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("u must lie in [0, 1]");
  (void)fock_dimension(sites, particles);
}

bool is_real_sector(const SymmetryBlock& block, unsigned sites) {
  return block.j == sites || 2 * block.j == sites;
}

namespace detail {

static void check_dense_cap(const SymmetryBlock& block, std::size_t cap) {
  if (block.dim() > cap) {
    throw ConfigError("block " + block.label() + " has dim " + std::to_string(block.dim()) +
                      " above the dense cap " + std::to_string(cap));
  }
}

template <typename Visitor>
void for_each_block_term(const ModelParams& params, const OrbitTable& table,
                         const SymmetryBlock& block, Visitor&& visit) {
  const auto& basis = table.basis();
  const auto& orbits = table.orbits();
  const unsigned sites = basis.sites();
  const double hopping = params.hopping();
  const double interaction = params.interaction();

  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> entry_of(orbits.size(), npos);
  std::vector<double> coefficient_of(orbits.size(), 0.0);
  for (std::size_t e = 0; e < block.dim(); ++e) {
    for (const auto& c : block.basis[e].components) {
      entry_of[c.orbit] = e;
      coefficient_of[c.orbit] = c.coefficient;
    }
  }

  for (std::size_t col = 0; col < block.dim(); ++col) {
    for (const auto& source : block.basis[col].components) {
      const auto& orbit = orbits[source.orbit];
      const FockState& rep = basis.state(orbit.representative);

      const double diagonal = interaction_energy(rep, interaction);
      if (diagonal != 0.0) visit(col, col, source.coefficient * source.coefficient * diagonal, 0);
      if (hopping == 0.0) continue;

      // <b;j|H|a;j> = sqrt(R_a/R_b) * sum_t amp_t exp(i kappa d_t)
      // for hops landing on S^{d_t}|rep_b>
      for (unsigned l = 0; l < sites; ++l) {
        const unsigned next = (l + 1) % sites;
        for (const auto& [from, to] : {std::pair{l, next}, std::pair{next, l}}) {
          const auto hop = apply_hop(rep, from, to);
          if (!hop) continue;
          const auto target = basis.index(hop->state);
          const auto b = table.orbit_of(target);
          const auto row = entry_of[b];
          if (row == npos) continue;
          const double ratio = std::sqrt(static_cast<double>(orbit.period) /
                                         static_cast<double>(orbits[b].period));
          visit(row, col,
                source.coefficient * coefficient_of[b] * (-hopping) * hop->amplitude * ratio,
                table.shift_of(target));
        }
      }
    }
  }
}

}  // namespace detail

template <typename Scalar>
DenseMatrix<Scalar> build_block_matrix(const ModelParams& params, const OrbitTable& orbits,
                                       const SymmetryBlock& block, std::size_t cap) {
  params.validate();
  detail::check_dense_cap(block, cap);
  const unsigned sites = orbits.basis().sites();
  const double kappa = quasimomentum(block.j, sites);
  constexpr bool is_complex = !std::is_floating_point_v<Scalar>;
  if (!is_complex && !is_real_sector(block, sites)) {
    throw ConfigError("block " + block.label() + " is complex; use a complex scalar");
  }

  const auto dim = static_cast<Eigen::Index>(block.dim());
  DenseMatrix<Scalar> h = DenseMatrix<Scalar>::Zero(dim, dim);
  detail::for_each_block_term(params, orbits, block,
                              [&](std::size_t row, std::size_t col, double value, std::size_t d) {
                                if (row < col) return;  // lower triangle only
                                if constexpr (is_complex) {
                                  h(row, col) += std::polar(value, kappa * static_cast<double>(d));
                                } else {
                                  // exp(i kappa d) is +-1 here
                                  const bool flip = (2 * block.j == sites) && (d % 2 == 1);
                                  h(row, col) += flip ? -value : value;
                                }
                              });
  if constexpr (is_complex) {
    for (Eigen::Index c = 0; c < dim; ++c) h(c, c) = h(c, c).real();
    h.template triangularView<Eigen::StrictlyUpper>() = h.adjoint();
  } else {
    h.template triangularView<Eigen::StrictlyUpper>() = h.transpose();
  }
  return h;
}

template DenseMatrix<double> build_block_matrix<double>(const ModelParams&, const OrbitTable&,
                                                        const SymmetryBlock&, std::size_t);
template DenseMatrix<std::complex<double>> build_block_matrix<std::complex<double>>(
    const ModelParams&, const OrbitTable&, const SymmetryBlock&, std::size_t);

SparseHamiltonian build_full_sparse(const ModelParams& params, const BasisIndex& basis,
                                    std::size_t cap) {
  params.validate();
  if (basis.size() > cap) {
    throw ConfigError("full-space dimension " + std::to_string(basis.size()) +
                      " above the oracle cap " + std::to_string(cap));
  }
  const unsigned sites = basis.sites();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(basis.size() * (2 * sites + 1));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& state = basis.state(k);
    const double diagonal = interaction_energy(state, params.interaction());
    if (diagonal != 0.0) triplets.emplace_back(k, k, diagonal);
    if (params.hopping() == 0.0) continue;
    for (unsigned l = 0; l < sites; ++l) {
      const unsigned next = (l + 1) % sites;
      for (const auto& [from, to] : {std::pair{l, next}, std::pair{next, l}}) {
        if (const auto hop = apply_hop(state, from, to)) {
          triplets.emplace_back(basis.index(hop->state), k, -params.hopping() * hop->amplitude);
        }
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SparseHamiltonian h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

SparseHamiltonian permutation_matrix(const BasisIndex& basis, FockState (*map)(const FockState&)) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    triplets.emplace_back(basis.index(map(basis.state(k))), k, 1.0);
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  SparseHamiltonian m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace bhchaos
