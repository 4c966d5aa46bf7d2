#ifndef BHCHAOS_SYMMETRY_BLOCKS_HPP
#define BHCHAOS_SYMMETRY_BLOCKS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bhchaos/fock_basis.hpp"

namespace bhchaos {

/// Cyclic shift S: (n_1, ..., n_L) -> (n_L, n_1, ..., n_{L-1}).
FockState shift(const FockState& state);

/// Site reversal P: (n_1, ..., n_L) -> (n_L, ..., n_1).
FockState parity(const FockState& state);

/// Translation orbit of a Fock state. Members are ordered by shift power:
/// members[r] = S^r |representative>.
struct Orbit {
  std::size_t representative;  // basis index, smallest index among the members
  std::size_t period;          // smallest R > 0 with S^R |rep> = |rep>
  std::vector<std::size_t> members;
};

enum class Parity { none, even, odd };

std::string to_string(Parity parity);

/// Quasimomentum kappa_j = 2 pi j / L, j in 1..L.
double quasimomentum(unsigned j, unsigned sites);

/// Whether orbit period R supports quasimomentum j, i.e. j R = 0 (mod L).
bool momentum_compatible(std::size_t period, unsigned j, unsigned sites);

/// Per-member amplitude 1/sqrt(R) of the unit-norm state
/// |orbit; j> = R^{-1/2} sum_r exp(-i kappa_j r) S^r |rep>.
/// Throws ConfigError for incompatible (orbit, j).
double momentum_basis_entry(const Orbit& orbit, unsigned j, unsigned sites);

/// One basis vector of a symmetry block: a combination of at most two
/// momentum states, sum_c coefficient_c |orbit_c; j>.
struct BlockBasisEntry {
  struct Component {
    std::size_t orbit;
    double coefficient;
  };
  std::vector<Component> components;
};

struct SymmetryBlock {
  unsigned j = 0;
  Parity parity = Parity::none;
  std::vector<BlockBasisEntry> basis;
  std::optional<unsigned> degeneracy_partner;  // j' = L - j

  std::size_t dim() const { return basis.size(); }
  /// "1", "8", "9-even", ...
  std::string label() const;
};

/// Blocks whose spectra coincide by symmetry: {j, L-j} pairs plus singletons.
struct DegeneracyMap {
  std::vector<std::vector<std::size_t>> groups;  // indices into the block list

  std::size_t group_of(std::size_t block) const;
  std::size_t multiplicity(std::size_t block) const { return groups[group_of(block)].size(); }
};

/// Orbit decomposition of a Fock basis under the shift operator.
class OrbitTable {
 public:
  explicit OrbitTable(const BasisIndex& basis);

  const BasisIndex& basis() const { return *basis_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  std::size_t orbit_of(std::size_t state) const { return orbit_of_[state]; }
  /// d such that state = S^d |rep of its orbit>.
  std::size_t shift_of(std::size_t state) const { return shift_of_[state]; }

 private:
  const BasisIndex* basis_;
  std::vector<Orbit> orbits_;
  std::vector<std::size_t> orbit_of_;
  std::vector<std::size_t> shift_of_;
};

struct BlockDecomposition {
  std::vector<SymmetryBlock> blocks;
  DegeneracyMap degeneracies;
};

/// Partitions the basis into quasimomentum sectors j = 1..L. Sectors with
/// kappa in {0, pi} are split into even and odd parity blocks; empty blocks
/// are dropped. Block order: j ascending, even before odd.
BlockDecomposition build_blocks(const OrbitTable& orbits);

}  // namespace bhchaos

#endif  // BHCHAOS_SYMMETRY_BLOCKS_HPP
