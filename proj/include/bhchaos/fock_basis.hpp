#ifndef BHCHAOS_FOCK_BASIS_HPP
#define BHCHAOS_FOCK_BASIS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bhchaos {

using Occupation = std::uint8_t;

/// Occupation-number state |n_1, ..., n_L> of spinless bosons on a ring.
struct FockState {
  std::vector<Occupation> n;

  std::size_t sites() const { return n.size(); }
  unsigned particles() const;

  auto operator<=>(const FockState&) const = default;
};

/// Number of ways to place N bosons on L sites, C(N+L-1, N).
/// Throws ConfigError when the value does not fit in 64 bits.
std::uint64_t fock_dimension(unsigned sites, unsigned particles);

/// Dense indexing of the Fock basis.
///
/// States are ordered lexicographically descending on the occupation vector,
/// so (N,0,...,0) has index 0 and (0,...,0,N) the last index. Lookup uses an
/// exact combinatorial rank, not a hash table.
class BasisIndex {
 public:
  BasisIndex(unsigned sites, unsigned particles);

  unsigned sites() const { return sites_; }
  unsigned particles() const { return particles_; }
  std::size_t size() const { return states_.size(); }

  const FockState& state(std::size_t index) const { return states_[index]; }
  const std::vector<FockState>& states() const { return states_; }

  /// Index of a state; throws ConfigError when the state is not in the basis.
  std::size_t index(const FockState& state) const;
  std::size_t index(std::span<const Occupation> occupations) const;

 private:
  unsigned sites_;
  unsigned particles_;
  std::vector<FockState> states_;
  // compositions_[k][m]: number of ways to put m bosons on k sites
  std::vector<std::vector<std::uint64_t>> compositions_;
};

struct HopResult {
  FockState state;
  double amplitude;
};

/// a^dagger_to a_from |state>. Site indices wrap modulo L.
/// Returns nullopt when the source site is empty.
std::optional<HopResult> apply_hop(const FockState& state, std::size_t from, std::size_t to);

/// (U/2) * sum_l n_l (n_l - 1)
double interaction_energy(const FockState& state, double interaction);

}  // namespace bhchaos

#endif  // BHCHAOS_FOCK_BASIS_HPP
