#ifndef BHCHAOS_BLOCK_HAMILTONIAN_HPP
#define BHCHAOS_BLOCK_HAMILTONIAN_HPP

#include <complex>
#include <cstddef>
#include <type_traits>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "bhchaos/fock_basis.hpp"
#include "bhchaos/symmetry_blocks.hpp"

namespace bhchaos {

/// Ring Bose-Hubbard parameters in the u-parametrization: U = u, J = 1 - u.
struct ModelParams {
  unsigned sites = 9;
  unsigned particles = 9;
  double u = 0.5;

  double hopping() const { return 1.0 - u; }
  double interaction() const { return u; }
  /// Throws ConfigError unless 0 <= u <= 1 and sites >= 1.
  void validate() const;
};

inline constexpr std::size_t kDefaultDenseCap = 5000;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using SparseHamiltonian = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Whether the block's matrix is real (kappa in {0, pi}).
bool is_real_sector(const SymmetryBlock& block, unsigned sites);

/// Bose-Hubbard Hamiltonian restricted to one symmetry block, in the
/// symmetry-adapted basis of the block. The lower triangle is assembled and
/// mirrored, so the result is exactly Hermitian.
///
/// Scalar may be double only for real sectors; std::complex<double> works for
/// every block. Throws ConfigError when dim exceeds `cap`.
template <typename Scalar>
DenseMatrix<Scalar> build_block_matrix(const ModelParams& params, const OrbitTable& orbits,
                                       const SymmetryBlock& block,
                                       std::size_t cap = kDefaultDenseCap);

/// Full-space Hamiltonian in the Fock basis (oracle for the block route).
SparseHamiltonian build_full_sparse(const ModelParams& params, const BasisIndex& basis,
                                    std::size_t cap = kDefaultDenseCap);

/// Permutation matrix of a state map (shift or parity) on the Fock basis.
SparseHamiltonian permutation_matrix(const BasisIndex& basis, FockState (*map)(const FockState&));

extern template DenseMatrix<double> build_block_matrix<double>(const ModelParams&,
                                                               const OrbitTable&,
                                                               const SymmetryBlock&, std::size_t);
extern template DenseMatrix<std::complex<double>> build_block_matrix<std::complex<double>>(
    const ModelParams&, const OrbitTable&, const SymmetryBlock&, std::size_t);

}  // namespace bhchaos

#endif  // BHCHAOS_BLOCK_HAMILTONIAN_HPP
