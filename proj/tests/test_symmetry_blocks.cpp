#include <doctest.h>

#include <numeric>

#include "bhchaos/block_hamiltonian.hpp"
#include "bhchaos/symmetry_blocks.hpp"
#include "oracle.hpp"

using namespace bhchaos;

namespace {

FockState make(std::initializer_list<int> n) {
  FockState s;
  for (int v : n) s.n.push_back(static_cast<Occupation>(v));
  return s;
}

// Block dimensions from projector traces on the full space.
std::vector<std::size_t> oracle_dims(int L, int N) {
  const Eigen::MatrixXd S = oracle::shift_matrix(L, N);
  const Eigen::MatrixXd P = oracle::parity_matrix(L, N);
  const auto D = S.rows();
  std::vector<std::size_t> dims;
  for (int j = 1; j <= L; ++j) {
    const double kappa = 2.0 * M_PI * j / L;
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(D, D);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(D, D);
    for (int r = 0; r < L; ++r) {
      proj += std::polar(1.0 / L, kappa * r) * power.cast<std::complex<double>>();
      power = S * power;
    }
    const bool real = j == L || 2 * j == L;
    if (!real) {
      dims.push_back(static_cast<std::size_t>(std::lround(proj.trace().real())));
      continue;
    }
    for (double sign : {1.0, -1.0}) {
      const Eigen::MatrixXcd split =
          proj * (0.5 * (Eigen::MatrixXd::Identity(D, D) + sign * P)).cast<std::complex<double>>();
      dims.push_back(static_cast<std::size_t>(std::lround(split.trace().real())));
    }
  }
  return dims;
}

}  // namespace

TEST_CASE("shift and parity") {
  CHECK(shift(make({1, 2, 0})) == make({0, 1, 2}));
  CHECK(parity(make({1, 2, 0})) == make({0, 2, 1}));
  auto s = make({3, 0, 1, 2});
  auto t = s;
  for (int r = 0; r < 4; ++r) t = shift(t);
  CHECK(t == s);
  CHECK(parity(parity(s)) == s);
}

TEST_CASE("orbits partition the basis") {
  const BasisIndex basis(6, 4);
  const OrbitTable table(basis);
  std::size_t total = 0;
  for (const auto& orbit : table.orbits()) {
    CHECK(6 % orbit.period == 0);
    CHECK(orbit.members.size() == orbit.period);
    total += orbit.period;
    for (std::size_t r = 0; r < orbit.period; ++r) {
      CHECK(orbit.members[r] >= orbit.representative);
      CHECK(table.shift_of(orbit.members[r]) == r);
    }
  }
  CHECK(total == basis.size());
}

TEST_CASE("momentum compatibility") {
  CHECK(momentum_compatible(3, 3, 9));
  CHECK_FALSE(momentum_compatible(3, 1, 9));
  CHECK(momentum_compatible(1, 9, 9));
  CHECK(momentum_basis_entry(Orbit{0, 4, {}}, 2, 4) == doctest::Approx(0.5));
  CHECK_THROWS(momentum_basis_entry(Orbit{0, 2, {}}, 1, 4));
}

TEST_CASE("block dimensions agree with projector traces") {
  for (auto [L, N] : {std::pair{3, 3}, std::pair{4, 3}, std::pair{4, 4}, std::pair{5, 4},
                      std::pair{6, 3}}) {
    CAPTURE(L);
    CAPTURE(N);
    const BasisIndex basis(L, N);
    const OrbitTable table(basis);
    const auto decomposition = build_blocks(table);
    std::vector<std::size_t> dims;
    for (const auto& b : decomposition.blocks) dims.push_back(b.dim());
    // zero-dimensional parity halves are dropped by the library
    auto expected = oracle_dims(L, N);
    std::erase(expected, 0);
    CHECK(dims == expected);
  }
}

TEST_CASE("block dimensions for nine sites and nine bosons") {
  const BasisIndex basis(9, 9);
  const OrbitTable table(basis);
  const auto decomposition = build_blocks(table);
  REQUIRE(decomposition.blocks.size() == 10);
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
  for (const auto& b : decomposition.blocks) {
    labels.push_back(b.label());
    dims.push_back(b.dim());
  }
  CHECK(labels == std::vector<std::string>{"1", "2", "3", "4", "5", "6", "7", "8", "9-even", "9-odd"});
  CHECK(dims == std::vector<std::size_t>{2700, 2700, 2703, 2700, 2700, 2703, 2700, 2700, 1387, 1317});
  CHECK(decomposition.degeneracies.groups.size() == 6);
  CHECK(decomposition.degeneracies.multiplicity(0) == 2);
  CHECK(decomposition.degeneracies.group_of(0) == decomposition.degeneracies.group_of(7));
  CHECK(decomposition.degeneracies.multiplicity(8) == 1);
}

TEST_CASE("block basis vectors are normalized") {
  const BasisIndex basis(6, 6);
  const OrbitTable table(basis);
  for (const auto& block : build_blocks(table).blocks) {
    for (const auto& entry : block.basis) {
      double norm = 0.0;
      for (const auto& c : entry.components) norm += c.coefficient * c.coefficient;
      CHECK(norm == doctest::Approx(1.0));
    }
  }
}
