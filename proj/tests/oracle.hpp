#ifndef BHCHAOS_TESTS_ORACLE_HPP
#define BHCHAOS_TESTS_ORACLE_HPP

// Brute-force references, written without the library's basis or block code.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Occ = std::vector<int>;

inline void enumerate(int sites, int remaining, Occ& current, std::vector<Occ>& out) {
  if (static_cast<int>(current.size()) == sites - 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    current.push_back(n);
    enumerate(sites, remaining - n, current, out);
    current.pop_back();
  }
}

inline std::vector<Occ> states(int sites, int particles) {
  std::vector<Occ> out;
  Occ current;
  enumerate(sites, particles, current, out);
  return out;
}

inline std::map<Occ, int> index_of(const std::vector<Occ>& basis) {
  std::map<Occ, int> out;
  for (int k = 0; k < static_cast<int>(basis.size()); ++k) out[basis[k]] = k;
  return out;
}

// H = -J sum (b+_l b_l+1 + h.c.) + U/2 sum n(n-1), periodic
inline Eigen::MatrixXd hamiltonian(int sites, int particles, double u) {
  const auto basis = states(sites, particles);
  const auto index = index_of(basis);
  const double hop = 1.0 - u;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
    const auto& s = basis[a];
    for (int l = 0; l < sites; ++l) h(a, a) += 0.5 * u * s[l] * (s[l] - 1);
    for (int l = 0; l < sites; ++l) {
      const int r = (l + 1) % sites;
      if (sites == 2 && l == 1) break;  // the single bond of a two-site ring
      for (auto [from, to] : {std::pair{l, r}, std::pair{r, l}}) {
        if (s[from] == 0) continue;
        Occ t = s;
        const double amp = std::sqrt(double(t[from]) * (t[to] + 1));
        --t[from];
        ++t[to];
        h(index.at(t), a) -= hop * amp;
      }
    }
  }
  return h;
}

inline Occ rotate(const Occ& s) {
  Occ t(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) t[(l + 1) % s.size()] = s[l];
  return t;
}

inline Eigen::MatrixXd shift_matrix(int sites, int particles) {
  const auto basis = states(sites, particles);
  const auto index = index_of(basis);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int a = 0; a < static_cast<int>(basis.size()); ++a) p(index.at(rotate(basis[a])), a) = 1.0;
  return p;
}

inline Eigen::MatrixXd parity_matrix(int sites, int particles) {
  const auto basis = states(sites, particles);
  const auto index = index_of(basis);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
    Occ t(basis[a].rbegin(), basis[a].rend());
    p(index.at(t), a) = 1.0;
  }
  return p;
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace oracle

#endif
