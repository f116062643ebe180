#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hbsm/fock.hpp"

namespace hbsm::testing {

// Random full-rank density matrix over `modes` with the given cutoff, kept
// inside the photon blocks a beamsplitter can hold (total <= n_max per pair).
inline MultiModeState random_state(std::vector<ModeLabel> modes, Truncation trunc, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const std::size_t m = modes.size();
  std::size_t dim = 1;
  for (std::size_t i = 0; i < m; ++i) dim *= trunc.local_dim();
  ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    const auto occ = basis_occupation(r, m, trunc);
    int total = 0;
    for (int n : occ) total += n;
    if (total > trunc.n_max()) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex{g(rng), g(rng)};
    }
  }
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return MultiModeState::from_matrix(std::move(modes), trunc, std::move(rho));
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace hbsm::testing
