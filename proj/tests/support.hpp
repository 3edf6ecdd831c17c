#pragma once

#include <cmath>
#include <vector>

#include "eclim/eclim.hpp"

namespace eclim::testing {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Matrix lowering() {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}
inline ReferenceHamiltonian qubit_ref() { return ReferenceHamiltonian::diagonal({0.0, 1.0}); }

/// Kraus operators cut from a Haar isometry; scaled below 1 unless trace preserving.
inline KrausChannel random_channel(Rng& rng, Eigen::Index din, Eigen::Index dout, int n_kraus, bool tp = true) {
  const Matrix v = random::haar_isometry(rng, dout * n_kraus, din);
  const double scale = tp ? 1.0 : std::sqrt(rng.uniform(0.3, 1.0));
  std::vector<Matrix> kraus;
  for (int a = 0; a < n_kraus; ++a) kraus.push_back(scale * v.middleRows(a * dout, dout));
  return KrausChannel(din, dout, std::move(kraus));
}

/// H with |H| = h_norm plus n_l Lindblad operators of Frobenius norm l_norm.
inline LindbladGenerator random_generator(Rng& rng, Eigen::Index d, double h_norm = 1.0, int n_l = 2,
                                          double l_norm = 0.7) {
  std::vector<Matrix> ls;
  for (int i = 0; i < n_l; ++i) {
    Matrix l = rng.ginibre(d, d);
    ls.push_back(l * (l_norm / l.norm()));
  }
  return LindbladGenerator::from_hamiltonian(random::hermitian_with_norm(rng, d, h_norm), std::move(ls));
}

/// Max of tr[M psi psi*] over random unit vectors with energy at most e (pushed into the
/// feasible set by mixing with the ground state).
inline double sampled_primal(const HermitianMatrix& m, const ReferenceHamiltonian& g, double e, Rng& rng, int samples) {
  double best = -1e300;
  for (int s = 0; s < samples; ++s) {
    Vector psi = random::haar_state(rng, g.dim());
    psi = fit_energy(psi, g, e);
    if (energy(g, psi) > e * (1.0 + 1e-12) + 1e-15) continue;
    best = std::max(best, psi.dot(m.matrix() * psi).real());
  }
  return best;
}

inline double rel_gap(double a, double b) { return (a - b) / std::max(1.0, std::abs(a)); }

}  // namespace eclim::testing
