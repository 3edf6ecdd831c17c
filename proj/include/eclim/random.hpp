#pragma once

#include <cstdint>
#include <random>

#include "eclim/linalg.hpp"
#include "eclim/opcore.hpp"

namespace eclim {

/// Seeded source for every randomized routine; deterministic given the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * uniform_(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    Matrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = complex_normal();
    return a;
  }

  RealMatrix real_normal(Eigen::Index rows, Eigen::Index cols) {
    RealMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = normal();
    return a;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

namespace random {

/// Haar-distributed unit vector.
inline Vector haar_state(Rng& rng, Eigen::Index d) {
  Vector v = rng.ginibre(d, 1).col(0);
  return v / v.norm();
}

inline Matrix haar_unitary(Rng& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(rng.ginibre(d, d));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

/// Isometry of shape rows x cols (rows >= cols), Haar-distributed.
inline Matrix haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::HouseholderQR<Matrix> qr(rng.ginibre(rows, cols));
  return Matrix(qr.householderQ()).leftCols(cols);
}

/// Complex Gaussian entries, Hermitized, rescaled to the given operator norm.
inline HermitianMatrix hermitian_with_norm(Rng& rng, Eigen::Index d, double norm) {
  const Matrix a = rng.ginibre(d, d);
  Matrix h = linalg::hermitian_part(a);
  const double current = linalg::hermitian_norm(h);
  if (current > 0.0) h *= norm / current;
  return HermitianMatrix(h);
}

inline HermitianMatrix psd(Rng& rng, Eigen::Index d, Eigen::Index rank = -1) {
  const Matrix a = rng.ginibre(d, rank < 0 ? d : rank);
  return HermitianMatrix(Matrix(a * a.adjoint() / static_cast<double>(d)));
}

/// Random reference Hamiltonian with a random spectrum in [0, scale] (ground at 0).
inline ReferenceHamiltonian reference(Rng& rng, Eigen::Index d, double scale = 1.0) {
  RealVector spec(d);
  spec(0) = 0.0;
  for (Eigen::Index i = 1; i < d; ++i) spec(i) = rng.uniform(0.0, scale);
  const Matrix u = haar_unitary(rng, d);
  return ReferenceHamiltonian::from_psd(
      HermitianMatrix(Matrix(u * spec.cast<Complex>().asDiagonal() * u.adjoint())));
}

inline DensityState mixed_state(Rng& rng, Eigen::Index d, Eigen::Index rank = -1) {
  const Matrix a = rng.ginibre(d, rank < 0 ? d : rank);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityState(rho);
}

/// Random state mixed with the ground state of g until its energy is at most e.
inline DensityState state_with_energy(Rng& rng, const ReferenceHamiltonian& g, double e, Eigen::Index rank = -1) {
  DensityState rho = mixed_state(rng, g.dim(), rank);
  const double current = energy(g, rho);
  if (current <= e) return rho;
  const double keep = e / current;
  const Vector& ground = g.ground_state();
  Matrix mixed = keep * rho.matrix() + (1.0 - keep) * ground * ground.adjoint();
  return DensityState(Matrix(linalg::hermitian_part(mixed)));
}

/// Random contraction with singular values drawn uniformly from [0, 1].
inline Matrix contraction(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::JacobiSVD<Matrix> svd(rng.ginibre(rows, cols), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index k = std::min(rows, cols);
  RealVector s(k);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = rng.uniform();
  Matrix sigma = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < k; ++i) sigma(i, i) = s(i);
  return svd.matrixU() * sigma * svd.matrixV().adjoint();
}

}  // namespace random
}  // namespace eclim
