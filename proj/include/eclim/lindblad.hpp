#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "eclim/channels.hpp"
#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/norms.hpp"
#include "eclim/opcore.hpp"

namespace eclim {

/// Generator L(rho) = K rho + rho K* + sum_a L_a rho L_a* with
/// sum_a L_a* L_a <= -(K + K*).
class LindbladGenerator {
 public:
  LindbladGenerator() = default;

  static LindbladGenerator from_k(const Matrix& k, std::vector<Matrix> lindblad = {}) {
    return LindbladGenerator(k, std::move(lindblad));
  }

  /// K = -iH - (1/2) sum L*L.
  static LindbladGenerator from_hamiltonian(const HermitianMatrix& h, std::vector<Matrix> lindblad = {}) {
    Matrix k = -kI * h.matrix();
    for (const auto& l : lindblad) {
      require_same_dim(l.rows(), h.dim(), "LindbladGenerator::from_hamiltonian");
      require_same_dim(l.cols(), h.dim(), "LindbladGenerator::from_hamiltonian");
      k -= 0.5 * l.adjoint() * l;
    }
    return LindbladGenerator(k, std::move(lindblad));
  }

  static LindbladGenerator zero(Eigen::Index d) { return LindbladGenerator(Matrix::Zero(d, d), {}); }

  Eigen::Index dim() const { return k_.rows(); }
  const Matrix& k() const { return k_; }
  const std::vector<Matrix>& lindblad() const { return lindblad_; }
  bool formally_conservative() const { return conservative_; }

  /// Hermitian part of the effective Hamiltonian, i (K - K*)/2.
  HermitianMatrix hamiltonian() const { return HermitianMatrix(Matrix(0.5 * kI * (k_ - k_.adjoint()))); }

  Matrix apply(const Matrix& rho) const {
    require_same_dim(rho.rows(), dim(), "LindbladGenerator::apply");
    Matrix out = k_ * rho + rho * k_.adjoint();
    for (const auto& l : lindblad_) out.noalias() += l * rho * l.adjoint();
    return out;
  }

  /// Heisenberg-picture action K* B + B K + sum L* B L.
  Matrix dual_apply(const Matrix& b) const {
    Matrix out = k_.adjoint() * b + b * k_;
    for (const auto& l : lindblad_) out.noalias() += l.adjoint() * b * l;
    return out;
  }

  /// Matrix of L on column-stacked density matrices (vec(rho)_{i + j d} = rho_ij):
  /// 1 (x) K + conj(K) (x) 1 + sum conj(L) (x) L.
  Matrix superoperator() const {
    const Matrix id = linalg::identity(dim());
    Matrix s = linalg::kron(id, k_) + linalg::kron(Matrix(k_.conjugate()), id);
    for (const auto& l : lindblad_) s += linalg::kron(Matrix(l.conjugate()), l);
    return s;
  }

  /// L written as T+ - T- with T+ = (1+K).(1+K)* + sum L.L* and T- = id + K.K*.
  CpDifference as_cp_difference() const {
    const Matrix id = linalg::identity(dim());
    std::vector<Matrix> plus{id + k_};
    plus.insert(plus.end(), lindblad_.begin(), lindblad_.end());
    return {CpMap(dim(), dim(), std::move(plus)), CpMap(dim(), dim(), {id, k_})};
  }

  friend LindbladGenerator operator+(const LindbladGenerator& a, const LindbladGenerator& b) {
    require_same_dim(a.dim(), b.dim(), "LindbladGenerator +");
    std::vector<Matrix> ls = a.lindblad_;
    ls.insert(ls.end(), b.lindblad_.begin(), b.lindblad_.end());
    return LindbladGenerator(Matrix(a.k_ + b.k_), std::move(ls));
  }

 private:
  LindbladGenerator(Matrix k, std::vector<Matrix> lindblad) : k_(std::move(k)), lindblad_(std::move(lindblad)) {
    if (k_.rows() != k_.cols()) throw Error(ErrorCode::dimension_mismatch, "LindbladGenerator: K must be square");
    if (!k_.allFinite()) throw Error(ErrorCode::invalid_input, "LindbladGenerator: non-finite entry in K");
    Matrix budget = k_ + k_.adjoint();
    double scale = 1.0 + linalg::operator_norm(k_);
    for (const auto& l : lindblad_) {
      require_same_dim(l.rows(), dim(), "LindbladGenerator: Lindblad operator");
      require_same_dim(l.cols(), dim(), "LindbladGenerator: Lindblad operator");
      if (!l.allFinite()) throw Error(ErrorCode::invalid_input, "LindbladGenerator: non-finite Lindblad entry");
      budget += l.adjoint() * l;
      scale += l.squaredNorm();
    }
    budget = linalg::hermitian_part(budget);
    const RealVector ev = linalg::eigenvalues(budget);
    if (ev(ev.size() - 1) > 1e-9 * scale) {
      throw Error(ErrorCode::invalid_input, "LindbladGenerator: not dissipative (sum L*L exceeds -(K + K*))");
    }
    conservative_ = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))) <= 1e-9 * scale;
  }

  Matrix k_;
  std::vector<Matrix> lindblad_;
  bool conservative_ = true;
};

/// Stability constants (omega, E0) for dE/dt <= omega (E + E0).
struct StabilityCertificate {
  double omega = 0.0;
  double e0 = 0.0;
  double residual = 0.0;
  bool verified = false;

  /// e^{omega t} (E + E0) - E0, the bound on the energy at time t.
  double energy_bound(double e, double t) const { return std::exp(omega * t) * (e + e0) - e0; }
};

/// M = K* G + G K + sum L* G L, the time-zero derivative of the energy.
inline HermitianMatrix dissipation_matrix(const LindbladGenerator& gen, const ReferenceHamiltonian& g) {
  require_same_dim(gen.dim(), g.dim(), "dissipation_matrix");
  return HermitianMatrix(Matrix(linalg::hermitian_part(gen.dual_apply(g.matrix()))));
}

namespace detail {

inline Matrix inverse_sqrt_shifted(const ReferenceHamiltonian& g, double e0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.matrix());
  const RealVector d = (es.eigenvalues().array().max(0.0) + e0).rsqrt();
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Least omega >= 0 with M <= omega (G + e0) (and -M <= omega (G + e0) when
/// symmetric), from the spectrum of (G + e0)^{-1/2} M (G + e0)^{-1/2}.
inline StabilityCertificate min_omega(const HermitianMatrix& m, const ReferenceHamiltonian& g, double e0,
                                      bool symmetric = false) {
  require_same_dim(m.dim(), g.dim(), "min_omega");
  if (!(e0 > 0.0) || !std::isfinite(e0)) throw Error(ErrorCode::invalid_input, "min_omega: e0 must be positive");
  const Matrix c = detail::inverse_sqrt_shifted(g, e0);
  const RealVector ev = linalg::eigenvalues(Matrix(linalg::hermitian_part(c * m.matrix() * c)));
  double top = ev(ev.size() - 1);
  if (symmetric) top = std::max(top, -ev(0));
  StabilityCertificate cert;
  cert.omega = std::max(0.0, top);
  cert.e0 = e0;
  const Matrix rhs = cert.omega * (g.matrix() + e0 * linalg::identity(g.dim()));
  cert.residual = linalg::min_eigenvalue(Matrix(rhs - m.matrix()));
  if (symmetric) cert.residual = std::min(cert.residual, linalg::min_eigenvalue(Matrix(rhs + m.matrix())));
  cert.verified = cert.residual >= -1e-8 * (1.0 + m.norm() + cert.omega * (g.max_eigenvalue() + e0));
  return cert;
}

/// Top generalized eigenvector of the pencil (M, G + e0), normalized.
inline Vector pencil_top_vector(const HermitianMatrix& m, const ReferenceHamiltonian& g, double e0) {
  const Matrix c = detail::inverse_sqrt_shifted(g, e0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(c * m.matrix() * c));
  Vector v = c * es.eigenvectors().col(m.dim() - 1);
  return v / v.norm();
}

/// Logarithmic grid 2^-6 .. 2^6 scaled by the top of the spectrum of G.
inline std::vector<double> default_e0_grid(const ReferenceHamiltonian& g) {
  const double scale = g.max_eigenvalue() > 0.0 ? g.max_eigenvalue() : 1.0;
  std::vector<double> grid;
  for (int k = -6; k <= 6; ++k) grid.push_back(std::ldexp(scale, k));
  return grid;
}

inline std::vector<StabilityCertificate> stability_curve(const LindbladGenerator& gen, const ReferenceHamiltonian& g,
                                                         const std::vector<double>& e0_grid, bool symmetric = false) {
  const HermitianMatrix m = dissipation_matrix(gen, g);
  std::vector<StabilityCertificate> out;
  out.reserve(e0_grid.size());
  for (double e0 : e0_grid) out.push_back(min_omega(m, g, e0, symmetric));
  return out;
}

/// Certificate minimizing e^{omega t}(E + E0) - E0 among the candidates.
inline StabilityCertificate best_for_bound(const std::vector<StabilityCertificate>& certs, double e, double t) {
  if (certs.empty()) throw Error(ErrorCode::invalid_input, "best_for_bound: no certificates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < certs.size(); ++i) {
    if (certs[i].energy_bound(e, t) < certs[best].energy_bound(e, t)) best = i;
  }
  return certs[best];
}

/// Constants valid for every member: the pairwise maximum.
inline StabilityCertificate joint_certificate(const StabilityCertificate& a, const StabilityCertificate& b) {
  StabilityCertificate out;
  out.omega = std::max(a.omega, b.omega);
  out.e0 = std::max(a.e0, b.e0);
  out.verified = a.verified && b.verified;
  out.residual = std::min(a.residual, b.residual);
  return out;
}

/// Exponential e^{tL} of a generator, restricted to the connected blocks of its
/// superoperator so that sparse generators (ladders) stay cheap.
class Propagator {
 public:
  Propagator(Eigen::Index dim, std::vector<std::vector<Eigen::Index>> blocks, std::vector<Matrix> exps)
      : dim_(dim), blocks_(std::move(blocks)), exps_(std::move(exps)) {}

  Matrix apply(const Matrix& rho) const {
    require_same_dim(rho.rows(), dim_, "Propagator::apply");
    Matrix out = Matrix::Zero(dim_, dim_);
    const Complex* in = rho.data();
    Complex* dst = out.data();
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& idx = blocks_[b];
      Vector x(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i) x(static_cast<Eigen::Index>(i)) = in[idx[i]];
      const Vector y = exps_[b] * x;
      for (std::size_t i = 0; i < idx.size(); ++i) dst[idx[i]] = y(static_cast<Eigen::Index>(i));
    }
    return out;
  }

 private:
  Eigen::Index dim_;
  std::vector<std::vector<Eigen::Index>> blocks_;
  std::vector<Matrix> exps_;
};

/// Immutable precomputation of the column-stacked superoperator of a generator.
class Semigroup {
 public:
  explicit Semigroup(const LindbladGenerator& gen) : dim_(gen.dim()), super_(gen.superoperator()) {
    const Eigen::Index n = super_.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](Eigen::Index x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (super_(i, j) != Complex(0.0, 0.0)) {
          const Eigen::Index a = find(i);
          const Eigen::Index b = find(j);
          if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
    }
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index root = find(i);
      if (slot[static_cast<std::size_t>(root)] < 0) {
        slot[static_cast<std::size_t>(root)] = static_cast<Eigen::Index>(blocks_.size());
        blocks_.emplace_back();
      }
      blocks_[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(i);
    }
  }

  Eigen::Index dim() const { return dim_; }
  const Matrix& superoperator() const { return super_; }
  std::size_t block_count() const { return blocks_.size(); }

  Propagator propagator(double t) const {
    if (t < 0.0 || !std::isfinite(t)) throw Error(ErrorCode::invalid_input, "Semigroup::propagator: t must be >= 0");
    std::vector<Matrix> exps;
    exps.reserve(blocks_.size());
    for (const auto& idx : blocks_) {
      const auto k = static_cast<Eigen::Index>(idx.size());
      Matrix sub(k, k);
      for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = super_(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
      exps.push_back(linalg::expm(Matrix(t * sub)));
    }
    return Propagator(dim_, blocks_, std::move(exps));
  }

  Matrix evolve(const Matrix& rho, double t) const { return propagator(t).apply(rho); }

  DensityState evolve(const DensityState& rho, double t) const {
    return DensityState(Matrix(linalg::hermitian_part(evolve(rho.matrix(), t))));
  }

 private:
  Eigen::Index dim_;
  Matrix super_;
  std::vector<std::vector<Eigen::Index>> blocks_;
};

inline DensityState evolve(const LindbladGenerator& gen, const DensityState& rho, double t) {
  require_same_dim(gen.dim(), rho.dim(), "evolve");
  return Semigroup(gen).evolve(rho, t);
}

struct EnergyBoundRow {
  double time = 0.0;
  double energy = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

struct EnergyBoundReport {
  std::vector<EnergyBoundRow> rows;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool holds = true;
};

/// Checks E[e^{tL} rho] <= e^{omega t}(E + E0) - E0 on a time grid, with
/// slack 1e-7 (1 + E + E0).
inline EnergyBoundReport verify_energy_bound(const Semigroup& semigroup, const ReferenceHamiltonian& g,
                                             const StabilityCertificate& cert, const DensityState& rho,
                                             const std::vector<double>& times) {
  require_same_dim(semigroup.dim(), g.dim(), "verify_energy_bound");
  require_same_dim(rho.dim(), g.dim(), "verify_energy_bound");
  const double e = energy(g, rho);
  const double slack = 1e-7 * (1.0 + e + cert.e0);
  EnergyBoundReport report;
  for (double t : times) {
    const DensityState out = semigroup.evolve(rho, t);
    EnergyBoundRow row;
    row.time = t;
    row.energy = energy(g, out);
    row.bound = cert.energy_bound(e, t);
    row.margin = row.bound - row.energy;
    report.worst_margin = std::min(report.worst_margin, row.margin);
    report.holds = report.holds && row.margin >= -slack;
    report.rows.push_back(row);
  }
  return report;
}

inline EnergyBoundReport verify_energy_bound(const LindbladGenerator& gen, const ReferenceHamiltonian& g,
                                             const StabilityCertificate& cert, const DensityState& rho,
                                             const std::vector<double>& times) {
  return verify_energy_bound(Semigroup(gen), g, cert, rho, times);
}

}  // namespace eclim
