#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "eclim/error.hpp"
#include "eclim/linalg.hpp"

namespace eclim {

/// Dense complex square matrix that is Hermitian up to rounding.
///
/// Construction checks |A - A*| <= 1e-10 (1 + |A|_F) entrywise and stores the
/// symmetrized (A + A*)/2; every later operation may assume exact Hermiticity.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const Matrix& a) {
    if (a.rows() != a.cols()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "HermitianMatrix: matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.allFinite()) throw Error(ErrorCode::invalid_input, "HermitianMatrix: non-finite entry");
    const double tol = 1e-10 * (1.0 + a.norm());
    if (linalg::max_abs(a - a.adjoint()) > tol) {
      throw Error(ErrorCode::invalid_input, "HermitianMatrix: input is not Hermitian");
    }
    m_ = linalg::hermitian_part(a);
  }

  static HermitianMatrix zero(Eigen::Index d) { return HermitianMatrix(Matrix::Zero(d, d)); }
  static HermitianMatrix identity(Eigen::Index d) { return HermitianMatrix(Matrix::Identity(d, d)); }
  static HermitianMatrix diagonal(const std::vector<double>& d) {
    RealVector v = Eigen::Map<const RealVector>(d.data(), static_cast<Eigen::Index>(d.size()));
    return HermitianMatrix(Matrix(v.cast<Complex>().asDiagonal()));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  RealVector eigenvalues() const { return linalg::eigenvalues(m_); }
  double max_eigenvalue() const { return linalg::max_eigenvalue(m_); }
  double min_eigenvalue() const { return linalg::min_eigenvalue(m_); }
  double norm() const { return linalg::hermitian_norm(m_); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "HermitianMatrix +");
    return HermitianMatrix(Matrix(a.m_ + b.m_));
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "HermitianMatrix -");
    return HermitianMatrix(Matrix(a.m_ - b.m_));
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(Matrix(s * a.m_)); }
  HermitianMatrix operator-() const { return HermitianMatrix(Matrix(-m_)); }

  HermitianMatrix plus_identity(double s) const {
    return HermitianMatrix(Matrix(m_ + s * Matrix::Identity(dim(), dim())));
  }

 private:
  Matrix m_;
};

/// PSD reference Hamiltonian with ground energy exactly zero.
class ReferenceHamiltonian {
 public:
  ReferenceHamiltonian() = default;

  /// Shifts h by its minimum eigenvalue.
  static ReferenceHamiltonian ground_shifted(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    const double shift = es.eigenvalues()(0);
    ReferenceHamiltonian g;
    g.matrix_ = h.plus_identity(-shift);
    g.shift_ = shift;
    g.eigenvalues_ = es.eigenvalues().array() - shift;
    g.eigenvalues_(0) = 0.0;
    g.ground_state_ = es.eigenvectors().col(0);
    return g;
  }

  /// Accepts h only if it is PSD within 1e-9 (1 + |h|); small negative ground
  /// energies are clamped to zero by shifting.
  static ReferenceHamiltonian from_psd(const HermitianMatrix& h) {
    const double lmin = h.min_eigenvalue();
    if (lmin < -1e-9 * (1.0 + h.norm())) {
      throw Error(ErrorCode::invalid_input, "ReferenceHamiltonian: matrix is not positive semidefinite");
    }
    return ground_shifted(h);
  }

  static ReferenceHamiltonian diagonal(const std::vector<double>& d) {
    return from_psd(HermitianMatrix::diagonal(d));
  }

  Eigen::Index dim() const { return matrix_.dim(); }
  const HermitianMatrix& hermitian() const { return matrix_; }
  const Matrix& matrix() const { return matrix_.matrix(); }
  double ground_energy_removed() const { return shift_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }
  /// First ascending eigenvector of the unshifted input.
  const Vector& ground_state() const { return ground_state_; }

 private:
  HermitianMatrix matrix_;
  double shift_ = 0.0;
  RealVector eigenvalues_;
  Vector ground_state_;
};

inline ReferenceHamiltonian ground_shift(const HermitianMatrix& h) { return ReferenceHamiltonian::ground_shifted(h); }

/// Positive semidefinite operator of trace at most one (subnormalized states allowed).
class DensityState {
 public:
  DensityState() = default;

  explicit DensityState(const HermitianMatrix& rho) : rho_(rho) {
    const double scale = 1.0 + rho.norm();
    if (rho.min_eigenvalue() < -1e-9 * scale) {
      throw Error(ErrorCode::invalid_input, "DensityState: matrix is not positive semidefinite");
    }
    const double tr = rho.matrix().trace().real();
    if (tr < -1e-10 || tr > 1.0 + 1e-10) {
      throw Error(ErrorCode::invalid_input, "DensityState: trace " + std::to_string(tr) + " outside [0, 1]");
    }
  }
  explicit DensityState(const Matrix& rho) : DensityState(HermitianMatrix(rho)) {}

  static DensityState pure(const Vector& psi) { return DensityState(Matrix(psi * psi.adjoint())); }
  static DensityState maximally_mixed(Eigen::Index d) {
    return DensityState(Matrix(Matrix::Identity(d, d) / static_cast<double>(d)));
  }

  Eigen::Index dim() const { return rho_.dim(); }
  const HermitianMatrix& hermitian() const { return rho_; }
  const Matrix& matrix() const { return rho_.matrix(); }
  double trace() const { return rho_.matrix().trace().real(); }

 private:
  HermitianMatrix rho_;
};

/// Witness (slope, offset) of M <= slope G + offset.
struct AffineCertificate {
  double slope = 0.0;
  double offset = 0.0;
  /// Smallest eigenvalue of slope G + offset - M at verification time.
  double residual = 0.0;
  bool verified = false;

  double evaluate(double energy) const { return slope * energy + offset; }
};

inline bool psd_order_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol = 1e-9) {
  require_same_dim(a.dim(), b.dim(), "psd_order_leq");
  if (tol < 0.0) throw Error(ErrorCode::invalid_input, "psd_order_leq: negative tolerance");
  const Matrix diff = b.matrix() - a.matrix();
  const RealVector ev = linalg::eigenvalues(diff);
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -tol * (1.0 + scale);
}

/// Fills residual and verified for M <= slope G + offset.
inline AffineCertificate verify_certificate(AffineCertificate cert, const HermitianMatrix& m,
                                            const ReferenceHamiltonian& g) {
  require_same_dim(m.dim(), g.dim(), "verify_certificate");
  const Matrix slack = cert.slope * g.matrix() + cert.offset * Matrix::Identity(m.dim(), m.dim()) - m.matrix();
  cert.residual = linalg::min_eigenvalue(slack);
  cert.verified = cert.slope >= 0.0 && cert.offset >= 0.0 && cert.residual >= -1e-8 * (1.0 + m.norm());
  return cert;
}

inline double energy(const ReferenceHamiltonian& g, const DensityState& rho) {
  require_same_dim(g.dim(), rho.dim(), "energy");
  const double e = (g.matrix() * rho.matrix()).trace().real();
  return std::max(0.0, e);
}

/// <psi|G|psi> for a (not necessarily normalized) vector.
inline double energy(const ReferenceHamiltonian& g, const Vector& psi) {
  require_same_dim(g.dim(), psi.size(), "energy");
  return std::max(0.0, psi.dot(g.matrix() * psi).real());
}

struct DualScanResult {
  double value = 0.0;
  AffineCertificate cert;
};

namespace detail {

inline void require_positive_energy(double e, const char* ctx) {
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw Error(ErrorCode::invalid_input, std::string(ctx) + ": energy budget must be positive and finite");
  }
}

// Minimizes lambda E + top(M - lambda G) over lambda >= 0, where top is either
// lambda_max or max(0, lambda_max).
inline linalg::ScalarMinimum scan_affine_dual(const Matrix& m, const Matrix& g, double e, bool clamp, double upper) {
  auto objective = [&](double lambda) {
    const double top = linalg::max_eigenvalue(Matrix(m - lambda * g));
    return lambda * e + (clamp ? std::max(0.0, top) : top);
  };
  return linalg::golden_section(objective, 0.0, upper, 1e-10, 200);
}

}  // namespace detail

/// min over lambda >= 0 of lambda E + max(0, lambda_max(M - lambda G)).
///
/// For PSD M the value equals sup{tr[M rho] : rho state, tr[G rho] <= E}; the
/// ground state of G is a Slater point so there is no duality gap.
inline DualScanResult dual_scan(const HermitianMatrix& m, const ReferenceHamiltonian& g, double e) {
  require_same_dim(m.dim(), g.dim(), "dual_scan");
  detail::require_positive_energy(e, "dual_scan");
  const double upper = 2.0 * std::max(1.0, m.max_eigenvalue() / e);
  const auto best = detail::scan_affine_dual(m.matrix(), g.matrix(), e, true, upper);
  DualScanResult out;
  out.value = best.value;
  out.cert.slope = best.argmin;
  out.cert.offset = std::max(0.0, linalg::max_eigenvalue(Matrix(m.matrix() - best.argmin * g.matrix())));
  out.cert = verify_certificate(out.cert, m, g);
  return out;
}

struct ConstrainedMaximizer {
  Vector state;
  /// <state|M|state>
  double value = 0.0;
  double energy = 0.0;
  double multiplier = 0.0;
};

/// Moves psi toward the ground state of g until <psi|G|psi> <= e. Leaves
/// feasible inputs untouched.
inline Vector fit_energy(const Vector& psi, const ReferenceHamiltonian& g, double e) {
  const double current = energy(g, psi);
  if (current <= e) return psi;
  const Vector& ground = g.ground_state();
  const Complex c = ground.dot(psi);
  Vector rest = psi - c * ground;
  const double rest_norm = rest.norm();
  if (rest_norm == 0.0) return psi;
  rest /= rest_norm;
  const double rest_energy = energy(g, rest);
  const double weight = std::min(1.0, e / rest_energy);
  const Complex phase = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
  Vector out = phase * std::sqrt(1.0 - weight) * ground + std::sqrt(weight) * rest;
  return out / out.norm();
}

/// Pure state maximizing <psi|M|psi> subject to <psi|G|psi> <= E, for any Hermitian M.
///
/// The multiplier comes from the unclamped scan lambda E + lambda_max(M - lambda G);
/// the maximizer lives in the top eigenspace of M - lambda* G and is assembled from
/// the lowest- and highest-energy directions of G compressed to that space.
inline ConstrainedMaximizer energy_constrained_maximizer(const HermitianMatrix& m, const ReferenceHamiltonian& g,
                                                         double e) {
  require_same_dim(m.dim(), g.dim(), "energy_constrained_maximizer");
  detail::require_positive_energy(e, "energy_constrained_maximizer");
  const RealVector mev = m.eigenvalues();
  const double spread = mev(mev.size() - 1) - mev(0);
  const double upper = 2.0 * std::max(1.0, spread / e);
  const auto best = detail::scan_affine_dual(m.matrix(), g.matrix(), e, false, upper);
  const double lambda = best.argmin;

  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(m.matrix() - lambda * g.matrix()));
  const Eigen::Index d = m.dim();
  const double top = es.eigenvalues()(d - 1);
  const double tol = 1e-8 * (1.0 + m.norm() + lambda * g.max_eigenvalue());
  Eigen::Index first = d - 1;
  while (first > 0 && es.eigenvalues()(first - 1) >= top - tol) --first;
  const Matrix space = es.eigenvectors().rightCols(d - first);

  Eigen::SelfAdjointEigenSolver<Matrix> compressed(Matrix(space.adjoint() * g.matrix() * space));
  const Eigen::Index k = space.cols();
  const double g_lo = compressed.eigenvalues()(0);
  const double g_hi = compressed.eigenvalues()(k - 1);
  const Vector lo = space * compressed.eigenvectors().col(0);
  const Vector hi = space * compressed.eigenvectors().col(k - 1);

  Vector psi;
  if (g_hi <= e) {
    psi = hi;
  } else if (g_lo >= e || g_hi - g_lo <= 0.0) {
    psi = lo;
  } else {
    const double s = (e - g_lo) / (g_hi - g_lo);
    psi = std::sqrt(1.0 - s) * lo + std::sqrt(s) * hi;
  }
  psi = fit_energy(psi / psi.norm(), g, e);

  ConstrainedMaximizer out;
  out.state = psi;
  out.value = psi.dot(m.matrix() * psi).real();
  out.energy = energy(g, psi);
  out.multiplier = lambda;
  return out;
}

/// Spectral functions used for reference changes; all are operator monotone on
/// their domain.
struct SpectralFunction {
  enum class Kind { sqrt, power, log1p };
  Kind kind = Kind::sqrt;
  double exponent = 0.5;

  static SpectralFunction square_root() { return {Kind::sqrt, 0.5}; }
  static SpectralFunction power(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_input, "SpectralFunction::power: p must lie in (0, 1]");
    return {Kind::power, p};
  }
  static SpectralFunction log_1p() { return {Kind::log1p, 0.0}; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::sqrt: return std::sqrt(x);
      case Kind::power: return std::pow(x, exponent);
      case Kind::log1p: return std::log1p(x);
    }
    return 0.0;
  }
};

inline HermitianMatrix spectral_function(const HermitianMatrix& m, SpectralFunction f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  RealVector d = es.eigenvalues();
  const double tol = 1e-9 * (1.0 + m.norm());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (f.kind == SpectralFunction::Kind::log1p) {
      if (d(i) <= -1.0) throw Error(ErrorCode::invalid_input, "spectral_function: log1p undefined on spectrum");
    } else {
      if (d(i) < -tol) throw Error(ErrorCode::invalid_input, "spectral_function: matrix is not PSD");
      d(i) = std::max(0.0, d(i));
    }
    d(i) = f(d(i));
  }
  return HermitianMatrix(Matrix(es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint()));
}

/// Maximal-energy curve sampled on a grid, with one certificate per grid point.
struct EnergyCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<AffineCertificate> certificates;

  /// f(E) <= f(E') <= (E'/E) f(E) for every grid pair E < E'.
  bool concave_nondecreasing(double tol = 1e-9) const {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        const double slack = tol * (1.0 + std::abs(values[j]));
        if (values[i] > values[j] + slack) return false;
        if (values[j] > grid[j] / grid[i] * values[i] + slack) return false;
      }
    }
    return true;
  }
};

/// G_A (x) 1 + 1 (x) G_B.
inline ReferenceHamiltonian tensor_sum(const ReferenceHamiltonian& ga, const ReferenceHamiltonian& gb) {
  const Matrix m = linalg::kron(ga.matrix(), linalg::identity(gb.dim())) +
                   linalg::kron(linalg::identity(ga.dim()), gb.matrix());
  return ReferenceHamiltonian::from_psd(HermitianMatrix(m));
}

/// G (x) 1_R, the reference for a zero-energy ancilla of dimension r.
inline ReferenceHamiltonian with_ancilla(const ReferenceHamiltonian& g, Eigen::Index r) {
  return ReferenceHamiltonian::from_psd(HermitianMatrix(Matrix(linalg::kron(g.matrix(), linalg::identity(r)))));
}

}  // namespace eclim
