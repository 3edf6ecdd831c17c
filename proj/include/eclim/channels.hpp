#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/opcore.hpp"

namespace eclim {

/// Completely positive map rho -> sum_a K_a rho K_a*, with no trace condition.
class CpMap {
 public:
  CpMap() = default;

  CpMap(Eigen::Index dim_in, Eigen::Index dim_out, std::vector<Matrix> kraus)
      : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
    if (dim_in <= 0 || dim_out <= 0) throw Error(ErrorCode::invalid_input, "CpMap: dimensions must be positive");
    for (const auto& k : kraus_) {
      if (k.rows() != dim_out || k.cols() != dim_in) {
        throw Error(ErrorCode::dimension_mismatch,
                    "CpMap: Kraus operator is " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                        ", expected " + std::to_string(dim_out) + "x" + std::to_string(dim_in));
      }
      if (!k.allFinite()) throw Error(ErrorCode::invalid_input, "CpMap: non-finite Kraus entry");
    }
  }

  static CpMap zero(Eigen::Index dim_in, Eigen::Index dim_out) { return CpMap(dim_in, dim_out, {}); }

  Eigen::Index dim_in() const { return dim_in_; }
  Eigen::Index dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  /// sum_a K_a* K_a, i.e. the dual map applied to the identity.
  HermitianMatrix kraus_sum() const {
    Matrix s = Matrix::Zero(dim_in_, dim_in_);
    for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
    return HermitianMatrix(Matrix(linalg::hermitian_part(s)));
  }

  /// Works on any square input of dimension dim_in, Hermitian or not.
  Matrix apply(const Matrix& rho) const {
    require_same_dim(rho.rows(), dim_in_, "CpMap::apply");
    Matrix out = Matrix::Zero(dim_out_, dim_out_);
    for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
    return out;
  }

  Matrix dual_apply(const Matrix& b) const {
    require_same_dim(b.rows(), dim_out_, "CpMap::dual_apply");
    Matrix out = Matrix::Zero(dim_in_, dim_in_);
    for (const auto& k : kraus_) out.noalias() += k.adjoint() * b * k;
    return out;
  }

  /// (this o first): apply first, then this.
  CpMap after(const CpMap& first) const {
    require_same_dim(first.dim_out(), dim_in_, "CpMap::after");
    std::vector<Matrix> ks;
    ks.reserve(kraus_.size() * first.kraus().size());
    for (const auto& a : kraus_)
      for (const auto& b : first.kraus()) ks.push_back(a * b);
    return CpMap(first.dim_in(), dim_out_, std::move(ks));
  }

  /// Direct sum of Kraus lists.
  CpMap plus(const CpMap& other) const {
    require_same_dim(other.dim_in(), dim_in_, "CpMap::plus");
    require_same_dim(other.dim_out(), dim_out_, "CpMap::plus");
    std::vector<Matrix> ks = kraus_;
    ks.insert(ks.end(), other.kraus().begin(), other.kraus().end());
    return CpMap(dim_in_, dim_out_, std::move(ks));
  }

  /// Multiplies the map by s >= 0.
  CpMap scaled(double s) const {
    if (s < 0.0) throw Error(ErrorCode::invalid_input, "CpMap::scaled: negative factor");
    std::vector<Matrix> ks;
    for (const auto& k : kraus_) ks.push_back(std::sqrt(s) * k);
    return CpMap(dim_in_, dim_out_, std::move(ks));
  }

  /// T (x) id_R.
  CpMap tensor_identity(Eigen::Index r) const {
    std::vector<Matrix> ks;
    ks.reserve(kraus_.size());
    for (const auto& k : kraus_) ks.push_back(linalg::kron(k, linalg::identity(r)));
    return CpMap(dim_in_ * r, dim_out_ * r, std::move(ks));
  }

  /// Choi matrix sum_ij |i><j| (x) T(|i><j|), input factor first.
  HermitianMatrix choi() const {
    const Eigen::Index n = dim_in_ * dim_out_;
    Matrix c = Matrix::Zero(n, n);
    for (const auto& k : kraus_) {
      // vec of K with input index major: v[i*dout + o] = K(o, i)
      Vector v(n);
      for (Eigen::Index i = 0; i < dim_in_; ++i)
        for (Eigen::Index o = 0; o < dim_out_; ++o) v(i * dim_out_ + o) = k(o, i);
      c.noalias() += v * v.adjoint();
    }
    return HermitianMatrix(Matrix(linalg::hermitian_part(c)));
  }

  /// Minimal Kraus representation recovered from a Choi matrix (input factor first).
  static CpMap from_choi(const HermitianMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                         double tol = 1e-12) {
    require_same_dim(choi.dim(), dim_in * dim_out, "CpMap::from_choi");
    Eigen::SelfAdjointEigenSolver<Matrix> es(choi.matrix());
    const double scale = 1.0 + choi.norm();
    std::vector<Matrix> ks;
    for (Eigen::Index a = choi.dim() - 1; a >= 0; --a) {
      const double lambda = es.eigenvalues()(a);
      if (lambda < -1e-9 * scale) throw Error(ErrorCode::invalid_input, "CpMap::from_choi: Choi matrix is not PSD");
      if (lambda <= tol * scale) continue;
      Matrix k(dim_out, dim_in);
      for (Eigen::Index i = 0; i < dim_in; ++i)
        for (Eigen::Index o = 0; o < dim_out; ++o) k(o, i) = std::sqrt(lambda) * es.eigenvectors()(i * dim_out + o, a);
      ks.push_back(std::move(k));
    }
    return CpMap(dim_in, dim_out, std::move(ks));
  }

  /// Stinespring operator V = sum_a K_a (x) |a>, mapping H_in to H_out (x) C^{#Kraus}.
  Matrix stinespring() const {
    const auto r = static_cast<Eigen::Index>(kraus_.size());
    Matrix v = Matrix::Zero(dim_out_ * r, dim_in_);
    for (Eigen::Index o = 0; o < dim_out_; ++o)
      for (Eigen::Index a = 0; a < r; ++a) v.row(o * r + a) = kraus_[static_cast<std::size_t>(a)].row(o);
    return v;
  }

 private:
  Eigen::Index dim_in_ = 0;
  Eigen::Index dim_out_ = 0;
  std::vector<Matrix> kraus_;
};

/// Trace-nonincreasing CP map: sum_a K_a* K_a <= 1 within 1e-9.
class KrausChannel : public CpMap {
 public:
  KrausChannel() = default;

  KrausChannel(Eigen::Index dim_in, Eigen::Index dim_out, std::vector<Matrix> kraus)
      : KrausChannel(CpMap(dim_in, dim_out, std::move(kraus))) {}

  explicit KrausChannel(const CpMap& map) : CpMap(map) {
    const RealVector ev = kraus_sum().eigenvalues();
    const double top = ev.size() ? ev(ev.size() - 1) : 0.0;
    const double bottom = ev.size() ? ev(0) : 0.0;
    if (top > 1.0 + 1e-9) {
      throw Error(ErrorCode::invalid_input,
                  "KrausChannel: sum of K*K exceeds the identity (largest eigenvalue " + std::to_string(top) + ")");
    }
    trace_preserving_ = std::abs(top - 1.0) <= 1e-9 && std::abs(bottom - 1.0) <= 1e-9;
  }

  bool trace_preserving() const { return trace_preserving_; }

  HermitianMatrix dual_apply(const HermitianMatrix& b) const {
    return HermitianMatrix(Matrix(linalg::hermitian_part(CpMap::dual_apply(b.matrix()))));
  }
  DensityState apply(const DensityState& rho) const {
    return DensityState(Matrix(linalg::hermitian_part(CpMap::apply(rho.matrix()))));
  }
  using CpMap::apply;
  using CpMap::dual_apply;

  KrausChannel after(const KrausChannel& first) const { return KrausChannel(CpMap::after(first)); }
  KrausChannel tensor_identity(Eigen::Index r) const { return KrausChannel(CpMap::tensor_identity(r)); }

 private:
  bool trace_preserving_ = false;
};

namespace channel {

inline KrausChannel identity(Eigen::Index d) { return KrausChannel(d, d, {linalg::identity(d)}); }

inline KrausChannel unitary(const Matrix& u) { return KrausChannel(u.cols(), u.rows(), {u}); }

inline KrausChannel zero(Eigen::Index dim_in, Eigen::Index dim_out) { return KrausChannel(dim_in, dim_out, {}); }

/// Qubit amplitude damping with decay probability p.
inline KrausChannel amplitude_damping(double p) {
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(p);
  return KrausChannel(2, 2, {k0, k1});
}

/// rho -> (1 - p) rho + p tr(rho) 1/d.
inline KrausChannel depolarizing(Eigen::Index d, double p) {
  std::vector<Matrix> ks;
  ks.push_back(std::sqrt(1.0 - p) * linalg::identity(d));
  const double w = std::sqrt(p / static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix k = Matrix::Zero(d, d);
      k(i, j) = w;
      ks.push_back(k);
    }
  }
  return KrausChannel(d, d, std::move(ks));
}

/// rho -> tr(rho) |target><target|.
inline KrausChannel constant(Eigen::Index dim_in, const Vector& target) {
  std::vector<Matrix> ks;
  for (Eigen::Index i = 0; i < dim_in; ++i) {
    Matrix k = Matrix::Zero(target.size(), dim_in);
    k.col(i) = target;
    ks.push_back(k);
  }
  return KrausChannel(dim_in, target.size(), std::move(ks));
}

inline KrausChannel conjugation(const Matrix& k) { return KrausChannel(k.cols(), k.rows(), {k}); }

}  // namespace channel

inline HermitianMatrix dual_apply(const KrausChannel& t, const HermitianMatrix& b) { return t.dual_apply(b); }
inline DensityState apply(const KrausChannel& t, const DensityState& rho) { return t.apply(rho); }
inline HermitianMatrix choi(const CpMap& t) { return t.choi(); }

/// Maximal output energy f_T(E) with the certificate T*(G_out) <= slope G_in + offset.
inline DualScanResult max_output_energy(const KrausChannel& t, const ReferenceHamiltonian& g_in,
                                        const ReferenceHamiltonian& g_out, double e) {
  require_same_dim(t.dim_in(), g_in.dim(), "max_output_energy (input)");
  require_same_dim(t.dim_out(), g_out.dim(), "max_output_energy (output)");
  return dual_scan(t.dual_apply(g_out.hermitian()), g_in, e);
}

inline EnergyCurve energy_curve(const KrausChannel& t, const ReferenceHamiltonian& g_in,
                                const ReferenceHamiltonian& g_out, const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::invalid_input, "energy_curve: grid must be ascending");
  }
  EnergyCurve curve;
  curve.grid = grid;
  const HermitianMatrix dual_g = t.dual_apply(g_out.hermitian());
  for (double e : grid) {
    const auto r = dual_scan(dual_g, g_in, e);
    curve.values.push_back(r.value);
    curve.certificates.push_back(r.cert);
  }
  return curve;
}

/// Upper bound on f_{ST}(E) from affine bounds for S and T.
inline double compose_energy_bound(const AffineCertificate& cert_s, const AffineCertificate& cert_t, double e) {
  if (cert_s.slope < 0.0 || cert_s.offset < 0.0 || cert_t.slope < 0.0 || cert_t.offset < 0.0) {
    throw Error(ErrorCode::invalid_input, "compose_energy_bound: certificates must be nonnegative");
  }
  return cert_s.slope * (cert_t.slope * e + cert_t.offset) + cert_s.offset;
}

/// Reference change through t -> t^p: from T*(G_out) <= l G_in + E0 derive
/// T*(G_out^p) <= l^p G_in^p + E0^p, and verify it as a PSD inequality.
inline AffineCertificate power_reference_certificate(const KrausChannel& t, const ReferenceHamiltonian& g_in,
                                                     const ReferenceHamiltonian& g_out, const AffineCertificate& cert,
                                                     double p) {
  require_same_dim(t.dim_in(), g_in.dim(), "power_reference_certificate (input)");
  require_same_dim(t.dim_out(), g_out.dim(), "power_reference_certificate (output)");
  if (cert.slope < 0.0 || cert.offset < 0.0) {
    throw Error(ErrorCode::invalid_input, "power_reference_certificate: certificate must be nonnegative");
  }
  const auto f = SpectralFunction::power(p);
  const auto g_in_p = ReferenceHamiltonian::from_psd(spectral_function(g_in.hermitian(), f));
  const HermitianMatrix lhs = t.dual_apply(spectral_function(g_out.hermitian(), f));
  AffineCertificate out{std::pow(cert.slope, p), std::pow(cert.offset, p)};
  out = verify_certificate(out, lhs, g_in_p);
  if (!out.verified) {
    throw Error(ErrorCode::verification_failed,
                "power_reference_certificate: transformed certificate does not verify (residual " +
                    std::to_string(out.residual) + ")");
  }
  return out;
}

inline AffineCertificate sqrt_reference_certificate(const KrausChannel& t, const ReferenceHamiltonian& g_in,
                                                    const ReferenceHamiltonian& g_out, const AffineCertificate& cert) {
  return power_reference_certificate(t, g_in, g_out, cert, 0.5);
}

}  // namespace eclim
