#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eclim/channels.hpp"
#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/opcore.hpp"
#include "eclim/random.hpp"

namespace eclim {

struct NormResult {
  double value = 0.0;
  AffineCertificate cert;
};

/// Energy-constrained operator norm sup{|A psi| : |psi| = 1, <psi|G|psi> <= E},
/// computed as the square root of the dual scan of A*A.
inline NormResult eco_norm(const Matrix& a, const ReferenceHamiltonian& g, double e) {
  require_same_dim(a.cols(), g.dim(), "eco_norm");
  const auto r = dual_scan(HermitianMatrix(Matrix(linalg::hermitian_part(a.adjoint() * a))), g, e);
  return {std::sqrt(std::max(0.0, r.value)), r.cert};
}

// ---------------------------------------------------------------------------
// Primal side: projected ascent over energy-constrained states.

namespace detail {

// Euclidean projection onto {rho >= 0, tr rho = 1, tr[G rho] <= e}. The
// multiplier mu of the energy constraint is found by safeguarded regula falsi
// on the nonincreasing map mu -> tr[G P(X - mu G)], P the spectraplex projection.
class StateProjector {
 public:
  StateProjector(const Matrix& g, double e) : g_(g), e_(e) {}

  Matrix project(const Matrix& x) const {
    Matrix rho = spectraplex(x);
    if (energy_of(rho) <= e_) return rho;

    double lo = 0.0;
    double h_lo = energy_of(rho) - e_;
    double hi = 1.0;
    Matrix rho_hi = spectraplex(x - hi * g_);
    double h_hi = energy_of(rho_hi) - e_;
    for (int i = 0; h_hi > 0.0 && i < 200; ++i) {
      lo = hi;
      h_lo = h_hi;
      hi *= 4.0;
      rho_hi = spectraplex(x - hi * g_);
      h_hi = energy_of(rho_hi) - e_;
    }
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      if (h_hi > -1e-15 * (1.0 + e_) || hi - lo <= 1e-15 * hi) break;
      double mid = (lo * h_hi - hi * h_lo) / (h_hi - h_lo);
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
      const Matrix rho_mid = spectraplex(x - mid * g_);
      const double h_mid = energy_of(rho_mid) - e_;
      if (h_mid > 0.0) {
        lo = mid;
        h_lo = h_mid;
        if (side == -1) h_hi *= 0.5;
        side = -1;
      } else {
        hi = mid;
        h_hi = h_mid;
        rho_hi = rho_mid;
        if (side == 1) h_lo *= 0.5;
        side = 1;
      }
    }
    return rho_hi;
  }

 private:
  static Matrix spectraplex(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(x));
    const RealVector p = linalg::project_simplex(es.eigenvalues());
    return es.eigenvectors() * p.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  }
  double energy_of(const Matrix& rho) const { return (g_ * rho).trace().real(); }

  const Matrix& g_;
  double e_;
};

// Pure state in span{a, b} (orthonormal) maximizing <M> subject to <G> <= bound,
// where some mixed state in that span already achieves the bound.
inline Vector best_pure_in_plane(const Vector& a, const Vector& b, const Matrix& m, const Matrix& g, double bound) {
  Matrix basis(a.size(), 2);
  basis.col(0) = a;
  basis.col(1) = b;
  const Matrix mc = basis.adjoint() * m * basis;
  const Matrix gc = basis.adjoint() * g * basis;
  auto bloch = [](const Matrix& x) {
    Eigen::Vector3d v(x(0, 1).real(), -x(0, 1).imag(), 0.5 * (x(0, 0).real() - x(1, 1).real()));
    return std::pair<double, Eigen::Vector3d>(0.5 * (x(0, 0).real() + x(1, 1).real()), v);
  };
  const auto [m0, mv] = bloch(mc);
  const auto [g0, gv] = bloch(gc);

  Eigen::Vector3d r;
  const double gnorm = gv.norm();
  const double mnorm = mv.norm();
  const Eigen::Vector3d mhat = mnorm > 0.0 ? Eigen::Vector3d(mv / mnorm) : Eigen::Vector3d(0.0, 0.0, 1.0);
  if (gnorm <= 1e-300) {
    r = mhat;
  } else {
    const Eigen::Vector3d ghat = gv / gnorm;
    const double c = std::clamp((bound - g0) / gnorm, -1.0, 1.0);
    if (mhat.dot(ghat) <= c) {
      r = mhat;
    } else {
      // When M is parallel to G the residual is rounding noise and not orthogonal to ghat.
      Eigen::Vector3d perp = mv - mv.dot(ghat) * ghat;
      if (perp.norm() <= 1e-12 * mnorm) {
        perp = ghat.unitOrthogonal();
      } else {
        perp -= perp.dot(ghat) * ghat;
        perp.normalize();
      }
      r = c * ghat + std::sqrt(std::max(0.0, 1.0 - c * c)) * perp;
    }
  }
  const double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
  const double phi = std::atan2(r.y(), r.x());
  Vector psi = std::cos(0.5 * theta) * a + std::polar(std::sin(0.5 * theta), phi) * b;
  return psi / psi.norm();
}

}  // namespace detail

struct PrimalAscentResult {
  double value = 0.0;
  Matrix state;
};

/// Best of `restarts` projected-gradient ascents of tr[M rho] over states with
/// tr[G rho] <= E. Each ascent is a proximal sequence rho <- P(rho + eta M) with
/// doubling step sizes, started from a Haar-random feasible pure state. Always
/// returns a feasible state, so the value is a certified lower bound.
inline PrimalAscentResult constrained_ascent(const HermitianMatrix& m, const ReferenceHamiltonian& g, double e,
                                             int restarts, std::uint64_t seed, int max_steps = 80) {
  require_same_dim(m.dim(), g.dim(), "constrained_ascent");
  detail::require_positive_energy(e, "constrained_ascent");
  Rng rng(seed);
  const detail::StateProjector projector(g.matrix(), e);
  const double scale = 1.0 + m.norm();
  PrimalAscentResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    const Vector start = fit_energy(random::haar_state(rng, m.dim()), g, e);
    Matrix rho = start * start.adjoint();
    double value = (m.matrix() * rho).trace().real();
    double eta = 1.0 / scale;
    int quiet = 0;
    for (int step = 0; step < max_steps && quiet < 3; ++step) {
      Matrix next = projector.project(rho + eta * m.matrix());
      const double next_value = (m.matrix() * next).trace().real();
      quiet = std::abs(next_value - value) <= 1e-15 * scale ? quiet + 1 : 0;
      rho = std::move(next);
      value = next_value;
      if (eta < 1e7 / scale) eta *= 2.0;
    }
    if (value > best.value) {
      best.value = value;
      best.state = rho;
    }
  }
  return best;
}

/// Converts a feasible mixed state into a pure state with no smaller <M> and no
/// larger <G>, merging eigencomponents pairwise inside their two-dimensional spans.
inline Vector purify_constrained(const Matrix& rho, const Matrix& m, const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(rho));
  const Eigen::Index d = rho.rows();
  Vector psi = es.eigenvectors().col(d - 1);
  double weight = std::max(0.0, es.eigenvalues()(d - 1));
  for (Eigen::Index i = d - 2; i >= 0; --i) {
    const double p = es.eigenvalues()(i);
    if (p <= 1e-15) continue;
    const Vector u = es.eigenvectors().col(i);
    Vector b = u - psi.dot(u) * psi;
    const double bn = b.norm();
    if (bn <= 1e-12) {
      weight += p;
      continue;
    }
    b /= bn;
    const double total = weight + p;
    const double g_mixed = (weight * psi.dot(g * psi).real() + p * u.dot(g * u).real()) / total;
    psi = detail::best_pure_in_plane(psi, b, m, g, g_mixed);
    weight = total;
  }
  return psi / psi.norm();
}

struct PrimalNormResult {
  double value = 0.0;
  Vector witness;
};

/// Primal estimate of the ECO norm: projected ascent on A*A followed by
/// purification. Never exceeds eco_norm beyond rounding.
inline PrimalNormResult eco_norm_primal(const Matrix& a, const ReferenceHamiltonian& g, double e, int restarts,
                                        std::uint64_t seed) {
  require_same_dim(a.cols(), g.dim(), "eco_norm_primal");
  if (restarts < 1) throw Error(ErrorCode::invalid_input, "eco_norm_primal: restarts must be >= 1");
  const HermitianMatrix ata(Matrix(linalg::hermitian_part(a.adjoint() * a)));
  const auto ascent = constrained_ascent(ata, g, e, restarts, seed);
  Vector psi = purify_constrained(ascent.state, ata.matrix(), g.matrix());
  psi = fit_energy(psi, g, e);
  return {(a * psi).norm(), psi};
}

/// Exact energy-constrained diamond norm of a trace-nonincreasing CP map:
/// sup over energy-constrained states of tr[T rho] = dual scan of T*(1).
inline NormResult ecd_norm_cp(const KrausChannel& t, const ReferenceHamiltonian& g, double e) {
  require_same_dim(t.dim_in(), g.dim(), "ecd_norm_cp");
  const auto r = dual_scan(t.kraus_sum(), g, e);
  return {r.value, r.cert};
}

// ---------------------------------------------------------------------------
// *-preserving maps as differences of CP maps.

/// The map T+ - T-, with both parts given by Kraus lists.
class CpDifference {
 public:
  CpDifference() = default;
  CpDifference(CpMap plus, CpMap minus) : plus_(std::move(plus)), minus_(std::move(minus)) {
    require_same_dim(plus_.dim_in(), minus_.dim_in(), "CpDifference (input)");
    require_same_dim(plus_.dim_out(), minus_.dim_out(), "CpDifference (output)");
  }
  static CpDifference of(const CpMap& t) { return {t, CpMap::zero(t.dim_in(), t.dim_out())}; }

  Eigen::Index dim_in() const { return plus_.dim_in(); }
  Eigen::Index dim_out() const { return plus_.dim_out(); }
  const CpMap& plus() const { return plus_; }
  const CpMap& minus() const { return minus_; }

  Matrix apply(const Matrix& rho) const { return plus_.apply(rho) - minus_.apply(rho); }
  Matrix dual_apply(const Matrix& b) const { return plus_.dual_apply(b) - minus_.dual_apply(b); }

  CpDifference tensor_identity(Eigen::Index r) const {
    return {plus_.tensor_identity(r), minus_.tensor_identity(r)};
  }

  /// (this o first)
  CpDifference after(const CpDifference& first) const {
    return {plus_.after(first.plus_).plus(minus_.after(first.minus_)),
            plus_.after(first.minus_).plus(minus_.after(first.plus_))};
  }

  friend CpDifference operator-(const CpDifference& a, const CpDifference& b) {
    return {a.plus_.plus(b.minus_), a.minus_.plus(b.plus_)};
  }
  friend CpDifference operator+(const CpDifference& a, const CpDifference& b) {
    return {a.plus_.plus(b.plus_), a.minus_.plus(b.minus_)};
  }

 private:
  CpMap plus_;
  CpMap minus_;
};

/// [A, B] = AB - BA for maps on a common space.
inline CpDifference commutator(const CpDifference& a, const CpDifference& b) { return a.after(b) - b.after(a); }

struct EcdEstimate {
  enum class Kind { exact_dual, seesaw_lower };

  double value = 0.0;
  Kind kind = Kind::seesaw_lower;
  int restarts_used = 0;
  /// Pure input on system (x) ancilla attaining value (see-saw only).
  std::optional<DensityState> witness_state;
  /// Values after each see-saw round of the winning restart.
  std::vector<double> trajectory;
};

inline std::string_view to_string(EcdEstimate::Kind k) {
  return k == EcdEstimate::Kind::exact_dual ? "exact_dual" : "seesaw_lower";
}

struct SeesawOptions {
  Eigen::Index ancilla_dim = -1;  // system dimension when negative
  int restarts = 64;
  std::uint64_t seed = 0;
  int max_rounds = 200;
  double stagnation = 1e-8;
};

namespace detail {

inline Matrix sign_operator(const Matrix& x, double* trace_norm) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(x));
  RealVector s = es.eigenvalues();
  *trace_norm = s.cwiseAbs().sum();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = s(i) > 0.0 ? 1.0 : (s(i) < 0.0 ? -1.0 : 0.0);
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Certified lower bound on the energy-constrained diamond norm of T+ - T- by
/// alternating exact maximizations: the trace norm of the image for a fixed
/// input, then the best energy-constrained input for the fixed sign operator.
inline EcdEstimate ecd_norm_seesaw(const CpDifference& s, const ReferenceHamiltonian& g, double e,
                                   SeesawOptions opt = {}) {
  require_same_dim(s.dim_in(), g.dim(), "ecd_norm_seesaw");
  detail::require_positive_energy(e, "ecd_norm_seesaw");
  const Eigen::Index r = opt.ancilla_dim < 0 ? g.dim() : opt.ancilla_dim;
  if (r < 1) throw Error(ErrorCode::invalid_input, "ecd_norm_seesaw: ancilla_dim must be >= 1");
  const CpDifference sr = s.tensor_identity(r);
  const ReferenceHamiltonian gr = with_ancilla(g, r);
  const Eigen::Index n = gr.dim();

  EcdEstimate best;
  best.kind = EcdEstimate::Kind::seesaw_lower;
  best.restarts_used = std::max(1, opt.restarts);
  best.value = -1.0;
  Rng rng(opt.seed);
  for (int restart = 0; restart < best.restarts_used; ++restart) {
    const Vector start = random::haar_state(rng, n);
    double ignored = 0.0;
    Matrix w = detail::sign_operator(sr.apply(start * start.adjoint()), &ignored);
    std::vector<double> trajectory;
    Vector best_psi;
    double value = -1.0;
    for (int round = 0; round < opt.max_rounds; ++round) {
      const HermitianMatrix target(Matrix(linalg::hermitian_part(sr.dual_apply(w))));
      const Vector psi = energy_constrained_maximizer(target, gr, e).state;
      double next = 0.0;
      w = detail::sign_operator(sr.apply(psi * psi.adjoint()), &next);
      trajectory.push_back(next);
      const bool improved = next > value;
      if (improved) {
        best_psi = psi;
      }
      const double prev = value;
      value = std::max(value, next);
      if (round > 0 && next - prev <= opt.stagnation) break;
    }
    if (value > best.value) {
      best.value = value;
      best.witness_state = DensityState::pure(best_psi);
      best.trajectory = std::move(trajectory);
    }
  }
  best.value = std::max(0.0, best.value);
  return best;
}

}  // namespace eclim
