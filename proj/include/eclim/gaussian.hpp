#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/opcore.hpp"
#include "eclim/random.hpp"

namespace eclim::gaussian {

/// sigma = [[0, -1_n], [1_n, 0]] for the ordering R = (Q_1..Q_n, P_1..P_n).
inline RealMatrix symplectic_form(Eigen::Index modes) {
  RealMatrix s = RealMatrix::Zero(2 * modes, 2 * modes);
  s.topRightCorner(modes, modes) = -RealMatrix::Identity(modes, modes);
  s.bottomLeftCorner(modes, modes) = RealMatrix::Identity(modes, modes);
  return s;
}

namespace detail {

inline double min_eig(const Matrix& h) { return linalg::min_eigenvalue(Matrix(linalg::hermitian_part(h))); }

inline void require_symmetric(const RealMatrix& a, const char* what) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::dimension_mismatch, std::string(what) + " must be square");
  if (!a.allFinite()) throw Error(ErrorCode::invalid_input, std::string(what) + " has a non-finite entry");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + a.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::invalid_input, std::string(what) + " must be symmetric");
  }
}

inline Eigen::Index modes_of(const RealMatrix& a, const char* what) {
  if (a.rows() % 2 != 0) throw Error(ErrorCode::dimension_mismatch, std::string(what) + " must have even size");
  return a.rows() / 2;
}

}  // namespace detail

class GaussianState {
 public:
  GaussianState(RealMatrix gamma, RealVector beta) : gamma_(std::move(gamma)), beta_(std::move(beta)) {
    detail::require_symmetric(gamma_, "GaussianState: covariance");
    modes_ = detail::modes_of(gamma_, "GaussianState: covariance");
    require_same_dim(beta_.size(), gamma_.rows(), "GaussianState: displacement");
    if (!beta_.allFinite()) throw Error(ErrorCode::invalid_input, "GaussianState: non-finite displacement");
    gamma_ = 0.5 * (gamma_ + gamma_.transpose()).eval();
    const Matrix c = gamma_.cast<Complex>() + kI * symplectic_form(modes_).cast<Complex>();
    if (detail::min_eig(c) < -1e-9 * (1.0 + gamma_.norm())) {
      throw Error(ErrorCode::invalid_input, "GaussianState: gamma + i sigma is not positive");
    }
  }

  static GaussianState vacuum(Eigen::Index modes) {
    return {RealMatrix::Identity(2 * modes, 2 * modes), RealVector::Zero(2 * modes)};
  }
  static GaussianState thermal(Eigen::Index modes, double nbar) {
    return {(2.0 * nbar + 1.0) * RealMatrix::Identity(2 * modes, 2 * modes), RealVector::Zero(2 * modes)};
  }
  static GaussianState coherent(const RealVector& beta) {
    return {RealMatrix::Identity(beta.size(), beta.size()), beta};
  }

  Eigen::Index modes() const { return modes_; }
  const RealMatrix& gamma() const { return gamma_; }
  const RealVector& beta() const { return beta_; }

 private:
  RealMatrix gamma_;
  RealVector beta_;
  Eigen::Index modes_ = 0;
};

/// gamma' = X^T gamma X + Y, beta' = X^T beta + alpha; X is 2n_A x 2n_B.
class GaussianChannel {
 public:
  GaussianChannel(RealMatrix x, RealMatrix y, RealVector alpha)
      : x_(std::move(x)), y_(std::move(y)), alpha_(std::move(alpha)) {
    detail::require_symmetric(y_, "GaussianChannel: Y");
    if (!x_.allFinite() || !alpha_.allFinite()) throw Error(ErrorCode::invalid_input, "GaussianChannel: non-finite entry");
    modes_in_ = detail::modes_of(x_, "GaussianChannel: X rows");
    modes_out_ = detail::modes_of(y_, "GaussianChannel: Y");
    require_same_dim(x_.cols(), y_.rows(), "GaussianChannel: X columns vs Y");
    require_same_dim(alpha_.size(), y_.rows(), "GaussianChannel: alpha");
    y_ = 0.5 * (y_ + y_.transpose()).eval();
    const RealMatrix sa = symplectic_form(modes_in_);
    const RealMatrix sb = symplectic_form(modes_out_);
    const Matrix c = y_.cast<Complex>() + kI * (sb - x_.transpose() * sa * x_).cast<Complex>();
    if (detail::min_eig(c) < -1e-9 * (1.0 + y_.norm() + x_.squaredNorm())) {
      throw Error(ErrorCode::invalid_input, "GaussianChannel: Y + i sigma_B - i X^T sigma_A X is not positive");
    }
  }

  GaussianChannel(RealMatrix x, RealMatrix y) : GaussianChannel(x, y, RealVector::Zero(y.rows())) {}

  static GaussianChannel identity(Eigen::Index modes) {
    return {RealMatrix::Identity(2 * modes, 2 * modes), RealMatrix::Zero(2 * modes, 2 * modes)};
  }
  static GaussianChannel attenuator(Eigen::Index modes, double eta) {
    const RealMatrix id = RealMatrix::Identity(2 * modes, 2 * modes);
    return {std::sqrt(eta) * id, (1.0 - eta) * id};
  }
  static GaussianChannel amplifier(Eigen::Index modes, double gain) {
    const RealMatrix id = RealMatrix::Identity(2 * modes, 2 * modes);
    return {std::sqrt(gain) * id, (gain - 1.0) * id};
  }
  static GaussianChannel displacement(const RealVector& alpha) {
    const auto d = alpha.size();
    return {RealMatrix::Identity(d, d), RealMatrix::Zero(d, d), alpha};
  }

  Eigen::Index modes_in() const { return modes_in_; }
  Eigen::Index modes_out() const { return modes_out_; }
  const RealMatrix& x() const { return x_; }
  const RealMatrix& y() const { return y_; }
  const RealVector& alpha() const { return alpha_; }

 private:
  RealMatrix x_;
  RealMatrix y_;
  RealVector alpha_;
  Eigen::Index modes_in_ = 0;
  Eigen::Index modes_out_ = 0;
};

/// Generator of X(t) = e^{t Xdot}, Y(t) = int_0^t X(s)^T Ydot X(s) ds.
/// Valid iff Ydot + i (Xdot^T sigma + sigma Xdot) >= 0.
class GaussianGenerator {
 public:
  GaussianGenerator(RealMatrix xdot, RealMatrix ydot) : xdot_(std::move(xdot)), ydot_(std::move(ydot)) {
    detail::require_symmetric(ydot_, "GaussianGenerator: Ydot");
    if (!xdot_.allFinite()) throw Error(ErrorCode::invalid_input, "GaussianGenerator: non-finite Xdot");
    if (xdot_.rows() != xdot_.cols()) throw Error(ErrorCode::dimension_mismatch, "GaussianGenerator: Xdot must be square");
    require_same_dim(xdot_.rows(), ydot_.rows(), "GaussianGenerator: Xdot vs Ydot");
    modes_ = detail::modes_of(ydot_, "GaussianGenerator: Ydot");
    ydot_ = 0.5 * (ydot_ + ydot_.transpose()).eval();
    if (detail::min_eig(constraint_matrix()) < -1e-9 * (1.0 + ydot_.norm() + xdot_.norm())) {
      throw Error(ErrorCode::invalid_input, "GaussianGenerator: Ydot + i(Xdot^T sigma + sigma Xdot) is not positive");
    }
  }

  /// One-mode damping at rate kappa towards the thermal state nbar.
  static GaussianGenerator damping(double kappa, double nbar = 0.0) {
    return {-0.5 * kappa * RealMatrix::Identity(2, 2), kappa * (2.0 * nbar + 1.0) * RealMatrix::Identity(2, 2)};
  }

  Eigen::Index modes() const { return modes_; }
  const RealMatrix& xdot() const { return xdot_; }
  const RealMatrix& ydot() const { return ydot_; }

  Matrix constraint_matrix() const {
    const RealMatrix s = symplectic_form(modes_);
    return ydot_.cast<Complex>() + kI * (xdot_.transpose() * s + s * xdot_).cast<Complex>();
  }

 private:
  RealMatrix xdot_;
  RealMatrix ydot_;
  Eigen::Index modes_ = 0;
};

/// Mean photon number (1/4) tr gamma + (1/2) beta^2 - n/2.
inline double state_energy(const GaussianState& s) {
  return 0.25 * s.gamma().trace() + 0.5 * s.beta().squaredNorm() - 0.5 * static_cast<double>(s.modes());
}

inline GaussianState apply_channel(const GaussianChannel& c, const GaussianState& s) {
  require_same_dim(s.gamma().rows(), c.x().rows(), "apply_channel");
  return {RealMatrix(c.x().transpose() * s.gamma() * c.x() + c.y()), RealVector(c.x().transpose() * s.beta() + c.alpha())};
}

/// ||X||^2 E + tr(Y)/4 + ||X||^2 n_A/2 - n_B/2 for a nondisplacing channel.
inline double channel_energy_bound(const GaussianChannel& c, double e) {
  if (c.alpha().cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorCode::invalid_input, "channel_energy_bound: channel must be nondisplacing");
  }
  const double x2 = std::pow(linalg::operator_norm(c.x()), 2);
  return x2 * e + 0.25 * c.y().trace() + x2 * 0.5 * static_cast<double>(c.modes_in()) -
         0.5 * static_cast<double>(c.modes_out());
}

struct Dictionary {
  Matrix m;
  RealMatrix h;
};

/// m = (1/2) sigma^T Ydot sigma + (i/2)(sigma Xdot^T + Xdot sigma), h = (1/2)(sigma Xdot^T - Xdot sigma).
/// With this normalization m >= 0 is equivalent to the generator constraint.
inline Dictionary generator_dictionary(const GaussianGenerator& g) {
  const RealMatrix s = symplectic_form(g.modes());
  const RealMatrix re = 0.5 * s.transpose() * g.ydot() * s;
  const RealMatrix im = 0.5 * (s * g.xdot().transpose() + g.xdot() * s);
  Dictionary d;
  d.m = re.cast<Complex>() + kI * im.cast<Complex>();
  d.h = 0.5 * (s * g.xdot().transpose() - g.xdot() * s);
  return d;
}

/// Inverse of generator_dictionary: Ydot = 2 sigma Re(m) sigma^T, Xdot = (Im(m) - h) sigma^T.
inline GaussianGenerator from_mh(const Matrix& m, const RealMatrix& h) {
  require_same_dim(m.rows(), h.rows(), "from_mh");
  const Eigen::Index modes = detail::modes_of(h, "from_mh: h");
  const RealMatrix s = symplectic_form(modes);
  const RealMatrix ydot = 2.0 * s * m.real() * s.transpose();
  const RealMatrix xdot = (RealMatrix(m.imag()) - h) * s.transpose();
  return {xdot, ydot};
}

/// Y(t) by composite Simpson, doubling the panel count until the Richardson
/// estimate falls below 1e-10 relative.
inline RealMatrix noise_integral(const GaussianGenerator& g, double t) {
  const auto d = g.xdot().rows();
  if (t == 0.0) return RealMatrix::Zero(d, d);
  auto simpson = [&](int panels) {
    const double h = t / panels;
    const RealMatrix step = (h * g.xdot()).exp();
    RealMatrix x = RealMatrix::Identity(d, d);
    RealMatrix sum = RealMatrix::Zero(d, d);
    for (int k = 0; k <= panels; ++k) {
      const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += w * x.transpose() * g.ydot() * x;
      x = (x * step).eval();
    }
    return RealMatrix(sum * (h / 3.0));
  };
  int panels = 16;
  RealMatrix prev = simpson(panels);
  for (int round = 0; round < 20; ++round) {
    panels *= 2;
    RealMatrix next = simpson(panels);
    const double err = (next - prev).cwiseAbs().maxCoeff() / 15.0;
    if (err <= 1e-10 * (1.0 + next.cwiseAbs().maxCoeff())) return next + (next - prev) / 15.0;
    prev = std::move(next);
  }
  throw Error(ErrorCode::non_convergence, "noise_integral: quadrature did not converge");
}

inline GaussianChannel semigroup_channel(const GaussianGenerator& g, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::invalid_input, "evolve_gaussian: t must be >= 0");
  return {RealMatrix((t * g.xdot()).exp()), noise_integral(g, t)};
}

inline GaussianState evolve_gaussian(const GaussianGenerator& g, const GaussianState& s, double t) {
  require_same_dim(g.modes(), s.modes(), "evolve_gaussian");
  return apply_channel(semigroup_channel(g, t), s);
}

/// Exponential constants (omega, E0) when Xdot != 0; for Xdot = 0 the energy
/// grows at most linearly, E + rate t.
struct GaussianStability {
  enum class Kind { exponential, time_affine };
  Kind kind = Kind::exponential;
  double omega = 0.0;
  double e0 = 0.0;
  double rate = 0.0;

  double energy_bound(double e, double t) const {
    if (kind == Kind::time_affine) return e + rate * t;
    return std::exp(omega * t) * (e + e0) - e0;
  }
  StabilityCertificate certificate() const {
    StabilityCertificate c;
    c.omega = omega;
    c.e0 = e0;
    c.verified = kind == Kind::exponential;
    return c;
  }
};

inline const char* to_string(GaussianStability::Kind k) {
  return k == GaussianStability::Kind::exponential ? "exponential" : "time_affine";
}

/// omega = 2||Xdot||, E0 = n/2 + n ||Ydot|| / (4 ||Xdot||). The second term
/// bounds tr(Y(t))/4 through tr <= 2n ||.||.
inline GaussianStability gaussian_stability(const GaussianGenerator& g) {
  const double n = static_cast<double>(g.modes());
  const double xn = linalg::operator_norm(g.xdot());
  const double yn = linalg::operator_norm(g.ydot());
  GaussianStability out;
  if (xn == 0.0) {
    out.kind = GaussianStability::Kind::time_affine;
    out.rate = 0.25 * yn * 2.0 * n;
    return out;
  }
  out.omega = 2.0 * xn;
  out.e0 = 0.5 * n + n * yn / (4.0 * xn);
  return out;
}

namespace random {

/// gamma = S^T diag(nu, nu) S with S = exp(sigma H) symplectic and nu >= 1.
inline GaussianState state(Rng& rng, Eigen::Index modes, double squeeze = 0.3, double displacement = 1.0) {
  const RealMatrix s = symplectic_form(modes);
  RealMatrix h = rng.real_normal(2 * modes, 2 * modes);
  h = ((0.5 * squeeze) * (h + h.transpose())).eval();
  const RealMatrix sym = (s * h).exp();
  RealVector nu(2 * modes);
  for (Eigen::Index j = 0; j < modes; ++j) nu(j) = nu(j + modes) = 1.0 + rng.uniform(0.0, 2.0);
  RealMatrix gamma = sym.transpose() * nu.asDiagonal() * sym;
  gamma = 0.5 * (gamma + gamma.transpose()).eval();
  return {gamma, RealVector(displacement * rng.real_normal(2 * modes, 1).col(0))};
}

/// Random X with the least isotropic noise that keeps the channel CP, plus extra PSD noise.
inline GaussianChannel channel(Rng& rng, Eigen::Index modes_in, Eigen::Index modes_out, double scale = 1.0) {
  const RealMatrix x = scale * rng.real_normal(2 * modes_in, 2 * modes_out) / std::sqrt(2.0 * modes_in);
  const RealMatrix anti = symplectic_form(modes_out) - x.transpose() * symplectic_form(modes_in) * x;
  const RealMatrix extra = rng.real_normal(2 * modes_out, 2 * modes_out);
  const double base = linalg::operator_norm(anti);
  const RealMatrix y = base * RealMatrix::Identity(2 * modes_out, 2 * modes_out) + 0.2 * extra * extra.transpose();
  return {x, y};
}

inline GaussianGenerator generator(Rng& rng, Eigen::Index modes, double scale = 1.0) {
  const RealMatrix s = symplectic_form(modes);
  const RealMatrix xdot = scale * rng.real_normal(2 * modes, 2 * modes) / std::sqrt(2.0 * modes);
  const RealMatrix anti = xdot.transpose() * s + s * xdot;
  const RealMatrix extra = rng.real_normal(2 * modes, 2 * modes);
  const RealMatrix ydot = linalg::operator_norm(anti) * RealMatrix::Identity(2 * modes, 2 * modes) +
                          0.2 * scale * extra * extra.transpose();
  return {xdot, ydot};
}

}  // namespace random

struct FockCrossCheck {
  double fock_energy = 0.0;
  double gaussian_energy = 0.0;
};

/// Thermal state with mean nbar under L = sqrt(kappa) a, truncated at cutoff,
/// against the covariance-level evolution.
inline FockCrossCheck fock_damping_crosscheck(double kappa, double nbar, double t, Eigen::Index cutoff = 60) {
  const Eigen::Index d = cutoff + 1;
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const auto gen = LindbladGenerator::from_hamiltonian(HermitianMatrix::zero(d), {std::sqrt(kappa) * a});
  RealVector weights(d);
  const double q = nbar / (1.0 + nbar);
  for (Eigen::Index n = 0; n < d; ++n) weights(n) = std::pow(q, static_cast<double>(n));
  weights /= weights.sum();
  const DensityState rho(Matrix(weights.cast<Complex>().asDiagonal()));
  std::vector<double> levels(static_cast<std::size_t>(d));
  for (std::size_t n = 0; n < levels.size(); ++n) levels[n] = static_cast<double>(n);
  const auto number = ReferenceHamiltonian::diagonal(levels);
  FockCrossCheck out;
  out.fock_energy = energy(number, Semigroup(gen).evolve(rho, t));
  out.gaussian_energy = state_energy(evolve_gaussian(GaussianGenerator::damping(kappa), GaussianState::thermal(1, nbar), t));
  return out;
}

}  // namespace eclim::gaussian
