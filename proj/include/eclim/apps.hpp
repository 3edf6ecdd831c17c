#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/models.hpp"
#include "eclim/norms.hpp"
#include "eclim/opcore.hpp"
#include "eclim/random.hpp"

namespace eclim::apps {

/// E + (e^{omega t} - 1)(E + E0).
inline double grown_energy(const StabilityCertificate& c, double e, double t) {
  return e + std::expm1(c.omega * std::abs(t)) * (e + c.e0);
}

inline std::vector<double> uniform_grid(double tmax, int steps) {
  if (steps < 1 || !(tmax >= 0.0)) throw Error(ErrorCode::invalid_input, "time grid needs steps >= 1 and tmax >= 0");
  std::vector<double> grid;
  for (int k = 0; k < steps; ++k) grid.push_back(tmax * k / (steps - 1 > 0 ? steps - 1 : 1));
  return grid;
}

namespace detail {

inline void require_time_grid(const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0) throw Error(ErrorCode::invalid_input, "time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::invalid_input, "time grid must be ascending");
  }
}

/// psi -> e^{-itH} psi through one eigendecomposition.
class UnitaryFlow {
 public:
  explicit UnitaryFlow(const HermitianMatrix& h) : es_(h.matrix()) {}
  Vector apply(const Vector& psi, double t) const {
    Vector c = es_.eigenvectors().adjoint() * psi;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-kI * (t * es_.eigenvalues()(i)));
    return es_.eigenvectors() * c;
  }

 private:
  Eigen::SelfAdjointEigenSolver<Matrix> es_;
};

inline std::vector<StabilityCertificate> unitary_certificates(const HermitianMatrix& h, const ReferenceHamiltonian& g) {
  const HermitianMatrix m(Matrix(linalg::hermitian_part(kI * (h.matrix() * g.matrix() - g.matrix() * h.matrix()))));
  std::vector<StabilityCertificate> out;
  for (double e0 : default_e0_grid(g)) out.push_back(min_omega(m, g, e0, true));
  return out;
}

/// ECO norm that also accepts a zero budget: then only the ground space of G is allowed.
inline double eco_norm_or_ground(const Matrix& a, const ReferenceHamiltonian& g, double e) {
  if (e > 0.0) return eco_norm(a, g, e).value;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.matrix());
  const double cut = 1e-12 * (1.0 + g.max_eigenvalue());
  Eigen::Index k = 0;
  while (k < es.eigenvalues().size() && es.eigenvalues()(k) <= cut) ++k;
  const Matrix ground = es.eigenvectors().leftCols(k);
  return linalg::operator_norm(Matrix(a * ground));
}

inline StabilityCertificate best_growth(const std::vector<StabilityCertificate>& certs, double e, double t) {
  return best_for_bound(certs, e, t);
}

}  // namespace detail

struct SpeedLimitRow {
  double time = 0.0;
  double actual_error = 0.0;
  double energy_bound = 0.0;
  double uniform_bound = 0.0;
};

struct SpeedLimitResult {
  std::vector<SpeedLimitRow> rows;
  double energy = 0.0;
  bool ordering_holds = true;
};

/// Rows of |e^{-itH1}psi - e^{-itH2}psi| <= t |H1 - H2|_{op, f_t(E)} <= t |H1 - H2|. The
/// stability constants are the best over both Hamiltonians and the E0 grid.
inline SpeedLimitResult speedlimit_rows(const HermitianMatrix& h1, const HermitianMatrix& h2,
                                        const ReferenceHamiltonian& g, const Vector& psi,
                                        const std::vector<double>& times, bool first_order = false) {
  require_same_dim(h1.dim(), g.dim(), "speedlimit");
  require_same_dim(h2.dim(), g.dim(), "speedlimit");
  require_same_dim(psi.size(), g.dim(), "speedlimit");
  detail::require_time_grid(times);
  std::vector<StabilityCertificate> certs = detail::unitary_certificates(h1, g);
  const auto certs2 = detail::unitary_certificates(h2, g);
  certs.insert(certs.end(), certs2.begin(), certs2.end());
  const detail::UnitaryFlow u1(h1), u2(h2);
  const Matrix diff = h1.matrix() - h2.matrix();
  const double uniform = linalg::hermitian_norm(diff);

  SpeedLimitResult out;
  out.energy = energy(g, psi);
  for (double t : times) {
    SpeedLimitRow row;
    row.time = t;
    if (t > 0.0) {
      row.actual_error = (u1.apply(psi, t) - u2.apply(psi, t)).norm();
      const double budget = first_order ? out.energy : grown_energy(detail::best_growth(certs, out.energy, t), out.energy, t);
      row.energy_bound = t * detail::eco_norm_or_ground(diff, g, budget);
      row.uniform_bound = t * uniform;
    }
    const double tol = 1e-7 * (1.0 + row.uniform_bound);
    if (!first_order) out.ordering_holds = out.ordering_holds && row.actual_error <= row.energy_bound + tol;
    out.ordering_holds = out.ordering_holds && row.energy_bound <= row.uniform_bound + tol;
    out.rows.push_back(row);
  }
  return out;
}

/// int_0^t |H1 - H2|_{op, f_s(E)} ds by the midpoint rule, for a fixed certificate.
inline double integral_bound(const HermitianMatrix& h1, const HermitianMatrix& h2, const ReferenceHamiltonian& g,
                             double e, const StabilityCertificate& cert, double t, int panels = 64) {
  const Matrix diff = h1.matrix() - h2.matrix();
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double s = t * (k + 0.5) / panels;
    sum += detail::eco_norm_or_ground(diff, g, grown_energy(cert, e, s));
  }
  return sum * t / panels;
}

enum class Scenario { left, right };

inline Scenario parse_scenario(const std::string& s) {
  if (s == "left") return Scenario::left;
  if (s == "right") return Scenario::right;
  throw Error(ErrorCode::invalid_input, "unknown scenario '" + s + "' (expected left or right)");
}

struct SpeedLimitConfig {
  int n_qubits = 7;
  Scenario scenario = Scenario::left;
  std::vector<double> times = uniform_grid(0.6, 60);
  std::uint64_t seed = 0;
  /// Norm of each R_i in the left scenario; the right scenario uses |R| = n_qubits.
  double perturbation_norm = 0.5;
  bool first_order = false;
};

struct SpeedLimitProblem {
  HermitianMatrix h1;
  HermitianMatrix h2;
  Vector psi;
};

/// left: H1 = Sx + R1, H2 = Sy + R2 with |R_i| = 1/2. right: H1 = Sx, H2 = R with
/// |R| = |Sx|. psi = normalize(Omega + phi/2), Omega the ground state of Delta,
/// phi Haar random.
inline SpeedLimitProblem speedlimit_problem(const SpeedLimitConfig& cfg, const models::SpinSystem& spin) {
  Rng rng(cfg.seed);
  const Eigen::Index d = spin.sx.dim();
  SpeedLimitProblem p;
  if (cfg.scenario == Scenario::left) {
    const HermitianMatrix r1 = random::hermitian_with_norm(rng, d, cfg.perturbation_norm);
    const HermitianMatrix r2 = random::hermitian_with_norm(rng, d, cfg.perturbation_norm);
    p.h1 = spin.sx + r1;
    p.h2 = spin.sy + r2;
  } else {
    p.h1 = spin.sx;
    p.h2 = random::hermitian_with_norm(rng, d, static_cast<double>(spin.n_qubits));
  }
  const Vector phi = random::haar_state(rng, d);
  p.psi = spin.reference.ground_state() + 0.5 * phi;
  p.psi /= p.psi.norm();
  return p;
}

inline SpeedLimitResult speedlimit_run(const SpeedLimitConfig& cfg, const models::SpinSystem& spin) {
  if (spin.n_qubits != cfg.n_qubits) throw Error(ErrorCode::invalid_input, "speedlimit_run: spin system size mismatch");
  const auto p = speedlimit_problem(cfg, spin);
  return speedlimit_rows(p.h1, p.h2, spin.reference, p.psi, cfg.times, cfg.first_order);
}

inline SpeedLimitResult speedlimit_run(const SpeedLimitConfig& cfg) {
  return speedlimit_run(cfg, models::spin_system(cfg.n_qubits));
}

/// (full - first_order) / first_order for the energy bound at a single time.
inline double first_order_gap(const SpeedLimitConfig& cfg, const models::SpinSystem& spin, double t) {
  const auto p = speedlimit_problem(cfg, spin);
  const auto full = speedlimit_rows(p.h1, p.h2, spin.reference, p.psi, {0.0, t}, false);
  const auto fo = speedlimit_rows(p.h1, p.h2, spin.reference, p.psi, {0.0, t}, true);
  return (full.rows[1].energy_bound - fo.rows[1].energy_bound) / fo.rows[1].energy_bound;
}

enum class CheckStatus { pass, inconclusive, fail };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::fail: return "fail";
  }
  return "fail";
}

inline CheckStatus worst(CheckStatus a, CheckStatus b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

struct OpenSpeedLimitRow {
  double time = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// t (|P|_{diamond,f} + |N|_{diamond,f}) for L1 - L2 = P - N: exact, but looser.
  double cp_bound = 0.0;
  CheckStatus status = CheckStatus::pass;
};

struct OpenSpeedLimitReport {
  std::vector<OpenSpeedLimitRow> rows;
  CheckStatus status = CheckStatus::pass;
};

inline double cp_part_bound(const CpMap& t, const ReferenceHamiltonian& g, double e) {
  if (t.kraus().empty()) return 0.0;
  return dual_scan(t.kraus_sum(), g, e).value;
}

/// max over sampled states of |T1(t) rho - T2(t) rho|_1 against t |L1 - L2|_{diamond, f_t(E)}
/// (see-saw lower estimate). A shortfall that stays below the exact cp-part
/// bound is reported as inconclusive.
inline OpenSpeedLimitReport open_speedlimit(const LindbladGenerator& gen1, const LindbladGenerator& gen2,
                                            const ReferenceHamiltonian& g, double e, const std::vector<double>& times,
                                            int n_states = 20, std::uint64_t seed = 0, SeesawOptions opt = {}) {
  require_same_dim(gen1.dim(), g.dim(), "open_speedlimit");
  require_same_dim(gen2.dim(), g.dim(), "open_speedlimit");
  std::vector<StabilityCertificate> certs = stability_curve(gen1, g, default_e0_grid(g));
  const auto certs2 = stability_curve(gen2, g, default_e0_grid(g));
  certs.insert(certs.end(), certs2.begin(), certs2.end());
  const CpDifference diff = gen1.as_cp_difference() - gen2.as_cp_difference();
  const Semigroup s1(gen1), s2(gen2);
  Rng rng(seed);
  std::vector<DensityState> states;
  for (int i = 0; i < n_states; ++i) states.push_back(random::state_with_energy(rng, g, e));

  OpenSpeedLimitReport report;
  for (double t : times) {
    OpenSpeedLimitRow row;
    row.time = t;
    if (t > 0.0) {
      const double f = grown_energy(best_for_bound(certs, e, t), e, t);
      const Propagator p1 = s1.propagator(t), p2 = s2.propagator(t);
      for (const auto& rho : states) {
        row.lhs = std::max(row.lhs, linalg::trace_norm(Matrix(p1.apply(rho.matrix()) - p2.apply(rho.matrix()))));
      }
      row.rhs = t * ecd_norm_seesaw(diff, g, f, opt).value;
      row.cp_bound = t * (cp_part_bound(diff.plus(), g, f) + cp_part_bound(diff.minus(), g, f));
    }
    if (row.lhs <= row.rhs + 1e-6) {
      row.status = CheckStatus::pass;
    } else if (row.lhs <= row.cp_bound + 1e-6) {
      row.status = CheckStatus::inconclusive;
    } else {
      row.status = CheckStatus::fail;
    }
    report.status = worst(report.status, row.status);
    report.rows.push_back(row);
  }
  return report;
}

struct TrotterRow {
  int steps = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  CheckStatus status = CheckStatus::pass;
};

struct TrotterReport {
  std::vector<TrotterRow> rows;
  StabilityCertificate joint;
  double commutator_norm = 0.0;
  /// Least-squares slope of -log(lhs) against log(n); empty when lhs vanishes.
  std::optional<double> decay_exponent;
  CheckStatus status = CheckStatus::pass;
};

/// Joint constants for two generators: on each E0 of the grid take the larger
/// omega, then keep the pair minimizing the energy growth at time t.
inline StabilityCertificate joint_stability(const LindbladGenerator& gen1, const LindbladGenerator& gen2,
                                            const ReferenceHamiltonian& g, double e, double t) {
  const auto grid = default_e0_grid(g);
  const auto c1 = stability_curve(gen1, g, grid);
  const auto c2 = stability_curve(gen2, g, grid);
  std::vector<StabilityCertificate> joint;
  for (std::size_t i = 0; i < grid.size(); ++i) joint.push_back(joint_certificate(c1[i], c2[i]));
  return best_for_bound(joint, e, t);
}

/// |(T1(t/n) T2(t/n))^n rho - e^{t(L1+L2)} rho|_1 against (t^2/2n) |[L1, L2]|_{diamond, f_2t(E)}.
inline TrotterReport trotter_run(const LindbladGenerator& gen1, const LindbladGenerator& gen2,
                                 const ReferenceHamiltonian& g, double e, double t, const std::vector<int>& n_grid,
                                 int n_states = 20, std::uint64_t seed = 0, SeesawOptions opt = {}) {
  require_same_dim(gen1.dim(), g.dim(), "trotter_run");
  require_same_dim(gen2.dim(), g.dim(), "trotter_run");
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_input, "trotter_run: time must be positive");
  TrotterReport report;
  report.joint = joint_stability(gen1, gen2, g, e, 2.0 * t);
  const CpDifference comm = commutator(gen1.as_cp_difference(), gen2.as_cp_difference());
  report.commutator_norm = ecd_norm_seesaw(comm, g, grown_energy(report.joint, e, 2.0 * t), opt).value;

  Rng rng(seed);
  std::vector<DensityState> states;
  for (int i = 0; i < n_states; ++i) states.push_back(random::state_with_energy(rng, g, e));
  const Semigroup s1(gen1), s2(gen2), full(gen1 + gen2);
  const Propagator exact = full.propagator(t);
  std::vector<Matrix> targets;
  for (const auto& rho : states) targets.push_back(exact.apply(rho.matrix()));

  std::vector<double> xs, ys;
  for (int n : n_grid) {
    if (n < 1) throw Error(ErrorCode::invalid_input, "trotter_run: step counts must be >= 1");
    const Propagator p1 = s1.propagator(t / n), p2 = s2.propagator(t / n);
    TrotterRow row;
    row.steps = n;
    for (std::size_t i = 0; i < states.size(); ++i) {
      Matrix rho = states[i].matrix();
      for (int k = 0; k < n; ++k) rho = p1.apply(p2.apply(rho));
      row.lhs = std::max(row.lhs, linalg::trace_norm(Matrix(linalg::hermitian_part(rho - targets[i]))));
    }
    row.rhs = t * t / (2.0 * n) * report.commutator_norm;
    row.status = row.lhs <= row.rhs + 1e-6 ? CheckStatus::pass : CheckStatus::fail;
    report.status = worst(report.status, row.status);
    if (row.lhs > 1e-13) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(-std::log(row.lhs));
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 2 && xs.size() == n_grid.size()) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    report.decay_exponent = sxy / sxx;
  }
  return report;
}

struct GroupQslResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double omega = 0.0;
  bool holds = true;
};

/// |e^{-iA(X)}psi - e^{-iA(Y)}psi| <= ((e^w - 1)/w) |X - Y| |sqrt(Delta) psi|, w = min(|ad_X|, |ad_Y|).
inline GroupQslResult group_qsl(const models::SpinSystem& spin, const RealVector& cx, const RealVector& cy,
                                const Vector& psi) {
  require_same_dim(psi.size(), spin.sx.dim(), "group_qsl");
  if (cx.size() != 3 || cy.size() != 3) throw Error(ErrorCode::dimension_mismatch, "group_qsl: expected 3 coefficients");
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw Error(ErrorCode::invalid_input, "group_qsl: psi must be a unit vector");
  GroupQslResult r;
  const detail::UnitaryFlow ux(spin.generator(cx)), uy(spin.generator(cy));
  r.lhs = (ux.apply(psi, 1.0) - uy.apply(psi, 1.0)).norm();
  r.omega = std::min(models::ad_norm_su2(cx), models::ad_norm_su2(cy));
  const double factor = r.omega == 0.0 ? 1.0 : std::expm1(r.omega) / r.omega;
  const double sqrt_delta_psi = std::sqrt(std::max(0.0, (psi.adjoint() * spin.laplacian.matrix() * psi)(0).real()));
  r.rhs = factor * (cx - cy).norm() * sqrt_delta_psi;
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

}  // namespace eclim::apps
