#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "eclim/apps.hpp"
#include "eclim/channels.hpp"
#include "eclim/gaussian.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/models.hpp"
#include "eclim/norms.hpp"
#include "eclim/opcore.hpp"

namespace eclim::selftest {

struct Check {
  std::string name;
  std::function<bool()> run;
};

namespace detail {

inline bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }
inline bool close(const Matrix& a, const Matrix& b, double tol = 1e-9) {
  return a.rows() == b.rows() && a.cols() == b.cols() && linalg::max_abs(a - b) <= tol;
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline ReferenceHamiltonian qubit_ref() { return ReferenceHamiltonian::diagonal({0.0, 1.0}); }

}  // namespace detail

/// The constant-answer examples of every module, as quick smoke checks.
inline std::vector<Check> checks() {
  using namespace detail;
  std::vector<Check> c;
  c.push_back({"psd order diag(0,1) <= diag(1,2)", [] {
                 return psd_order_leq(HermitianMatrix::diagonal({0, 1}), HermitianMatrix::diagonal({1, 2}));
               }});
  c.push_back({"psd order identity vs pauli x", [] {
                 return !psd_order_leq(HermitianMatrix::identity(2), HermitianMatrix(pauli_x()));
               }});
  c.push_back({"ground shift diag(3,5)", [] {
                 const auto g = ground_shift(HermitianMatrix::diagonal({3, 5}));
                 return close(g.matrix(), HermitianMatrix::diagonal({0, 2}).matrix()) && close(g.ground_energy_removed(), 3);
               }});
  c.push_back({"ground shift diag(0,1)", [] {
                 const auto g = ground_shift(HermitianMatrix::diagonal({0, 1}));
                 return close(g.matrix(), HermitianMatrix::diagonal({0, 1}).matrix()) && close(g.ground_energy_removed(), 0);
               }});
  c.push_back({"energy of plus state", [] {
                 Vector plus(2);
                 plus << 1, 1;
                 plus /= std::sqrt(2.0);
                 return close(energy(qubit_ref(), DensityState::pure(plus)), 0.5);
               }});
  c.push_back({"energy of ground state", [] {
                 return close(energy(qubit_ref(), DensityState::pure(Vector::Unit(2, 0))), 0.0);
               }});
  c.push_back({"energy of maximally mixed qutrit", [] {
                 return close(energy(ReferenceHamiltonian::diagonal({0, 1, 2}), DensityState::maximally_mixed(3)), 1.0);
               }});
  c.push_back({"dual scan of identity", [] {
                 const auto r = dual_scan(HermitianMatrix::identity(2), qubit_ref(), 0.3);
                 return close(r.value, 1.0, 1e-8) && close(r.cert.slope, 0.0, 1e-8) && close(r.cert.offset, 1.0, 1e-8);
               }});
  c.push_back({"dual scan of zero", [] {
                 const auto r = dual_scan(HermitianMatrix::zero(2), qubit_ref(), 0.3);
                 return close(r.value, 0.0, 1e-8) && close(r.cert.offset, 0.0, 1e-8);
               }});
  c.push_back({"sqrt of diag(0,4)", [] {
                 return close(spectral_function(HermitianMatrix::diagonal({0, 4}), SpectralFunction::square_root()).matrix(),
                              HermitianMatrix::diagonal({0, 2}).matrix());
               }});
  c.push_back({"sqrt of identity", [] {
                 return close(spectral_function(HermitianMatrix::identity(3), SpectralFunction::square_root()).matrix(),
                              linalg::identity(3));
               }});
  c.push_back({"eco norm of pauli x", [] { return close(eco_norm(pauli_x(), qubit_ref(), 0.4).value, 1.0, 1e-8); }});
  c.push_back({"eco norm of zero", [] { return close(eco_norm(Matrix::Zero(2, 2), qubit_ref(), 0.4).value, 0.0, 1e-8); }});
  c.push_back({"eco norm of identity", [] { return close(eco_norm(linalg::identity(2), qubit_ref(), 0.4).value, 1.0, 1e-8); }});
  c.push_back({"ecd norm of a channel", [] {
                 return close(ecd_norm_cp(channel::amplitude_damping(0.3), qubit_ref(), 0.2).value, 1.0, 1e-8);
               }});
  c.push_back({"ecd norm of zero map", [] {
                 return close(ecd_norm_cp(channel::zero(2, 2), qubit_ref(), 0.2).value, 0.0, 1e-8);
               }});
  c.push_back({"seesaw of T - T", [] {
                 const auto t = CpDifference::of(channel::amplitude_damping(0.3));
                 SeesawOptions opt;
                 opt.restarts = 4;
                 return ecd_norm_seesaw(t - t, qubit_ref(), 0.2, opt).value <= 1e-9;
               }});
  c.push_back({"dual of identity channel", [] {
                 const HermitianMatrix b(pauli_x());
                 return close(channel::identity(2).dual_apply(b).matrix(), b.matrix());
               }});
  c.push_back({"dual of unitary conjugation", [] {
                 const Matrix u = linalg::expm(Matrix(-kI * 0.3 * pauli_x()));
                 const HermitianMatrix b(pauli_z());
                 return close(channel::unitary(u).dual_apply(b).matrix(), Matrix(u.adjoint() * b.matrix() * u));
               }});
  c.push_back({"full amplitude damping", [] {
                 const auto out = channel::amplitude_damping(1.0).apply(DensityState::pure(Vector::Unit(2, 1)));
                 return close(out.matrix(), DensityState::pure(Vector::Unit(2, 0)).matrix());
               }});
  c.push_back({"full depolarizing", [] {
                 const auto out = channel::depolarizing(2, 1.0).apply(DensityState::pure(Vector::Unit(2, 1)));
                 return close(out.matrix(), Matrix(0.5 * linalg::identity(2)));
               }});
  c.push_back({"choi of qubit identity", [] {
                 Matrix bell = Matrix::Zero(4, 4);
                 bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 1.0;
                 return close(channel::identity(2).choi().matrix(), bell);
               }});
  c.push_back({"max output energy of identity", [] {
                 return close(max_output_energy(channel::identity(2), qubit_ref(), qubit_ref(), 0.3).value, 0.3, 1e-8);
               }});
  c.push_back({"energy curve of identity", [] {
                 const auto g = ReferenceHamiltonian::diagonal({0, 1, 3, 5});
                 const auto curve = energy_curve(channel::identity(4), g, g, {1, 2, 4});
                 return close(curve.values[0], 1, 1e-8) && close(curve.values[1], 2, 1e-8) && close(curve.values[2], 4, 1e-8);
               }});
  c.push_back({"energy curve of constant-to-ground", [] {
                 const auto g = ReferenceHamiltonian::diagonal({0, 1, 3});
                 const auto curve = energy_curve(channel::constant(3, Vector::Unit(3, 0)), g, g, {1, 2});
                 return std::abs(curve.values[0]) < 1e-9 && std::abs(curve.values[1]) < 1e-9;
               }});
  c.push_back({"compose (1,0) with (1,0)", [] { return close(compose_energy_bound({1, 0}, {1, 0}, 0.7), 0.7); }});
  c.push_back({"compose (2,1) with (1,0)", [] { return close(compose_energy_bound({2, 1}, {1, 0}, 1.0), 3.0); }});
  c.push_back({"sqrt certificate of identity", [] {
                 const auto cert = sqrt_reference_certificate(channel::identity(2), qubit_ref(), qubit_ref(), {1, 0});
                 return close(cert.slope, 1) && close(cert.offset, 0) && cert.verified;
               }});
  c.push_back({"dissipation matrix of commuting H", [] {
                 const auto gen = LindbladGenerator::from_hamiltonian(HermitianMatrix(pauli_z()));
                 return dissipation_matrix(gen, qubit_ref()).norm() < 1e-12;
               }});
  c.push_back({"min omega of zero", [] {
                 return min_omega(HermitianMatrix::zero(2), qubit_ref(), 1.0).omega == 0.0;
               }});
  c.push_back({"stability curve of commuting case", [] {
                 const auto gen = LindbladGenerator::from_hamiltonian(HermitianMatrix(pauli_z()));
                 for (const auto& cert : stability_curve(gen, qubit_ref(), {0.5, 1, 2})) {
                   if (cert.omega > 1e-12) return false;
                 }
                 return true;
               }});
  c.push_back({"evolve under zero generator", [] {
                 const auto rho = DensityState::maximally_mixed(3);
                 Matrix m = rho.matrix();
                 m(0, 1) = m(1, 0) = 0.1;
                 const DensityState r(m);
                 return close(evolve(LindbladGenerator::zero(3), r, 1.7).matrix(), r.matrix(), 1e-12);
               }});
  c.push_back({"energy bound for commuting Hamiltonian", [] {
                 const auto gen = LindbladGenerator::from_hamiltonian(HermitianMatrix(pauli_z()));
                 const auto cert = min_omega(dissipation_matrix(gen, qubit_ref()), qubit_ref(), 1.0);
                 Vector plus(2);
                 plus << 1, 1;
                 plus /= std::sqrt(2.0);
                 const auto rep = verify_energy_bound(gen, qubit_ref(), cert, DensityState::pure(plus), {0.5, 1.0});
                 return rep.holds && std::abs(rep.worst_margin) < 1e-9;
               }});
  c.push_back({"gaussian vacuum energy", [] { return close(gaussian::state_energy(gaussian::GaussianState::vacuum(1)), 0); }});
  c.push_back({"gaussian identity channel", [] {
                 const auto s = gaussian::GaussianState::thermal(2, 0.4);
                 const auto out = gaussian::apply_channel(gaussian::GaussianChannel::identity(2), s);
                 return (out.gamma() - s.gamma()).norm() < 1e-15 && out.beta().norm() == 0.0;
               }});
  c.push_back({"gaussian displacement on vacuum", [] {
                 RealVector alpha(2);
                 alpha << 0.3, -1.2;
                 const auto out = gaussian::apply_channel(gaussian::GaussianChannel::displacement(alpha),
                                                          gaussian::GaussianState::vacuum(1));
                 return (out.beta() - alpha).norm() < 1e-15;
               }});
  c.push_back({"gaussian identity energy bound", [] {
                 return close(gaussian::channel_energy_bound(gaussian::GaussianChannel::identity(1), 2.5), 2.5);
               }});
  c.push_back({"gaussian zero dictionary", [] {
                 const gaussian::GaussianGenerator g(RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2));
                 const auto d = gaussian::generator_dictionary(g);
                 return d.m.norm() == 0.0 && d.h.norm() == 0.0;
               }});
  c.push_back({"gaussian zero generator", [] {
                 const gaussian::GaussianGenerator g(RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2));
                 const auto s = gaussian::GaussianState::thermal(1, 0.7);
                 return (gaussian::evolve_gaussian(g, s, 1.3).gamma() - s.gamma()).norm() < 1e-14;
               }});
  c.push_back({"gaussian omega homogeneity", [] {
                 const auto g1 = gaussian::GaussianGenerator::damping(1.0);
                 const gaussian::GaussianGenerator g2(2.0 * g1.xdot(), 2.0 * g1.ydot());
                 return close(gaussian::gaussian_stability(g2).omega, 2.0 * gaussian::gaussian_stability(g1).omega);
               }});
  c.push_back({"constant birth rates diverge", [] {
                 return models::birth_tau(models::BirthRates::constant(), 100).verdict == models::TauVerdict::diverges;
               }});
  c.push_back({"birth generator dissipative", [] {
                 return !models::birth_generator(models::BirthRates::constant(), 5).formally_conservative();
               }});
  c.push_back({"spin commutators, 7 qubits", [] {
                 const auto s = models::spin_system(7);
                 const Matrix& x = s.sx.matrix();
                 const Matrix& y = s.sy.matrix();
                 return linalg::max_abs(Matrix(x * y - y * x - 2.0 * kI * s.sz.matrix())) < 1e-10;
               }});
  c.push_back({"ad norm of zero", [] { return models::ad_norm_su2(RealVector::Zero(3)) == 0.0; }});
  c.push_back({"ad norm scaling", [] {
                 RealVector v(3);
                 v << 0.3, -0.4, 1.1;
                 return close(models::ad_norm_su2(RealVector(2.0 * v)), 2.0 * models::ad_norm_su2(v));
               }});
  c.push_back({"rabi without coupling", [] {
                 return models::rabi_certificate(models::rabi_hamiltonian(1.0, 0.0, 0.5, 10), 2.0).omega < 1e-12;
               }});
  c.push_back({"speed limit with equal Hamiltonians", [] {
                 const auto s = models::spin_system(2);
                 const auto r = apps::speedlimit_rows(s.sx, s.sx, s.reference, Vector::Unit(4, 1), {0.0, 0.5});
                 return r.rows[0].time == 0.0 && r.rows[0].actual_error == 0.0 && r.rows[0].energy_bound == 0.0 &&
                        r.rows[1].actual_error < 1e-12 && r.rows[1].energy_bound < 1e-6;
               }});
  c.push_back({"trotter of commuting generators", [] {
                 const auto g1 = LindbladGenerator::from_hamiltonian(HermitianMatrix(pauli_z()));
                 const auto g2 = LindbladGenerator::from_hamiltonian(HermitianMatrix(Matrix(0.5 * pauli_z())));
                 SeesawOptions opt;
                 opt.restarts = 4;
                 const auto r = apps::trotter_run(g1, g2, qubit_ref(), 0.5, 1.0, {4, 8}, 4, 0, opt);
                 return r.rows[0].lhs < 1e-12 && r.rows[1].lhs < 1e-12;
               }});
  c.push_back({"group bound with equal directions", [] {
                 const auto s = models::spin_system(2);
                 RealVector v(3);
                 v << 0.2, 0.1, 0.4;
                 const auto r = apps::group_qsl(s, v, v, Vector::Unit(4, 2));
                 return r.lhs == 0.0 && r.rhs == 0.0;
               }});
  c.push_back({"group bound at zero", [] {
                 const auto s = models::spin_system(2);
                 const auto r = apps::group_qsl(s, RealVector::Zero(3), RealVector::Zero(3), Vector::Unit(4, 0));
                 return r.omega == 0.0 && r.holds;
               }});
  return c;
}

/// Runs every check, printing one line each; returns the number of failures.
inline int run(std::ostream& out) {
  int failures = 0;
  for (const auto& check : checks()) {
    bool ok = false;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << "\n";
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace eclim::selftest
