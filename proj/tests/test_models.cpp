#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace eclim;
using namespace eclim::models;

namespace {

double birth_trace(const BirthRates& r, std::size_t cutoff, double t) {
  const auto gen = birth_generator(r, cutoff);
  const Eigen::Index d = static_cast<Eigen::Index>(cutoff + 1);
  const Matrix rho0 = DensityState::pure(Vector::Unit(d, 0)).matrix();
  return Semigroup(gen).evolve(rho0, t).trace().real();
}

Matrix commutator(const HermitianMatrix& a, const HermitianMatrix& b) {
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

}  // namespace

TEST(BirthRates, Rules) {
  EXPECT_DOUBLE_EQ(BirthRates::power(2).rate(0), 1.0);
  EXPECT_DOUBLE_EQ(BirthRates::power(2).rate(2), 9.0);
  EXPECT_DOUBLE_EQ(BirthRates::geometric(2).rate(3), 8.0);
  EXPECT_DOUBLE_EQ(BirthRates::constant().rate(100), 1.0);
  EXPECT_DOUBLE_EQ(BirthRates::parse("geometric:2").rate(4), 16.0);
  EXPECT_DOUBLE_EQ(BirthRates::parse("power:1.5").parameter(), 1.5);
  EXPECT_THROW(BirthRates::parse("bogus:1"), Error);
  EXPECT_THROW(BirthRates::list({1.0, -2.0}), Error);
}

TEST(BirthTau, Examples) {
  const auto geo = birth_tau(BirthRates::geometric(2), 60);
  EXPECT_NEAR(geo.tau_partial, 2.0, 1e-12);
  EXPECT_EQ(geo.verdict, TauVerdict::finite);
  EXPECT_EQ(birth_tau(BirthRates::constant(), 100).verdict, TauVerdict::diverges);
  EXPECT_DOUBLE_EQ(birth_tau(BirthRates::constant(), 100).tau_partial, 100.0);
  EXPECT_EQ(birth_tau(BirthRates::power(1.0), 10).verdict, TauVerdict::diverges);
  EXPECT_EQ(birth_tau(BirthRates::list({1, 2, 3}), 3).verdict, TauVerdict::undecided);
}

// Tail of the Basel series beyond N is 1/N + O(1/N^2).
TEST(BirthTau, BaselPartialSums) {
  const double basel = M_PI * M_PI / 6.0;
  for (std::size_t n : {1000u, 100000u, 1000000u}) {
    const double tail = basel - birth_tau(BirthRates::power(2), n).tau_partial;
    EXPECT_NEAR(tail * static_cast<double>(n), 1.0, 2.0 / static_cast<double>(n));
  }
  EXPECT_NEAR(birth_tau(BirthRates::power(2), 1000000).tau_partial, basel, 1e-6);
}

TEST(BirthGenerator, Structure) {
  const auto gen = birth_generator(BirthRates::geometric(2), 5);
  EXPECT_EQ(gen.dim(), 6);
  EXPECT_NEAR(gen.k()(3, 3).real(), -4.0, 1e-15);
  ASSERT_EQ(gen.lindblad().size(), 1u);
  EXPECT_NEAR(gen.lindblad()[0](3, 2).real(), 2.0, 1e-15);
  EXPECT_EQ(gen.lindblad()[0](5, 5), Complex(0.0));
  // Conservation fails only on the top level.
  const Matrix leak = gen.dual_apply(linalg::identity(6));
  for (Eigen::Index n = 0; n < 5; ++n) EXPECT_NEAR(std::abs(leak(n, n)), 0.0, 1e-14);
  EXPECT_NEAR(leak(5, 5).real(), -32.0, 1e-12);
  EXPECT_THROW(birth_generator(BirthRates::constant(), 1), Error);
}

// Constant unit rates: the level is Poisson(t) distributed until it reaches the cutoff.
TEST(BirthGenerator, ConstantRatesStayBelowCutoff) {
  for (auto [t, n] : std::vector<std::pair<double, std::size_t>>{{1, 20}, {2, 20}, {3, 15}, {4, 20}}) {
    const double tr = birth_trace(BirthRates::constant(), n, t);
    EXPECT_GE(tr, 1.0 - 1e-6);
    EXPECT_LE(tr, 1.0 + 1e-9);
  }
}

// N >= 5t alone is not enough at small t: the mass past the cutoff is a Poisson tail.
TEST(BirthGenerator, FiveTimesRuleIsTightAtSmallTimes) {
  const double tr = birth_trace(BirthRates::constant(), 5, 1.0);
  double poisson_leq4 = 0.0, term = std::exp(-1.0);
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) term /= k;
    poisson_leq4 += term;
  }
  // Levels 0..4 keep their mass, level 5 keeps what has not yet escaped.
  EXPECT_LT(tr, 1.0 - 1e-6);
  EXPECT_GT(tr, poisson_leq4);
}

TEST(BirthGenerator, GeometricRatesEscape) {
  const auto r = BirthRates::geometric(2);
  double prev = 1.0;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const double tr = birth_trace(r, 40, t);
    EXPECT_LT(tr, prev);
    prev = tr;
  }
  EXPECT_LT(prev, 0.9);
  // Mass past level 40 has passed level 30, so the deficit shrinks with N, but it
  // settles at a positive value instead of closing.
  const double d20 = 1 - birth_trace(r, 20, 3.0), d30 = 1 - birth_trace(r, 30, 3.0), d40 = 1 - birth_trace(r, 40, 3.0);
  EXPECT_LE(d30, d20 + 1e-12);
  EXPECT_LE(d40, d30 + 1e-12);
  EXPECT_LT(d30 - d40, 1e-3);
  EXPECT_GT(d40, 0.5);
}

TEST(BirthEpsilons, Examples) {
  const auto c = birth_epsilons(BirthRates::constant(), 5);
  const std::vector<double> expect{0, 1, 2, 4, 8, 16};
  ASSERT_EQ(c.epsilons.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_DOUBLE_EQ(c.epsilons[i], expect[i]);
  EXPECT_GE(c.min_residual, 0.0);
  EXPECT_DOUBLE_EQ(c.e0, 1.0);

  // Geometric rates: the product prod (1 + 2^-n) converges, so eps stays bounded.
  const auto g = birth_epsilons(BirthRates::geometric(2), 60);
  double prod = 1.0;
  for (int n = 1; n < 60; ++n) prod *= 1.0 + std::pow(2.0, -n);
  EXPECT_NEAR(g.epsilons.back(), prod, 1e-12 * prod);
  EXPECT_NEAR(g.tail_ratio, 1.0, 1e-15);
}

TEST(BirthEpsilons, ResidualsNonnegativeForConservativeRules) {
  for (const auto& r : {BirthRates::constant(), BirthRates::constant(3.0), BirthRates::power(0.5), BirthRates::power(1.0)}) {
    const auto c = birth_epsilons(r, 200);
    EXPECT_GE(c.min_residual, -1e-12 * (1 + c.epsilons.back()));
  }
}

TEST(SpinSystem, Examples) {
  const auto s1 = spin_system(1);
  EXPECT_LT(linalg::max_abs(s1.laplacian.matrix() - 3.0 * linalg::identity(2)), 1e-15);
  EXPECT_DOUBLE_EQ(s1.ground_energy, 3.0);

  const auto ev = spin_system(2).laplacian.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    EXPECT_TRUE(std::abs(ev(i)) < 1e-12 || std::abs(ev(i) - 8.0) < 1e-12) << ev(i);
  }
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_THROW(spin_system(0), Error);
  EXPECT_THROW(spin_system(11), Error);
}

TEST(SpinSystem, CommutationRelations) {
  for (int n : {1, 3, 7}) {
    const auto s = spin_system(n);
    EXPECT_LT(linalg::max_abs(commutator(s.sx, s.sy) - 2.0 * kI * s.sz.matrix()), 1e-10);
    EXPECT_LT(linalg::max_abs(commutator(s.sy, s.sz) - 2.0 * kI * s.sx.matrix()), 1e-10);
    EXPECT_LT(linalg::max_abs(commutator(s.sz, s.sx) - 2.0 * kI * s.sy.matrix()), 1e-10);
    for (int j = 0; j < 3; ++j) EXPECT_LT(linalg::max_abs(commutator(s.laplacian, s.component(j))), 1e-9);
  }
}

TEST(AdNormSu2, Examples) {
  RealVector c(3);
  c << 1, 0, 0;
  EXPECT_NEAR(ad_norm_su2(c), 2.0, 1e-15);
  EXPECT_EQ(ad_norm_su2(RealVector::Zero(3)), 0.0);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const RealVector v = rng.real_normal(3, 1).col(0);
    EXPECT_NEAR(ad_norm_su2(v), 2.0 * v.norm(), 1e-12);
    EXPECT_NEAR(ad_norm_su2(RealVector(2.0 * v)), 2.0 * ad_norm_su2(v), 1e-12);
  }
  EXPECT_THROW(ad_norm_su2(RealVector::Zero(2)), Error);
}

// A(X)^2 <= |X|^2 Delta for each basis direction.
TEST(NelsonLaplacian, GeneratorSquareBound) {
  for (int n = 1; n <= 7; ++n) {
    const auto s = spin_system(n);
    for (int j = 0; j < 3; ++j) {
      const HermitianMatrix sq(Matrix(s.component(j).matrix() * s.component(j).matrix()));
      EXPECT_TRUE(psd_order_leq(sq, s.laplacian, 1e-9)) << n << " " << j;
    }
  }
}

TEST(NelsonLaplacian, EcoNormBound) {
  for (int n = 2; n <= 5; ++n) {
    const auto s = spin_system(n);
    for (double e : {0.1, 1.0, 5.0, 20.0}) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_LE(eco_norm(s.component(j).matrix(), s.reference, e).value, std::sqrt(e + s.ground_energy) + 1e-8);
      }
    }
  }
}

// f_U(E) <= e^{4|t|}(E + gse) - gse for U = exp(-i t Sx).
TEST(NelsonLaplacian, GroupIsEnergyLimited) {
  const auto s = spin_system(3);
  for (double t : {-1.0, -0.4, 0.2, 0.7, 1.0}) {
    const Matrix u = linalg::expm(Matrix(-kI * t * s.sx.matrix()));
    for (double e : {0.5, 3.0}) {
      const double f = max_output_energy(channel::unitary(u), s.reference, s.reference, e).value;
      EXPECT_LE(f, std::exp(4 * std::abs(t)) * (e + s.ground_energy) - s.ground_energy + 1e-8);
    }
  }
}

TEST(Rabi, Examples) {
  const auto free = rabi_hamiltonian(1.0, 0.0, 0.5, 20);
  EXPECT_LT(linalg::max_abs(free.hamiltonian.matrix() * free.number.matrix() -
                            free.number.matrix() * free.hamiltonian.matrix()),
            1e-14);
  EXPECT_EQ(rabi_certificate(free, 2.0).omega, 0.0);

  // i[H, N] = i g sigma_x (a - a*) away from the truncation edge.
  const double g = 0.3;
  const std::size_t cutoff = 20;
  const auto m = rabi_hamiltonian(1.0, g, 0.5, cutoff);
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const Matrix& h = m.hamiltonian.matrix();
  const Matrix& nop = m.number.matrix();
  const Matrix comm = kI * (h * nop - nop * h);
  const Matrix expect = kI * g * linalg::kron(sx, Matrix(a - a.adjoint()));
  EXPECT_LT(linalg::max_abs(m.interior.adjoint() * (comm - expect) * m.interior), 1e-12);

  const auto c = rabi_certificate(m, 2.0);
  EXPECT_TRUE(c.verified);
  EXPECT_LE(c.omega, g * (1 + 1e-3));
  EXPECT_GT(c.omega, 0.0);
}

TEST(Rabi, InteriorCertificateStableInCutoff) {
  const double w40 = rabi_certificate(rabi_hamiltonian(1.0, 0.3, 0.5, 40), 2.0).omega;
  const double w60 = rabi_certificate(rabi_hamiltonian(1.0, 0.3, 0.5, 60), 2.0).omega;
  EXPECT_LT(std::abs(w40 - w60), 1e-6);
}
