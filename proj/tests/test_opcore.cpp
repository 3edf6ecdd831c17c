#include <gtest/gtest.h>

#include "support.hpp"

using namespace eclim;
using namespace eclim::testing;

TEST(HermitianMatrix, RejectsNonHermitian) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_THROW(HermitianMatrix{a}, Error);
  EXPECT_THROW(HermitianMatrix{Matrix::Zero(2, 3)}, Error);
}

TEST(HermitianMatrix, SymmetrizesSmallDefects) {
  Matrix a = pauli_x();
  a(0, 1) += 1e-13;
  const HermitianMatrix h(a);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(PsdOrder, Examples) {
  EXPECT_TRUE(psd_order_leq(HermitianMatrix::diagonal({0, 1}), HermitianMatrix::diagonal({1, 2})));
  EXPECT_FALSE(psd_order_leq(HermitianMatrix::identity(2), HermitianMatrix(pauli_x())));
  EXPECT_TRUE(psd_order_leq(HermitianMatrix(pauli_x()), HermitianMatrix::identity(2)));
  EXPECT_THROW(psd_order_leq(HermitianMatrix::identity(2), HermitianMatrix::identity(3)), Error);
}

TEST(GroundShift, Examples) {
  const auto g = ground_shift(HermitianMatrix::diagonal({3, 5}));
  EXPECT_NEAR(linalg::max_abs(g.matrix() - HermitianMatrix::diagonal({0, 2}).matrix()), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(g.ground_energy_removed(), 3.0);
  EXPECT_DOUBLE_EQ(ground_shift(HermitianMatrix::diagonal({0, 1})).ground_energy_removed(), 0.0);
}

TEST(GroundShift, SpinLaplacianShiftIsMinimumEigenvalue) {
  const auto spin = models::spin_system(7);
  const Matrix delta = spin.sx.matrix() * spin.sx.matrix() + spin.sy.matrix() * spin.sy.matrix() +
                       spin.sz.matrix() * spin.sz.matrix();
  const double oracle = Eigen::SelfAdjointEigenSolver<Matrix>(delta).eigenvalues()(0);
  EXPECT_NEAR(spin.reference.ground_energy_removed(), oracle, 1e-9);
  EXPECT_NEAR(spin.reference.hermitian().min_eigenvalue(), 0.0, 1e-9);
}

TEST(ReferenceHamiltonian, RejectsIndefinite) {
  EXPECT_THROW(ReferenceHamiltonian::from_psd(HermitianMatrix::diagonal({-1, 1})), Error);
  EXPECT_NO_THROW(ReferenceHamiltonian::from_psd(HermitianMatrix::diagonal({-1e-12, 1})));
}

TEST(DensityState, TraceAndPositivity) {
  EXPECT_THROW(DensityState{Matrix(linalg::identity(2))}, Error);
  EXPECT_NO_THROW(DensityState{Matrix(0.4 * linalg::identity(2))});
  EXPECT_THROW(DensityState{Matrix(HermitianMatrix::diagonal({1.2, -0.3}).matrix())}, Error);
}

TEST(Energy, Examples) {
  Vector plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);
  EXPECT_NEAR(energy(qubit_ref(), DensityState::pure(plus)), 0.5, 1e-15);
  EXPECT_NEAR(energy(qubit_ref(), DensityState::pure(Vector::Unit(2, 0))), 0.0, 1e-15);
  EXPECT_NEAR(energy(ReferenceHamiltonian::diagonal({0, 1, 2}), DensityState::maximally_mixed(3)), 1.0, 1e-15);
}

TEST(DualScan, Examples) {
  const auto g = qubit_ref();
  const auto r = dual_scan(HermitianMatrix::diagonal({0, 1}), g, 0.25);
  EXPECT_NEAR(r.value, 0.25, 1e-9);
  EXPECT_NEAR(r.cert.slope, 1.0, 1e-6);
  EXPECT_NEAR(r.cert.offset, 0.0, 1e-9);
  EXPECT_TRUE(r.cert.verified);

  const auto id = dual_scan(HermitianMatrix::identity(2), g, 3.0);
  EXPECT_NEAR(id.value, 1.0, 1e-9);
  EXPECT_NEAR(id.cert.slope, 0.0, 1e-9);
  EXPECT_NEAR(id.cert.offset, 1.0, 1e-9);

  const auto z = dual_scan(HermitianMatrix::zero(2), g, 3.0);
  EXPECT_NEAR(z.value, 0.0, 1e-12);
  EXPECT_NEAR(z.cert.offset, 0.0, 1e-12);
  EXPECT_THROW(dual_scan(HermitianMatrix::zero(2), g, 0.0), Error);
  EXPECT_THROW(dual_scan(HermitianMatrix::zero(3), g, 1.0), Error);
}

// Brute force over psi = (sqrt(1 - s), sqrt(s)) for the 2x2 example.
TEST(DualScan, TwoByTwoBruteForce) {
  const auto g = qubit_ref();
  const HermitianMatrix m = HermitianMatrix::diagonal({0, 1});
  for (double e : {0.05, 0.3, 0.8, 1.5}) {
    double best = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double s = k / 10000.0;
      if (s <= e) best = std::max(best, s);
    }
    EXPECT_NEAR(dual_scan(m, g, e).value, best, 1e-4);
  }
}

TEST(DualScan, ObjectiveIsConvex) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto g = random::reference(rng, 4);
    const auto m = random::psd(rng, 4);
    const double e = 0.3;
    auto f = [&](double l) { return l * e + std::max(0.0, linalg::max_eigenvalue(Matrix(m.matrix() - l * g.matrix()))); };
    for (double l1 = 0.0; l1 < 4.0; l1 += 0.37) {
      const double l2 = l1 + 0.21, l3 = l1 + 0.53;
      const double w = (l3 - l2) / (l3 - l1);
      EXPECT_LE(f(l2), w * f(l1) + (1 - w) * f(l3) + 1e-9);
    }
  }
}

TEST(DualScan, StrongDualityAgainstSampling) {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Index d = 2 + i % 4;
    const auto g = random::reference(rng, d, 2.0);
    const auto m = random::psd(rng, d);
    const double e = 0.5;
    const double dual = dual_scan(m, g, e).value;
    const double sampled = sampled_primal(m, g, e, rng, 3000);
    const double ascent = constrained_ascent(m, g, e, 16, i).value;
    EXPECT_GE(dual - sampled, -1e-9 * (1 + dual));
    EXPECT_LE(dual - ascent, 1e-6 * (1 + dual));
    EXPECT_GE(dual - ascent, -1e-9 * (1 + dual));
  }
}

TEST(SpectralFunction, Examples) {
  const auto s = spectral_function(HermitianMatrix::diagonal({0, 4}), SpectralFunction::square_root());
  EXPECT_NEAR(linalg::max_abs(s.matrix() - HermitianMatrix::diagonal({0, 2}).matrix()), 0.0, 1e-14);
  const auto id = spectral_function(HermitianMatrix::identity(3), SpectralFunction::square_root());
  EXPECT_NEAR(linalg::max_abs(id.matrix() - linalg::identity(3)), 0.0, 1e-14);
  EXPECT_THROW(spectral_function(HermitianMatrix::diagonal({-1, 1}), SpectralFunction::square_root()), Error);
}

TEST(SpectralFunction, SqrtRoundTripAndMonotone) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto a = random::psd(rng, 4);
    const auto r = spectral_function(a, SpectralFunction::square_root());
    EXPECT_LT(linalg::max_abs(r.matrix() * r.matrix() - a.matrix()), 1e-9);
    const auto b = a + random::psd(rng, 4);
    ASSERT_TRUE(psd_order_leq(a, b));
    EXPECT_TRUE(psd_order_leq(r, spectral_function(b, SpectralFunction::square_root()), 1e-9));
  }
}

TEST(EnergyCurve, ConcaveAndNondecreasing) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto g = random::reference(rng, 3, 2.0);
    const auto t = random_channel(rng, 3, 3, 2);
    const auto curve = energy_curve(t, g, g, {0.1, 0.2, 0.5, 1.0, 2.0, 5.0});
    EXPECT_TRUE(curve.concave_nondecreasing());
  }
}

TEST(TensorSum, ProductStateEnergiesAdd) {
  Rng rng(4);
  const auto ga = random::reference(rng, 2);
  const auto gb = random::reference(rng, 3);
  const auto gab = tensor_sum(ga, gb);
  const auto ra = random::mixed_state(rng, 2);
  const auto rb = random::mixed_state(rng, 3);
  const DensityState rab(Matrix(linalg::kron(ra.matrix(), rb.matrix())));
  EXPECT_NEAR(energy(gab, rab), energy(ga, ra) + energy(gb, rb), 1e-12);
}

TEST(GoldenSection, Parabola) {
  const auto r = linalg::golden_section([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, 0.0, 2.0, 1e-10, 200);
  EXPECT_NEAR(r.argmin, 0.3, 1e-8);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
}
