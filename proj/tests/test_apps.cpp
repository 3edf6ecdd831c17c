#include <gtest/gtest.h>

#include "support.hpp"

using namespace eclim;
using namespace eclim::apps;
using namespace eclim::testing;

namespace {

SpeedLimitConfig small_config(Scenario sc, std::uint64_t seed) {
  SpeedLimitConfig cfg;
  cfg.n_qubits = 3;
  cfg.scenario = sc;
  cfg.seed = seed;
  cfg.times = uniform_grid(0.6, 12);
  return cfg;
}

LindbladGenerator hamiltonian(const Matrix& h) { return LindbladGenerator::from_hamiltonian(HermitianMatrix(h)); }

}  // namespace

TEST(UniformGrid, Examples) {
  const auto g = uniform_grid(0.6, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[1], 0.3);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 0.6);
  EXPECT_THROW(uniform_grid(0.6, 0), Error);
}

TEST(SpeedLimit, FirstRowIsZero) {
  const auto r = speedlimit_run(small_config(Scenario::left, 1));
  const auto& row = r.rows.front();
  EXPECT_EQ(row.time, 0.0);
  EXPECT_EQ(row.actual_error, 0.0);
  EXPECT_EQ(row.energy_bound, 0.0);
  EXPECT_EQ(row.uniform_bound, 0.0);
}

TEST(SpeedLimit, EqualHamiltoniansGiveZeroRows) {
  const auto spin = models::spin_system(2);
  Vector psi = spin.reference.ground_state();
  const auto r = speedlimit_rows(spin.sx, spin.sx, spin.reference, psi, uniform_grid(0.5, 5));
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.actual_error, 0.0);
    EXPECT_NEAR(row.energy_bound, 0.0, 1e-12);
    EXPECT_EQ(row.uniform_bound, 0.0);
  }
}

TEST(SpeedLimit, OrderingHoldsOnSmallSystems) {
  for (auto sc : {Scenario::left, Scenario::right}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto r = speedlimit_run(small_config(sc, seed));
      EXPECT_TRUE(r.ordering_holds);
      for (const auto& row : r.rows) {
        EXPECT_LE(row.actual_error, row.energy_bound + 1e-7);
        EXPECT_LE(row.energy_bound, row.uniform_bound + 1e-7);
      }
    }
  }
}

TEST(SpeedLimit, Deterministic) {
  const auto a = speedlimit_run(small_config(Scenario::right, 9));
  const auto b = speedlimit_run(small_config(Scenario::right, 9));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].actual_error, b.rows[i].actual_error);
    EXPECT_EQ(a.rows[i].energy_bound, b.rows[i].energy_bound);
  }
}

TEST(SpeedLimit, ProblemConstruction) {
  const auto spin = models::spin_system(3);
  const auto left = speedlimit_problem(small_config(Scenario::left, 2), spin);
  EXPECT_NEAR(linalg::hermitian_norm(Matrix(left.h1.matrix() - spin.sx.matrix())), 0.5, 1e-12);
  EXPECT_NEAR(linalg::hermitian_norm(Matrix(left.h2.matrix() - spin.sy.matrix())), 0.5, 1e-12);
  EXPECT_NEAR(left.psi.norm(), 1.0, 1e-14);
  const auto right = speedlimit_problem(small_config(Scenario::right, 2), spin);
  EXPECT_NEAR(linalg::hermitian_norm(right.h2.matrix()), 3.0, 1e-12);
  EXPECT_NEAR(linalg::hermitian_norm(right.h1.matrix()), 3.0, 1e-12);
  EXPECT_THROW(parse_scenario("center"), Error);
}

// Midpoint integral of the ECO norm sits between the actual error and the t f_t(E) form.
TEST(SpeedLimit, IntegralFormIsBetween) {
  const auto spin = models::spin_system(3);
  const auto p = speedlimit_problem(small_config(Scenario::left, 3), spin);
  const auto& g = spin.reference;
  const double e = energy(g, p.psi);
  const auto cert = min_omega(dissipation_matrix(LindbladGenerator::from_hamiltonian(p.h2), g), g, 1.0);
  for (double t : {0.1, 0.2, 0.3, 0.45, 0.6}) {
    const double integral = integral_bound(p.h1, p.h2, g, e, cert, t);
    const Matrix u1 = linalg::expm(Matrix(-kI * t * p.h1.matrix()));
    const Matrix u2 = linalg::expm(Matrix(-kI * t * p.h2.matrix()));
    const double actual = ((u1 - u2) * p.psi).norm();
    const double tf = t * eco_norm(Matrix(p.h1.matrix() - p.h2.matrix()), g, grown_energy(cert, e, t)).value;
    EXPECT_LE(actual, integral + 1e-9);
    EXPECT_LE(integral, tf + 1e-9);
  }
}

TEST(SpeedLimit, FirstOrderGapVanishesAtSmallTimes) {
  const auto spin = models::spin_system(3);
  const auto cfg = small_config(Scenario::left, 4);
  const double gap = first_order_gap(cfg, spin, 1e-3);
  EXPECT_GE(gap, -1e-9);
  EXPECT_LT(gap, 0.05);
  EXPECT_LT(gap, first_order_gap(cfg, spin, 0.3) + 1e-12);
}

TEST(OpenSpeedLimit, EqualGeneratorsGiveZero) {
  Rng rng(1);
  const auto gen = random_generator(rng, 2);
  SeesawOptions opt;
  opt.restarts = 4;
  const auto r = open_speedlimit(gen, gen, qubit_ref(), 0.5, {0.0, 0.2, 0.5}, 5, 0, opt);
  for (const auto& row : r.rows) EXPECT_LT(row.lhs, 1e-12);
  EXPECT_EQ(r.status, CheckStatus::pass);
}

// Dephasing against the identity: coherences decay as e^{-2 gamma t}, so lhs is linear at small t.
TEST(OpenSpeedLimit, DephasingAgainstIdentity) {
  const double gamma = 0.4;
  const auto deph = LindbladGenerator::from_hamiltonian(HermitianMatrix::zero(2), {Matrix(std::sqrt(gamma) * pauli_z())});
  const auto id = LindbladGenerator::zero(2);
  SeesawOptions opt;
  opt.restarts = 8;
  const auto r = open_speedlimit(deph, id, qubit_ref(), 0.5, {0.0, 0.01, 0.02, 0.05}, 10, 2, opt);
  EXPECT_EQ(r.status, CheckStatus::pass);
  // Small t: lhs is linear in t, so lhs/t is nearly constant.
  EXPECT_NEAR(r.rows[1].lhs / 0.01, r.rows[2].lhs / 0.02, 0.05 * r.rows[1].lhs / 0.01);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LE(r.rows[i].lhs / r.rows[i].time, r.rows[i].rhs / r.rows[i].time + 1e-6);
}

TEST(OpenSpeedLimit, RandomPairsPass) {
  Rng rng(3);
  SeesawOptions opt;
  opt.restarts = 8;
  for (int i = 0; i < 3; ++i) {
    const auto g1 = random_generator(rng, 2), g2 = random_generator(rng, 2);
    const auto r = open_speedlimit(g1, g2, random::reference(rng, 2), 0.5, {0.1, 0.3}, 8, i, opt);
    EXPECT_NE(r.status, CheckStatus::fail);
  }
}

TEST(Trotter, CommutingGeneratorsAreExact) {
  const auto a = hamiltonian(pauli_z());
  const auto b = hamiltonian(Matrix(0.5 * pauli_z()));
  SeesawOptions opt;
  opt.restarts = 4;
  const auto r = trotter_run(a, b, qubit_ref(), 0.5, 1.0, {4, 8}, 5, 0, opt);
  for (const auto& row : r.rows) EXPECT_LT(row.lhs, 1e-12);
  EXPECT_EQ(r.status, CheckStatus::pass);
  EXPECT_FALSE(r.decay_exponent.has_value());
}

TEST(Trotter, PauliPairDecaysAsOneOverN) {
  SeesawOptions opt;
  opt.restarts = 16;
  const auto r = trotter_run(hamiltonian(pauli_x()), hamiltonian(pauli_z()), qubit_ref(), 0.5, 1.0, {4, 8, 16, 32, 64}, 10, 0, opt);
  EXPECT_EQ(r.status, CheckStatus::pass);
  ASSERT_TRUE(r.decay_exponent.has_value());
  EXPECT_GE(*r.decay_exponent, 0.9);
  EXPECT_LE(*r.decay_exponent, 1.1);
  EXPECT_THROW(trotter_run(hamiltonian(pauli_x()), hamiltonian(pauli_z()), qubit_ref(), 0.5, 0.0, {4}), Error);
}

TEST(GroupQsl, Examples) {
  const auto spin = models::spin_system(2);
  Rng rng(5);
  const Vector psi = random::haar_state(rng, 4);
  RealVector c(3);
  c << 0.3, -0.2, 0.5;
  const auto same = group_qsl(spin, c, c, psi);
  EXPECT_NEAR(same.lhs, 0.0, 1e-14);
  EXPECT_NEAR(same.rhs, 0.0, 1e-14);

  // Y = 0: |e^{-iA(X)} psi - psi| with omega = 0 and the factor taken as 1.
  const auto zero_y = group_qsl(spin, c, RealVector::Zero(3), psi);
  EXPECT_EQ(zero_y.omega, 0.0);
  const Matrix u = linalg::expm(Matrix(-kI * spin.generator(c).matrix()));
  EXPECT_NEAR(zero_y.lhs, ((u - linalg::identity(4)) * psi).norm(), 1e-12);
  EXPECT_TRUE(zero_y.holds);

  const auto none = group_qsl(spin, RealVector::Zero(3), RealVector::Zero(3), psi);
  EXPECT_EQ(none.rhs, 0.0);
  EXPECT_THROW(group_qsl(spin, c, c, Vector(2.0 * psi)), Error);
}

TEST(GroupQsl, RandomDraws) {
  Rng rng(6);
  for (int n : {1, 2, 3}) {
    const auto spin = models::spin_system(n);
    for (int i = 0; i < 50; ++i) {
      const RealVector cx = rng.real_normal(3, 1).col(0);
      const RealVector cy = rng.real_normal(3, 1).col(0);
      const auto r = group_qsl(spin, cx, cy, random::haar_state(rng, spin.sx.dim()));
      EXPECT_TRUE(r.holds) << r.lhs << " " << r.rhs;
    }
  }
}
