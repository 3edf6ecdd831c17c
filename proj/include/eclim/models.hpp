#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eclim/error.hpp"
#include "eclim/linalg.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/opcore.hpp"

namespace eclim::models {

/// Jump rates mu_n of the birth ladder n -> n+1.
class BirthRates {
 public:
  enum class Rule { explicit_list, power, geometric };

  static BirthRates power(double p) { return BirthRates(Rule::power, p, {}); }
  static BirthRates geometric(double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::invalid_input, "BirthRates: geometric ratio must be positive");
    return BirthRates(Rule::geometric, r, {});
  }
  static BirthRates constant(double c = 1.0) {
    if (!(c > 0.0)) throw Error(ErrorCode::invalid_input, "BirthRates: rate must be positive");
    return BirthRates(Rule::explicit_list, c, {}, true);
  }
  static BirthRates list(std::vector<double> rates) {
    if (rates.empty()) throw Error(ErrorCode::invalid_input, "BirthRates: empty rate list");
    for (double r : rates) {
      if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_input, "BirthRates: rates must be positive");
    }
    return BirthRates(Rule::explicit_list, 0.0, std::move(rates));
  }

  /// "power:p", "geometric:r", "constant[:c]" or "list:a,b,...".
  static BirthRates parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
      if (kind == "power") return power(std::stod(arg));
      if (kind == "geometric") return geometric(std::stod(arg));
      if (kind == "constant") return constant(arg.empty() ? 1.0 : std::stod(arg));
      if (kind == "list") {
        std::vector<double> rates;
        std::size_t pos = 0;
        while (pos <= arg.size()) {
          const auto comma = arg.find(',', pos);
          rates.push_back(std::stod(arg.substr(pos, comma - pos)));
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
        return list(std::move(rates));
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_input, "BirthRates: cannot parse '" + spec + "'");
    }
    throw Error(ErrorCode::invalid_input, "BirthRates: unknown rule '" + kind + "'");
  }

  Rule rule() const { return rule_; }
  bool is_constant() const { return constant_; }
  double parameter() const { return param_; }

  double rate(std::size_t n) const {
    switch (rule_) {
      case Rule::power:
        return std::pow(static_cast<double>(n + 1), param_);
      case Rule::geometric:
        return std::pow(param_, static_cast<double>(n));
      case Rule::explicit_list:
        if (constant_) return param_;
        if (n >= rates_.size()) {
          throw Error(ErrorCode::invalid_input, "BirthRates: rate list has no entry for level " + std::to_string(n));
        }
        return rates_[n];
    }
    return 0.0;
  }

 private:
  BirthRates(Rule rule, double param, std::vector<double> rates, bool constant = false)
      : rule_(rule), param_(param), rates_(std::move(rates)), constant_(constant) {}

  Rule rule_;
  double param_;
  std::vector<double> rates_;
  bool constant_;
};

enum class TauVerdict { finite, diverges, undecided };

inline const char* to_string(TauVerdict v) {
  switch (v) {
    case TauVerdict::finite: return "finite";
    case TauVerdict::diverges: return "diverges";
    case TauVerdict::undecided: return "undecided";
  }
  return "undecided";
}

struct TauResult {
  double tau_partial = 0.0;
  TauVerdict verdict = TauVerdict::undecided;
};

/// Partial sum of 1/mu_n for n < cutoff (compensated), with a verdict on the
/// full series for the closed-form rules.
inline TauResult birth_tau(const BirthRates& rates, std::size_t cutoff) {
  if (cutoff < 1) throw Error(ErrorCode::invalid_input, "birth_tau: cutoff must be >= 1");
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = cutoff; k-- > 0;) {
    const double y = 1.0 / rates.rate(k) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  TauResult out;
  out.tau_partial = sum;
  if (rates.is_constant()) {
    out.verdict = TauVerdict::diverges;
  } else if (rates.rule() == BirthRates::Rule::power) {
    out.verdict = rates.parameter() > 1.0 ? TauVerdict::finite : TauVerdict::diverges;
  } else if (rates.rule() == BirthRates::Rule::geometric) {
    out.verdict = rates.parameter() > 1.0 ? TauVerdict::finite : TauVerdict::diverges;
  }
  return out;
}

/// Ladder on levels 0..N: K = -diag(mu)/2, L|n> = sqrt(mu_n)|n+1> for n < N.
/// The outflow of level N is dropped, so trace loss measures mass past the cutoff.
inline LindbladGenerator birth_generator(const BirthRates& rates, std::size_t cutoff) {
  if (cutoff < 2) throw Error(ErrorCode::invalid_input, "birth_generator: cutoff must be >= 2");
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  Matrix k = Matrix::Zero(d, d);
  Matrix l = Matrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const double mu = rates.rate(static_cast<std::size_t>(n));
    k(n, n) = -0.5 * mu;
    if (n + 1 < d) l(n + 1, n) = std::sqrt(mu);
  }
  return LindbladGenerator::from_k(k, {l});
}

struct BirthCertificate {
  std::vector<double> epsilons;
  /// omega (eps_n + E0) - mu_n (eps_{n+1} - eps_n), n = 0..N-1.
  std::vector<double> residuals;
  double omega = 1.0;
  double e0 = 0.0;
  double min_residual = 0.0;
  /// eps_N / eps_{N-1}: stays away from 1 when eps grows without bound.
  double tail_ratio = 0.0;
};

/// eps_0 = 0, eps_1 = 1, eps_{n+1} = (1 + 1/mu_n) eps_n, with the check against
/// omega = 1 and E0 = mu_0.
inline BirthCertificate birth_epsilons(const BirthRates& rates, std::size_t cutoff) {
  if (cutoff < 1) throw Error(ErrorCode::invalid_input, "birth_epsilons: cutoff must be >= 1");
  BirthCertificate c;
  c.epsilons.assign(cutoff + 1, 0.0);
  c.epsilons[1] = 1.0;
  for (std::size_t n = 1; n < cutoff; ++n) c.epsilons[n + 1] = (1.0 + 1.0 / rates.rate(n)) * c.epsilons[n];
  c.e0 = rates.rate(0);
  c.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < cutoff; ++n) {
    const double r = c.omega * (c.epsilons[n] + c.e0) - rates.rate(n) * (c.epsilons[n + 1] - c.epsilons[n]);
    c.residuals.push_back(r);
    c.min_residual = std::min(c.min_residual, r);
  }
  c.tail_ratio = cutoff >= 2 ? c.epsilons[cutoff] / c.epsilons[cutoff - 1] : 0.0;
  return c;
}

/// Collective spin operators S_j = sum_k 1 (x) .. (x) sigma_j (x) .. (x) 1 and the
/// Nelson Laplacian Delta = Sx^2 + Sy^2 + Sz^2.
struct SpinSystem {
  int n_qubits = 0;
  HermitianMatrix sx;
  HermitianMatrix sy;
  HermitianMatrix sz;
  HermitianMatrix laplacian;
  double ground_energy = 0.0;
  ReferenceHamiltonian reference;

  const HermitianMatrix& component(int j) const { return j == 0 ? sx : (j == 1 ? sy : sz); }
  /// A(X) for X = sum c_j X_j.
  HermitianMatrix generator(const RealVector& c) const {
    return HermitianMatrix(Matrix(c(0) * sx.matrix() + c(1) * sy.matrix() + c(2) * sz.matrix()));
  }
};

inline SpinSystem spin_system(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 10) {
    throw Error(ErrorCode::invalid_input, "spin_system: qubit count must be in [1, 10]");
  }
  Matrix paulis[3] = {Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  paulis[0] << 0, 1, 1, 0;
  paulis[1] << 0, -kI, kI, 0;
  paulis[2] << 1, 0, 0, -1;
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Matrix s[3];
  for (int j = 0; j < 3; ++j) {
    s[j] = Matrix::Zero(dim, dim);
    for (int k = 0; k < n_qubits; ++k) {
      const Matrix left = linalg::identity(Eigen::Index{1} << k);
      const Matrix right = linalg::identity(Eigen::Index{1} << (n_qubits - k - 1));
      s[j] += linalg::kron(linalg::kron(left, paulis[j]), right);
    }
  }
  SpinSystem sys;
  sys.n_qubits = n_qubits;
  sys.sx = HermitianMatrix(s[0]);
  sys.sy = HermitianMatrix(s[1]);
  sys.sz = HermitianMatrix(s[2]);
  sys.laplacian = HermitianMatrix(Matrix(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]));
  sys.reference = ReferenceHamiltonian::ground_shifted(sys.laplacian);
  sys.ground_energy = sys.reference.ground_energy_removed();
  return sys;
}

/// ||ad_X|| for X = sum c_j X_j with [X_x, X_y] = 2 X_z (cyclic): the norm of 2 (c x .).
inline double ad_norm_su2(const RealVector& c) {
  if (c.size() != 3) throw Error(ErrorCode::dimension_mismatch, "ad_norm_su2: expected 3 coefficients");
  RealMatrix ad(3, 3);
  ad << 0, -c(2), c(1), c(2), 0, -c(0), -c(1), c(0), 0;
  return linalg::operator_norm(RealMatrix(2.0 * ad));
}

struct RabiModel {
  HermitianMatrix hamiltonian;
  /// 1 (x) diag(0..N).
  ReferenceHamiltonian number;
  /// Isometry onto the levels 0..N-2 of the oscillator (both qubit states).
  Matrix interior;
};

/// H = Omega a*a + g sigma_x (a + a*) + nu sigma_z on C^2 (x) C^{N+1}.
inline RabiModel rabi_hamiltonian(double omega, double g, double nu, std::size_t cutoff) {
  if (cutoff < 2) throw Error(ErrorCode::invalid_input, "rabi_hamiltonian: cutoff must be >= 2");
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const Matrix id2 = linalg::identity(2);
  const Matrix num = a.adjoint() * a;
  const Matrix h = omega * linalg::kron(id2, num) + g * linalg::kron(sx, Matrix(a + a.adjoint())) +
                   nu * linalg::kron(sz, linalg::identity(d));
  std::vector<double> levels;
  for (int q = 0; q < 2; ++q)
    for (Eigen::Index n = 0; n < d; ++n) levels.push_back(static_cast<double>(n));
  RabiModel m{HermitianMatrix(h), ReferenceHamiltonian::diagonal(levels), Matrix::Zero(2 * d, 2 * (d - 2))};
  for (int q = 0; q < 2; ++q)
    for (Eigen::Index n = 0; n + 2 < d; ++n) m.interior(q * d + n, q * (d - 2) + n) = 1.0;
  return m;
}

/// Symmetric certificate +-i[H, N] <= omega (N + e0) on the interior compression.
inline StabilityCertificate rabi_certificate(const RabiModel& model, double e0) {
  const Matrix& p = model.interior;
  const Matrix& h = model.hamiltonian.matrix();
  const Matrix& n = model.number.matrix();
  const Matrix comm = kI * (h * n - n * h);
  const HermitianMatrix m(Matrix(linalg::hermitian_part(p.adjoint() * comm * p)));
  const auto g = ReferenceHamiltonian::from_psd(HermitianMatrix(Matrix(linalg::hermitian_part(p.adjoint() * n * p))));
  return min_omega(m, g, e0, true);
}

}  // namespace eclim::models
