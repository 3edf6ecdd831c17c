#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "eclim/error.hpp"

namespace eclim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace linalg {

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Eigenvalues ascending. Input is assumed Hermitian; only the lower triangle is read.
inline RealVector eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double max_eigenvalue(const Matrix& h) { return eigenvalues(h)(h.rows() - 1); }
inline double min_eigenvalue(const Matrix& h) { return eigenvalues(h)(0); }

/// Largest singular value.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double operator_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(a);
  return svd.singularValues()(0);
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
inline double hermitian_norm(const Matrix& h) {
  RealVector ev = eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Trace norm of a Hermitian matrix.
inline double trace_norm(const Matrix& h) { return eigenvalues(h).cwiseAbs().sum(); }

/// Hermitian matrix applied as f to the spectrum.
inline Matrix apply_spectral(const Matrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

/// Matrix exponential by scaling and squaring with a [13/13] Pade approximant.
inline Matrix expm(const Matrix& a) { return a.exp(); }
inline RealMatrix expm(const RealMatrix& a) { return a.exp(); }

/// Euclidean projection of v onto the probability simplex.
inline RealVector project_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += u[static_cast<std::size_t>(k)];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a unimodal f on [lo, hi]. Stops once the bracket is
/// narrower than tol; throws non_convergence if max_iter is reached first. The
/// returned point is the best one evaluated, endpoints included.
inline ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                                    double tol = 1e-10, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);

  ScalarMinimum best{lo, f(lo), 0};
  const double fhi = f(hi);
  if (fhi < best.value) best = {hi, fhi, 0};
  auto consider = [&best](double x, double fx) {
    if (fx < best.value) {
      best.argmin = x;
      best.value = fx;
    }
  };
  consider(c, fc);
  consider(d, fd);

  int it = 0;
  while (b - a > tol) {
    if (++it > max_iter) {
      throw Error(ErrorCode::non_convergence, "golden_section: bracket did not shrink below tolerance");
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  best.iterations = it;
  return best;
}

}  // namespace linalg
}  // namespace eclim
