#pragma once

// Independent reference computations for the tests. Nothing here calls the
// code path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pcanml/matrix.hpp"

namespace pcanml::testing {

inline RealMatrix gaussian_matrix(std::size_t n, std::size_t m, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> z(0.0, sigma);
  std::vector<double> e(n * m);
  for (double& v : e) v = z(rng);
  return RealMatrix(n, m, std::move(e));
}

inline Eigen::MatrixXd to_eigen(const RealMatrix& x) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
  return out;
}

inline RealMatrix from_eigen(const Eigen::MatrixXd& x) {
  std::vector<double> e;
  e.reserve(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) e.push_back(x(i, j));
  return RealMatrix(x.rows(), x.cols(), std::move(e));
}

/// sqrt of the eigenvalues of XᵀX (symmetric eigensolver), nonincreasing.
inline std::vector<double> singular_values_via_gram(const RealMatrix& x) {
  const Eigen::MatrixXd a = to_eigen(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.transpose() * a);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(std::sqrt(std::max(0.0, solver.eigenvalues()(i))));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
/// of R's diagonal folded into Q.
inline RealMatrix random_orthogonal(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = z(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return from_eigen(q);
}

/// Rank-r product of Gaussian factors.
inline RealMatrix random_rank_r(std::size_t n, std::size_t m, std::size_t r, std::mt19937_64& rng) {
  return gaussian_matrix(n, r, rng) * gaussian_matrix(r, m, rng);
}

/// Σ (a_ij − b_ij)², written out element by element.
inline double explicit_residual_sq(const RealMatrix& a, const RealMatrix& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const long double d = static_cast<long double>(a(i, j)) - b(i, j);
      acc += d * d;
    }
  return static_cast<double>(acc);
}

/// 0-based index of the point farthest from the chord joining the first and
/// last points of (i, y_i).
inline std::size_t chord_knee(std::span<const double> y) {
  const double x0 = 0.0;
  const double x1 = static_cast<double>(y.size() - 1);
  const double y0 = y.front();
  const double y1 = y.back();
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = static_cast<double>(i);
    const double d = std::abs((y1 - y0) * x - (x1 - x0) * y[i] + x1 * y0 - y1 * x0) / std::hypot(y1 - y0, x1 - x0);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace pcanml::testing
