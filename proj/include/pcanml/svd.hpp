#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pcanml/errors.hpp"
#include "pcanml/matrix.hpp"

namespace pcanml {

/// Thin SVD X = U·diag(λ)·Vᵀ of an n×m matrix, r = min(n, m).
///
/// `u` is n×r and `v` is m×r, both with orthonormal columns; the singular
/// values are nonincreasing and nonnegative. When two singular values tie
/// the column order is whatever the solver produced; the truncation residual
/// is unaffected by that choice, the truncated matrix is not.
struct SvdResult {
  RealMatrix u;
  std::vector<double> singular_values;
  RealMatrix v;

  std::size_t rows() const noexcept { return u.rows(); }
  // Column count m of the decomposed matrix, which is the valid upper bound
  // for truncation ranks even when n < m.
  std::size_t cols() const noexcept { return v.rows(); }
};

inline constexpr int kJacobiSweepCap = 100;

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline void rotate(std::vector<double>& p, std::vector<double>& q, double c, double s) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double xp = p[i];
    const double xq = q[i];
    p[i] = c * xp - s * xq;
    q[i] = s * xp + c * xq;
  }
}

// Gram-Schmidt `w` against `basis` (two passes). Returns the remaining norm.
inline double orthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const double proj = dot(w, b);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * b[i];
    }
  return std::sqrt(dot(w, w));
}

// One-sided (Hestenes) Jacobi on a matrix with rows >= cols.
inline SvdResult jacobi_svd_tall(const RealMatrix& x, int sweep_cap) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();

  std::vector<std::vector<double>> a(m);
  for (std::size_t j = 0; j < m; ++j) a[j] = x.column(j);
  std::vector<std::vector<double>> v(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j) v[j][j] = 1.0;

  // Relative orthogonality threshold; dot products of length-n columns
  // carry roughly n ulps of error, so asking for less never terminates.
  const double tol = static_cast<double>(std::max<std::size_t>(n, 1)) * std::numeric_limits<double>::epsilon();

  bool converged = false;
  for (int sweep = 0; sweep < sweep_cap && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = dot(a[p], a[p]);
        const double beta = dot(a[q], a[q]);
        const double gamma = dot(a[p], a[q]);
        if (gamma == 0.0 || alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(a[p], a[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    converged = !rotated;
  }
  if (!converged) throw ConvergenceError("svd: one-sided Jacobi did not converge", sweep_cap);

  std::vector<double> sigma(m);
  for (std::size_t j = 0; j < m; ++j) sigma[j] = std::sqrt(dot(a[j], a[j]));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return sigma[l] > sigma[r]; });

  const double sigma_max = sigma[order[0]];
  std::vector<std::vector<double>> ucols;
  ucols.reserve(m);
  std::vector<double> values;
  values.reserve(m);
  std::size_t next_unit = 0;
  for (std::size_t idx : order) {
    std::vector<double> col = a[idx];
    const double sj = sigma[idx];
    if (sj > 0.0) {
      for (double& e : col) e /= sj;
    }
    // Columns at roundoff level carry no reliable direction: re-orthogonalize
    // them, and complete the basis from unit vectors when they are dependent.
    if (sj <= 1e-8 * sigma_max) {
      double norm = sj > 0.0 ? orthogonalize(col, ucols) : 0.0;
      while (norm < 0.5) {
        if (next_unit >= n) throw DomainError("svd: unable to complete orthonormal basis");
        col.assign(n, 0.0);
        col[next_unit++] = 1.0;
        norm = orthogonalize(col, ucols);
      }
      for (double& e : col) e /= norm;
    }
    ucols.push_back(std::move(col));
    values.push_back(sj);
  }

  std::vector<double> u_entries(n * m);
  std::vector<double> v_entries(m * m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < n; ++i) u_entries[i * m + c] = ucols[c][i];
    for (std::size_t i = 0; i < m; ++i) v_entries[i * m + c] = v[order[c]][i];
  }
  return SvdResult{RealMatrix(n, m, std::move(u_entries)), std::move(values), RealMatrix(m, m, std::move(v_entries))};
}

inline void require_rank_in_range(const SvdResult& s, std::size_t k, const char* who) {
  if (k > s.cols()) {
    throw DomainError(std::string(who) + ": k=" + std::to_string(k) + " outside [0, " + std::to_string(s.cols()) + "]");
  }
}

}  // namespace detail

/// Thin SVD by one-sided Jacobi. Wide inputs are decomposed through their
/// transpose. Throws ConvergenceError when `sweep_cap` sweeps do not suffice.
inline SvdResult svd(const RealMatrix& x, int sweep_cap = kJacobiSweepCap) {
  if (x.rows() >= x.cols()) return detail::jacobi_svd_tall(x, sweep_cap);
  SvdResult t = detail::jacobi_svd_tall(x.transpose(), sweep_cap);
  return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

/// Rank-k reconstruction U_k·diag(λ₁…λ_k)·V_kᵀ, 0 ≤ k ≤ m.
inline RealMatrix truncate(const SvdResult& s, std::size_t k) {
  detail::require_rank_in_range(s, k, "truncate");
  const std::size_t n = s.rows();
  const std::size_t m = s.cols();
  const std::size_t used = std::min(k, s.singular_values.size());
  std::vector<double> out(n * m, 0.0);
  for (std::size_t c = 0; c < used; ++c) {
    const double lambda = s.singular_values[c];
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = lambda * s.u(i, c);
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += ui * s.v(j, c);
    }
  }
  return RealMatrix(n, m, std::move(out));
}

/// Σ_{i>k} λ_i², which equals ‖X − truncate(s, k)‖²_F.
inline double tail_energy(const SvdResult& s, std::size_t k) {
  detail::require_rank_in_range(s, k, "tail_energy");
  double acc = 0.0;
  // smallest first
  for (std::size_t i = s.singular_values.size(); i > k; --i) acc += s.singular_values[i - 1] * s.singular_values[i - 1];
  return acc;
}

/// max |QᵀQ − I|.
inline double orthonormality_error(const RealMatrix& q) {
  double worst = 0.0;
  for (std::size_t a = 0; a < q.cols(); ++a)
    for (std::size_t b = a; b < q.cols(); ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) g += q(i, a) * q(i, b);
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace pcanml
