#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcanml/errors.hpp"
#include "pcanml/grid_step.hpp"
#include "pcanml/matrix.hpp"
#include "pcanml/svd.hpp"

namespace pcanml {

/// How the fitted-energy term of the score is aggregated.
///
/// full_gram:   n·k·ln ‖XᵀX‖²_F
/// per_row_sum: k·Σ_j ln(X_j X_jᵀ), one term per data row
enum class GramMode { full_gram, per_row_sum };

inline std::string_view to_string(GramMode mode) {
  return mode == GramMode::full_gram ? "full_gram" : "per_row_sum";
}

inline GramMode gram_mode_from_string(std::string_view s) {
  if (s == "full_gram") return GramMode::full_gram;
  if (s == "per_row_sum") return GramMode::per_row_sum;
  throw DomainError("unknown gram mode '" + std::string(s) + "'");
}

/// Energies below this are replaced before taking logarithms.
inline constexpr double kLogFloor = 1e-300;

/// Score terms for one candidate dimension k.
///
/// lower_total() is the stochastic-complexity estimate with Δs = 0 and
/// upper_total() adds the largest admissible Δs = mk·ln(2/(mε)).
struct ComplexityTerms {
  std::size_t k = 0;
  double tail_energy = 0.0;  // Σ_{i>k} λ_i², before flooring
  double tail_term = 0.0;    // (nm − kn)·ln tail
  double gram_term = 0.0;
  double ratio_term = 0.0;   // (mn − kn − 1)·ln(mn/(mn − kn))
  double count_term = 0.0;   // (nk + 1)·ln(nk)
  double delta_lower = 0.0;
  double delta_upper = 0.0;
  bool floored = false;  // tail_energy (or a row energy) was below kLogFloor

  double lower_total() const noexcept { return tail_term + gram_term + ratio_term - count_term; }
  double upper_total() const noexcept { return lower_total() + delta_upper; }

  friend bool operator==(const ComplexityTerms&, const ComplexityTerms&) = default;
};

struct KBracket {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool contains(std::size_t k) const noexcept { return lo <= k && k <= hi; }
  friend bool operator==(const KBracket&, const KBracket&) = default;
};

struct ComplexityReport {
  std::size_t n = 0;
  std::size_t m = 0;
  GridStep epsilon{1};
  GramMode gram_mode = GramMode::full_gram;
  std::vector<ComplexityTerms> per_k;  // k = 1 … m−1, ascending
  std::size_t k_lower_opt = 0;
  std::size_t k_upper_opt = 0;
  KBracket k_bracket;

  friend bool operator==(const ComplexityReport&, const ComplexityReport&) = default;
};

/// Closed-form NML code length of a Gaussian linear regression with
/// `n_params` coefficients and `n_obs` observations.
struct RegressionNmlInputs {
  std::uint64_t n_obs = 0;
  std::uint64_t n_params = 0;
  double tau_hat = 0.0;       // ML residual energy
  double fit_energy = 0.0;    // squared norm of the fitted values
};

inline double regression_nml(const RegressionNmlInputs& in) {
  if (in.n_params == 0 || in.n_params >= in.n_obs) {
    throw DomainError("regression_nml: need 1 <= n_params < n_obs, got n_params=" + std::to_string(in.n_params) +
                      ", n_obs=" + std::to_string(in.n_obs));
  }
  if (!(in.tau_hat > 0.0) || !(in.fit_energy > 0.0)) {
    throw DomainError("regression_nml: tau_hat and fit_energy must be positive");
  }
  const double obs = static_cast<double>(in.n_obs);
  const double params = static_cast<double>(in.n_params);
  return (obs - params) * std::log(in.tau_hat) + params * std::log(in.fit_energy) +
         (obs - params - 1.0) * std::log(obs / (obs - params)) - (params + 1.0) * std::log(params);
}

/// mk·ln(2/(mε)); nonnegative whenever ε < 1/m.
inline double delta_upper_bound(std::size_t m, std::size_t k, const GridStep& eps) {
  const double md = static_cast<double>(m);
  return md * static_cast<double>(k) * std::log(2.0 / (md * eps.value()));
}

namespace detail {

inline void require_k(std::size_t k, std::size_t m) {
  if (k < 1 || k + 1 > m) {
    throw DomainError("k=" + std::to_string(k) + " outside [1, " + std::to_string(m == 0 ? 0 : m - 1) + "]");
  }
}

// `gram_log_per_k` is the gram term divided by k: n·ln‖XᵀX‖²_F in full_gram
// mode, Σ_j ln(X_j X_jᵀ) in per_row_sum mode.
inline ComplexityTerms score_terms(const SvdResult& s, double gram_log_per_k, bool gram_floored, std::size_t n,
                                   std::size_t m, std::size_t k, const GridStep& eps) {
  require_k(k, m);
  eps.require_valid_for(m);
  if (s.rows() != n || s.cols() != m) throw DomainError("score_terms: SVD shape does not match n, m");

  ComplexityTerms t;
  t.k = k;
  t.tail_energy = tail_energy(s, k);
  double tail = t.tail_energy;
  if (tail < kLogFloor) {
    tail = kLogFloor;
    t.floored = true;
  }
  t.floored = t.floored || gram_floored;

  const double mn = static_cast<double>(m) * static_cast<double>(n);
  const double kn = static_cast<double>(k) * static_cast<double>(n);
  t.tail_term = (mn - kn) * std::log(tail);
  t.gram_term = static_cast<double>(k) * gram_log_per_k;
  t.ratio_term = (mn - kn - 1.0) * std::log(mn / (mn - kn));
  t.count_term = (kn + 1.0) * std::log(kn);
  t.delta_lower = 0.0;
  t.delta_upper = delta_upper_bound(m, k, eps);
  return t;
}

}  // namespace detail

/// Score terms for dimension k in full_gram form, with `gram_fro_sq` = ‖XᵀX‖²_F.
inline ComplexityTerms stochastic_complexity_terms(const SvdResult& s, double gram_fro_sq, std::size_t n,
                                                   std::size_t m, std::size_t k, const GridStep& eps) {
  if (!(gram_fro_sq > 0.0)) throw DomainError("stochastic_complexity_terms: gram_fro_sq must be positive");
  return detail::score_terms(s, static_cast<double>(n) * std::log(gram_fro_sq), false, n, m, k, eps);
}

/// Smallest k attaining the minimum of `total` over `terms`, whatever the
/// order of `terms`.
template <class Total>
std::size_t argmin_smallest_k(std::span<const ComplexityTerms> terms, Total total) {
  if (terms.empty()) throw DomainError("argmin over an empty k range");
  const ComplexityTerms* best = &terms.front();
  for (const auto& t : terms) {
    const double a = total(t);
    const double b = total(*best);
    if (a < b || (a == b && t.k < best->k)) best = &t;
  }
  return best->k;
}

inline ComplexityReport select_rank(const RealMatrix& x, const GridStep& eps,
                                    GramMode gram_mode = GramMode::full_gram) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < 2 || m < 2) throw DomainError("select_rank: need at least 2 rows and 2 columns");
  eps.require_valid_for(m);
  if (frobenius_sq(x) == 0.0) throw DegenerateInputError("select_rank: all-zero matrix has no signal to rank");

  const SvdResult s = svd(x);

  double gram_log_per_k = 0.0;
  bool gram_floored = false;
  if (gram_mode == GramMode::full_gram) {
    gram_log_per_k = static_cast<double>(n) * std::log(gram_frobenius_sq(x));
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      double energy = 0.0;
      for (double v : x.row(j)) energy += v * v;
      if (energy < kLogFloor) {
        energy = kLogFloor;
        gram_floored = true;
      }
      gram_log_per_k += std::log(energy);
    }
  }

  ComplexityReport r;
  r.n = n;
  r.m = m;
  r.epsilon = eps;
  r.gram_mode = gram_mode;
  r.per_k.reserve(m - 1);
  for (std::size_t k = 1; k < m; ++k) r.per_k.push_back(detail::score_terms(s, gram_log_per_k, gram_floored, n, m, k, eps));

  r.k_lower_opt = argmin_smallest_k(std::span<const ComplexityTerms>(r.per_k), [](const auto& t) { return t.lower_total(); });
  r.k_upper_opt = argmin_smallest_k(std::span<const ComplexityTerms>(r.per_k), [](const auto& t) { return t.upper_total(); });
  r.k_bracket = {std::min(r.k_lower_opt, r.k_upper_opt), std::max(r.k_lower_opt, r.k_upper_opt)};
  return r;
}

struct GapRatio {
  std::size_t k = 0;
  std::optional<double> ratio;  // empty when lower_total == 0

  friend bool operator==(const GapRatio&, const GapRatio&) = default;
};

/// (upper_total − lower_total)/|lower_total| for every k in the report.
inline std::vector<GapRatio> bound_gap_ratio(const ComplexityReport& r) {
  std::vector<GapRatio> out;
  out.reserve(r.per_k.size());
  for (const auto& t : r.per_k) {
    const double lower = t.lower_total();
    GapRatio g{t.k, std::nullopt};
    if (lower != 0.0) g.ratio = (t.upper_total() - lower) / std::abs(lower);
    out.push_back(g);
  }
  return out;
}

}  // namespace pcanml
