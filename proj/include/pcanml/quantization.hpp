#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "pcanml/errors.hpp"
#include "pcanml/grid_step.hpp"
#include "pcanml/matrix.hpp"

namespace pcanml {

/// Loadings rounded to the ε grid: v_eps = v + ε·e_k with |e_k| ≤ 1/2.
struct QuantizedLoadings {
  GridStep epsilon;
  RealMatrix v_eps;
  RealMatrix e_k;
};

/// Rounds every entry of `v` to the nearest multiple of ε in [−1, 1]
/// (midpoints away from zero). `m` is the loadings dimension ε is checked
/// against.
inline QuantizedLoadings quantize(const RealMatrix& v, const GridStep& eps, std::size_t m) {
  eps.require_valid_for(m);
  const double n_steps = static_cast<double>(eps.inverse());
  std::vector<double> q(v.size());
  std::vector<double> e(v.size());
  const auto src = v.entries();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (std::abs(src[i]) > 1.0 + 1e-12) {
      throw DomainError("quantize: entry " + std::to_string(src[i]) + " outside [-1, 1]");
    }
    const double index = std::clamp(std::round(src[i] * n_steps), -n_steps, n_steps);
    q[i] = index / n_steps;
    e[i] = (q[i] - src[i]) * n_steps;
  }
  return QuantizedLoadings{eps, RealMatrix(v.rows(), v.cols(), std::move(q)), RealMatrix(v.rows(), v.cols(), std::move(e))};
}

/// Claimed bound ε + mε²/4 on |v_i^ε·v_j^ε − v_i·v_j| for columns of a
/// unitary matrix.
///
/// NOTE: this is not a worst-case bound. The cross terms ε(e_i·v_j + v_i·e_j)
/// are only bounded by ε√m, and random orthogonal matrices exceed ε + mε²/4
/// on a small fraction of column pairs. See provable_inner_product_bound.
inline double inner_product_perturbation_bound(std::size_t m, const GridStep& eps) {
  const double e = eps.value();
  return e + static_cast<double>(m) * e * e / 4.0;
}

/// ε√m + mε²/4, which holds for every pair of unit columns by Cauchy-Schwarz.
inline double provable_inner_product_bound(std::size_t m, const GridStep& eps) {
  const double e = eps.value();
  const double md = static_cast<double>(m);
  return e * std::sqrt(md) + md * e * e / 4.0;
}

/// max over column pairs i ≤ j of |a_i·a_j − b_i·b_j|.
inline double max_inner_product_deviation(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("inner product deviation: shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) {
      double da = 0.0;
      double db = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        da += a(r, i) * a(r, j);
        db += b(r, i) * b(r, j);
      }
      worst = std::max(worst, std::abs(da - db));
    }
  return worst;
}

struct Lemma2Bound {
  double log_count = 0.0;
  // false when ε ≥ 1/m or (ε + mε²/4) ≥ π; the value is still computed.
  bool small_eps_regime = true;
};

/// Estimated ln |{quantized m×k unitary matrices}|:
///   mk·[ln(2/ε + 1) − (1 − (1 + ε + ε²/4)/√m)/2] + (k − 1)·ln((ε + mε²/4)/π)
inline Lemma2Bound lemma2_log_count_bound(std::size_t m, std::size_t k, const GridStep& eps) {
  if (k < 1 || m < 2) throw DomainError("lemma2_log_count_bound: need k >= 1 and m >= 2");
  const double e = eps.value();
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double pair_bound = e + md * e * e / 4.0;

  Lemma2Bound out;
  out.log_count = md * kd * (std::log(2.0 / e + 1.0) - (1.0 - (1.0 + e + e * e / 4.0) / std::sqrt(md)) / 2.0);
  if (k > 1) out.log_count += (kd - 1.0) * std::log(pair_bound / std::numbers::pi);
  out.small_eps_regime = eps.valid_for(m) && pair_bound < std::numbers::pi;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-model NML normalizers
// ---------------------------------------------------------------------------

/// Pairwise summation; the result does not depend on how callers chunk work.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// A parametric family over a finite outcome grid, with a continuous-style
/// parameter A and a finite parameter set B = {b₁ … b_ℓ}.
template <class Outcome, class ParamA, class ParamB>
struct DiscreteModel {
  struct Cell {
    Outcome point;
    double weight;  // measure of the cell
  };

  std::vector<Cell> cells;
  std::vector<ParamA> a_family;
  std::vector<ParamB> b_family;
  std::function<double(const Outcome&, const ParamA&, const ParamB&)> likelihood;
};

/// Which b the jointly-maximized integrand uses at each outcome.
///
/// arg_max is the maximum-likelihood choice. arg_min takes the b
/// that *minimizes* max_a likelihood, the condition the lower bound is
/// sometimes stated with; under it the lower bound does not hold in general.
enum class BSelection { arg_max, arg_min };

struct JointOptimum {
  BSelection selection = BSelection::arg_max;
};
struct FixedB {
  std::size_t index = 0;
};
using IntegralMode = std::variant<JointOptimum, FixedB>;

namespace detail {

template <class Model>
void require_valid(const Model& model) {
  if (model.cells.empty()) throw DomainError("DiscreteModel: empty outcome grid");
  if (model.a_family.empty() || model.b_family.empty()) throw DomainError("DiscreteModel: empty parameter family");
  if (!model.likelihood) throw DomainError("DiscreteModel: missing likelihood");
  for (const auto& c : model.cells)
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw DomainError("DiscreteModel: invalid cell weight");
}

template <class Model, class Outcome>
double max_over_a(const Model& model, const Outcome& x, std::size_t b) {
  double best = 0.0;
  for (const auto& a : model.a_family) {
    const double p = model.likelihood(x, a, model.b_family[b]);
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("DiscreteModel: likelihood must be finite and nonnegative");
    best = std::max(best, p);
  }
  return best;
}

}  // namespace detail

/// Σ_x w(x)·max p̂(x), the normalizer of the NML density restricted to the
/// grid. JointOptimum maximizes over (a, b); FixedB over a only.
template <class Outcome, class ParamA, class ParamB>
double nml_numerator_integral(const DiscreteModel<Outcome, ParamA, ParamB>& model, const IntegralMode& mode) {
  detail::require_valid(model);
  std::vector<double> terms;
  terms.reserve(model.cells.size());
  const std::size_t nb = model.b_family.size();

  if (const auto* fixed = std::get_if<FixedB>(&mode)) {
    if (fixed->index >= nb) throw DomainError("FixedB: index out of range");
    for (const auto& c : model.cells) terms.push_back(c.weight * detail::max_over_a(model, c.point, fixed->index));
  } else {
    const BSelection sel = std::get<JointOptimum>(mode).selection;
    for (const auto& c : model.cells) {
      double chosen = detail::max_over_a(model, c.point, 0);
      for (std::size_t b = 1; b < nb; ++b) {
        const double p = detail::max_over_a(model, c.point, b);
        chosen = sel == BSelection::arg_max ? std::max(chosen, p) : std::min(chosen, p);
      }
      terms.push_back(c.weight * chosen);
    }
  }
  return pairwise_sum(terms);
}

struct Lemma1Check {
  bool upper_holds = false;
  bool lower_holds = false;
  double slack_upper = 0.0;  // Σ_b fixed_b − joint
  double slack_lower = 0.0;  // joint − max_b fixed_b
  double joint = 0.0;
  std::vector<double> fixed;  // one normalizer per b
};

inline constexpr double kLemma1Tolerance = 1e-9;

/// Checks  max_b I_b ≤ I_joint ≤ Σ_b I_b  by exhaustive summation.
template <class Outcome, class ParamA, class ParamB>
Lemma1Check verify_lemma1(const DiscreteModel<Outcome, ParamA, ParamB>& model,
                          BSelection selection = BSelection::arg_max) {
  Lemma1Check out;
  out.joint = nml_numerator_integral(model, JointOptimum{selection});
  out.fixed.reserve(model.b_family.size());
  for (std::size_t b = 0; b < model.b_family.size(); ++b) out.fixed.push_back(nml_numerator_integral(model, FixedB{b}));

  out.slack_upper = pairwise_sum(out.fixed) - out.joint;
  out.slack_lower = out.joint - *std::max_element(out.fixed.begin(), out.fixed.end());
  out.upper_holds = out.slack_upper >= -kLemma1Tolerance;
  out.lower_holds = out.slack_lower >= -kLemma1Tolerance;
  return out;
}

}  // namespace pcanml
