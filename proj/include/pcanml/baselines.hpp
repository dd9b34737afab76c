#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcanml/datasets.hpp"
#include "pcanml/errors.hpp"
#include "pcanml/matrix.hpp"
#include "pcanml/svd.hpp"

namespace pcanml {

/// Per-component explained variance in decreasing order.
struct ScreeCurve {
  std::vector<double> variances;
  bool normalized = false;

  friend bool operator==(const ScreeCurve&, const ScreeCurve&) = default;
};

/// λ_i², or λ_i²/Σλ_j² when `normalized`.
inline ScreeCurve scree(const SvdResult& s, bool normalized) {
  ScreeCurve c;
  c.normalized = normalized;
  c.variances.reserve(s.singular_values.size());
  for (double l : s.singular_values) c.variances.push_back(l * l);
  if (normalized) {
    double total = 0.0;
    for (double v : c.variances) total += v;
    if (total == 0.0) throw DegenerateInputError("scree: all singular values are zero");
    for (double& v : c.variances) v /= total;
  }
  return c;
}

/// Number of correlation-matrix eigenvalues that are at least one.
inline std::size_t kaiser(std::span<const double> eigenvalues_of_correlation) {
  return static_cast<std::size_t>(std::count_if(eigenvalues_of_correlation.begin(), eigenvalues_of_correlation.end(),
                                                [](double e) { return e >= 1.0; }));
}

/// Eigenvalues of the sample correlation matrix of `x`, nonincreasing.
/// Throws DegenerateInputError on a constant column.
inline std::vector<double> correlation_eigenvalues(const RealMatrix& x) {
  const RealMatrix z = standardize_columns(x);
  const SvdResult s = svd(z);
  std::vector<double> out;
  out.reserve(x.cols());
  const double dof = static_cast<double>(x.rows() - 1);
  for (double l : s.singular_values) out.push_back(l * l / dof);
  // wide inputs have only n singular values; the rest of the spectrum is zero
  out.resize(x.cols(), 0.0);
  return out;
}

inline constexpr double kKneedleDefaultSensitivity = 1.0;

/// Kneedle knee detection on a decreasing scree curve.
///
/// Points are placed at x = 0 … m−1 and both axes are min-max normalized.
/// The decreasing convex curve is flipped to y' = 1 − y_norm, and the
/// difference curve d = y' − x_norm is scanned for local maxima. A local
/// maximum at i becomes the knee when d falls below
/// d[i] − sensitivity·mean(Δx_norm) before the next local maximum.
///
/// Returns the 0-based position of the knee point, which is the number of
/// components that precede the elbow, or nullopt when no knee qualifies.
inline std::optional<std::size_t> kneedle(const ScreeCurve& curve, double sensitivity = kKneedleDefaultSensitivity) {
  const auto& y = curve.variances;
  const std::size_t m = y.size();
  if (m < 3) throw DomainError("kneedle: need at least 3 points, got " + std::to_string(m));
  if (!(sensitivity > 0.0)) throw DomainError("kneedle: sensitivity must be positive");

  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const double ymin = *ymin_it;
  const double span = *ymax_it - ymin;
  if (span <= 0.0) return std::nullopt;

  const double last = static_cast<double>(m - 1);
  std::vector<double> diff(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x_norm = static_cast<double>(i) / last;
    const double y_norm = (y[i] - ymin) / span;
    diff[i] = (1.0 - y_norm) - x_norm;
  }

  // Consecutive x_norm gaps are all 1/(m−1).
  const double mean_gap = 1.0 / last;
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (diff[i] > diff[i - 1] && diff[i] >= diff[i + 1]) maxima.push_back(i);

  for (std::size_t idx = 0; idx < maxima.size(); ++idx) {
    const std::size_t at = maxima[idx];
    const double threshold = diff[at] - sensitivity * mean_gap;
    const std::size_t stop = idx + 1 < maxima.size() ? maxima[idx + 1] : m;
    for (std::size_t j = at + 1; j < stop; ++j)
      if (diff[j] < threshold) return at;
  }
  return std::nullopt;
}

}  // namespace pcanml
