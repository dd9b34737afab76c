#pragma once

// Small discrete models for the joint-versus-fixed NML integral checks.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pcanml/quantization.hpp"

namespace pcanml::testing {

using ScalarModel = DiscreteModel<double, double, double>;
using IndexModel = DiscreteModel<int, int, int>;

/// One outcome, one parameter of each kind, likelihood 1.
inline ScalarModel degenerate_model() {
  ScalarModel model;
  model.cells = {{0.0, 1.0}};
  model.a_family = {0.0};
  model.b_family = {0.0};
  model.likelihood = [](double, double, double) { return 1.0; };
  return model;
}

/// Gaussian location family on `cells` midpoint cells of [−5, 5]; A = 11
/// integer means, B = two variances.
inline ScalarModel gaussian_location(std::size_t cells) {
  ScalarModel model;
  const double h = 10.0 / static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i) model.cells.push_back({-5.0 + h * (static_cast<double>(i) + 0.5), h});
  for (int mu = -5; mu <= 5; ++mu) model.a_family.push_back(mu);
  model.b_family = {0.5, 1.0};
  model.likelihood = [](double x, double mu, double var) {
    return std::exp(-(x - mu) * (x - mu) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
  };
  return model;
}

/// Three outcomes with weights 0.5, 1, 2; each b puts all its mass on
/// outcome b. Fixed-b integrals are 0.3, 0.9, 0.6 and the joint one is 1.8.
inline ScalarModel disjoint_support() {
  ScalarModel model;
  model.cells = {{0.0, 0.5}, {1.0, 1.0}, {2.0, 2.0}};
  model.a_family = {1.0, 3.0};
  model.b_family = {0.0, 1.0, 2.0};
  model.likelihood = [](double x, double a, double b) {
    static constexpr double scale[] = {0.2, 0.3, 0.1};
    return x == b ? a * scale[static_cast<int>(b)] : 0.0;
  };
  return model;
}

/// Random likelihood table over 5–30 cells, |A| in 1–5 and |B| in 1–4,
/// with about a fifth of the entries zero.
inline IndexModel random_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cells_d(5, 30), a_d(1, 5), b_d(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IndexModel model;
  const int nc = cells_d(rng), na = a_d(rng), nb = b_d(rng);
  for (int i = 0; i < nc; ++i) model.cells.push_back({i, u(rng)});
  for (int a = 0; a < na; ++a) model.a_family.push_back(a);
  for (int b = 0; b < nb; ++b) model.b_family.push_back(b);
  std::vector<double> table(static_cast<std::size_t>(nc * na * nb));
  for (double& t : table) t = u(rng) < 0.2 ? 0.0 : u(rng) * 3.0;
  model.likelihood = [table, na, nb](int x, int a, int b) {
    return table[static_cast<std::size_t>((x * na + a) * nb + b)];
  };
  return model;
}

}  // namespace pcanml::testing
