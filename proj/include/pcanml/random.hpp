#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace pcanml {

/// Seeded source of uniform and Gaussian draws with a fixed, documented
/// algorithm: std::mt19937_64 (whose output sequence the C++ standard pins
/// down), 53-bit uniforms from the top bits, and Box-Muller normals that
/// emit the cosine branch first and cache the sine branch.
///
/// std::normal_distribution is not used because its algorithm is
/// implementation-defined.
class SeededGenerator {
 public:
  static constexpr std::string_view kName = "mt19937_64+box-muller";
  static constexpr int kVersion = 1;

  explicit SeededGenerator(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double standard_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(theta);
    has_cached_ = true;
    return radius * std::cos(theta);
  }

  double normal(double mean, double sigma) { return mean + sigma * standard_normal(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace pcanml
