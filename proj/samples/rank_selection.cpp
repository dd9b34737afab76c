// Picks the number of principal components of a synthetic Lin10 matrix and
// prints the score curve next to the Kaiser and Kneedle choices.

#include <cstdio>

#include "pcanml/pcanml.hpp"

int main() {
  pcanml::SyntheticSpec spec;  // n=500, m=30, true_k=10, noise_sigma=0.1
  const pcanml::RealMatrix x = pcanml::generate_lin(spec);

  const auto eps = pcanml::GridStep::auto_for(x.cols());
  const pcanml::ComplexityReport report = pcanml::select_rank(x, eps);

  std::printf("%4s %16s %16s\n", "k", "lower", "upper");
  for (const auto& t : report.per_k) std::printf("%4zu %16.3f %16.3f\n", t.k, t.lower_total(), t.upper_total());
  std::printf("NML bracket: [%zu, %zu]\n", report.k_bracket.lo, report.k_bracket.hi);

  const auto kaiser_k = pcanml::kaiser(pcanml::correlation_eigenvalues(x));
  const auto knee = pcanml::kneedle(pcanml::scree(pcanml::svd(x), true));
  std::printf("Kaiser: %zu\n", kaiser_k);
  if (knee) std::printf("Kneedle: %zu\n", *knee);
  return 0;
}
