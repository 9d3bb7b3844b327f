#ifndef SIGVOL_STATS_HPP
#define SIGVOL_STATS_HPP

#include <span>
#include <utility>

namespace sigvol {

struct MeanCi {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
  long long n = 0;
};

// Sample mean with a two-sided normal CI at the given confidence level.
MeanCi mean_ci(std::span<const double> values, double confidence = 0.95);

// Wilson score interval for a binomial proportion; well-behaved at k = 0.
std::pair<double, double> wilson_ci(long long k, long long n, double confidence = 0.95);

}  // namespace sigvol

#endif
