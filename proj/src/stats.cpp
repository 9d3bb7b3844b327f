#include "sigvol/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "sigvol/black_scholes.hpp"

namespace sigvol {

MeanCi mean_ci(std::span<const double> values, double confidence) {
  if (values.empty()) throw std::invalid_argument("mean_ci of an empty sample");
  MeanCi out;
  out.n = static_cast<long long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.n;
  double ss = 0.0;
  for (double v : values) {
    double d = v - out.mean;
    ss += d * d;
  }
  double var = out.n > 1 ? ss / (out.n - 1) : 0.0;
  out.stderr_ = std::sqrt(var / out.n);
  double z = norm_quantile(0.5 + confidence / 2);
  out.ci = {out.mean - z * out.stderr_, out.mean + z * out.stderr_};
  return out;
}

std::pair<double, double> wilson_ci(long long k, long long n, double confidence) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("bad binomial counts");
  double z = norm_quantile(0.5 + confidence / 2);
  double p = static_cast<double>(k) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

}  // namespace sigvol
