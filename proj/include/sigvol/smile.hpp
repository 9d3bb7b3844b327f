#ifndef SIGVOL_SMILE_HPP
#define SIGVOL_SMILE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigvol/model.hpp"

namespace sigvol {

struct SmileRow {
  double strike = 0.0;
  double k = 0.0;  // log-moneyness ln(K / S0)
  std::optional<double> put_iv, call_iv;
  std::optional<std::pair<double, double>> put_ci, call_ci;
  long long n_effective = 0;
  // Set when the Monte Carlo payoff mean fell below intrinsic and was floored
  // (the estimator is uninformative there; the IV is reported missing).
  bool put_floored = false, call_floored = false;
};

// Per strike: put/call payoff means with delta-method 95% CIs, inverted to
// implied vols; CI endpoints are inverted to IV CIs. Invalid samples are
// excluded and counted out of n_effective.
std::vector<SmileRow> smile_from_samples(std::span<const PriceSample> samples, double s0, double T,
                                         std::span<const double> strikes, double confidence = 0.95);

struct WingReport {
  double slope_hat = 0.0;  // fitted slope of sigma_BS^2 T against k, call wing
  double beta_r = 0.0;     // 2 (1 - |rho|) / (1 + |rho|)
  std::pair<double, double> fit_range{0.0, 0.0};
  double stderr_ = 0.0;
  long long n_points = 0;
};

// Least-squares slope of total implied variance against log-moneyness over
// the fit range on the call wing. Requires >= 3 usable rows.
WingReport wing_slope(std::span<const SmileRow> rows, double T,
                      std::pair<double, double> fit_range, double rho);

struct LeeSlope {
  double beta_r = 0.0;
  double p_bar = 0.0;  // critical moment exponent rho^2 / (1 - rho^2)
};

LeeSlope theoretical_lee_slope(double rho);

// `strike,k,put_iv,put_lo,put_hi,call_iv,call_lo,call_hi,n_effective` with
// empty fields for missing values.
std::string smile_csv(std::span<const SmileRow> rows);

}  // namespace sigvol

#endif
