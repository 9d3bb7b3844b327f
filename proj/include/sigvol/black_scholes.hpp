#ifndef SIGVOL_BLACK_SCHOLES_HPP
#define SIGVOL_BLACK_SCHOLES_HPP

#include <optional>
#include <string>

namespace sigvol {

// Standard normal CDF, accurate to better than 1e-15 absolute.
double norm_cdf(double x);
double norm_pdf(double x);
// Inverse of norm_cdf on (0, 1), via bracketed bisection.
double norm_quantile(double p);

// Black-Scholes value under zero rates and dividends (the model works under
// the risk-neutral measure with no drift). vol = 0 returns intrinsic.
double bs_price(double s0, double strike, double T, double vol, bool is_call);
double bs_vega(double s0, double strike, double T, double vol);

enum class IvMissingReason {
  none,
  at_or_below_intrinsic,  // includes the zero-vol boundary
  at_or_above_upper_bound,
};

std::string to_string(IvMissingReason reason);

struct ImpliedVolResult {
  std::optional<double> vol;
  IvMissingReason reason = IvMissingReason::none;
};

// The unique vol with bs_price = price when price lies strictly between the
// no-arbitrage bounds; missing (with a reason code, never an exception)
// otherwise. Root solved to 1e-10 in price by a bracketed bisection/secant
// hybrid.
ImpliedVolResult implied_vol(double price, double s0, double strike, double T, bool is_call);

}  // namespace sigvol

#endif
