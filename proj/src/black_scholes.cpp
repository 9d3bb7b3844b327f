#include "sigvol/black_scholes.hpp"

#include <cmath>
#include <stdexcept>

namespace sigvol {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double norm_pdf(double x) { return 0.3989422804014326779 * std::exp(-0.5 * x * x); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile argument must be in (0, 1)");
  double lo = -13.0, hi = 13.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    (norm_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bs_price(double s0, double strike, double T, double vol, bool is_call) {
  if (s0 <= 0 || strike <= 0 || T <= 0) throw std::invalid_argument("bs_price requires s0, strike, T > 0");
  if (vol < 0) throw std::invalid_argument("bs_price requires vol >= 0");
  if (vol == 0) {
    double fwd = is_call ? s0 - strike : strike - s0;
    return fwd > 0 ? fwd : 0.0;
  }
  double stddev = vol * std::sqrt(T);
  double d1 = std::log(s0 / strike) / stddev + 0.5 * stddev;
  double d2 = d1 - stddev;
  if (is_call) return s0 * norm_cdf(d1) - strike * norm_cdf(d2);
  return strike * norm_cdf(-d2) - s0 * norm_cdf(-d1);
}

double bs_vega(double s0, double strike, double T, double vol) {
  double stddev = vol * std::sqrt(T);
  if (stddev <= 0) return 0.0;
  double d1 = std::log(s0 / strike) / stddev + 0.5 * stddev;
  return s0 * norm_pdf(d1) * std::sqrt(T);
}

std::string to_string(IvMissingReason reason) {
  switch (reason) {
    case IvMissingReason::none: return "none";
    case IvMissingReason::at_or_below_intrinsic: return "at_or_below_intrinsic";
    case IvMissingReason::at_or_above_upper_bound: return "at_or_above_upper_bound";
  }
  return "unknown";
}

ImpliedVolResult implied_vol(double price, double s0, double strike, double T, bool is_call) {
  if (s0 <= 0 || strike <= 0 || T <= 0)
    throw std::invalid_argument("implied_vol requires s0, strike, T > 0");
  double intrinsic = is_call ? std::max(s0 - strike, 0.0) : std::max(strike - s0, 0.0);
  double upper = is_call ? s0 : strike;
  if (!(price > intrinsic)) return {std::nullopt, IvMissingReason::at_or_below_intrinsic};
  if (!(price < upper)) return {std::nullopt, IvMissingReason::at_or_above_upper_bound};

  constexpr double price_tol = 1e-10;
  auto f = [&](double v) { return bs_price(s0, strike, T, v, is_call) - price; };

  double lo = 0.0, f_lo = intrinsic - price;  // bs_price at vol 0
  double hi = 1.0, f_hi = f(hi);
  while (f_hi < 0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2;
    if (hi > 1e6) return {std::nullopt, IvMissingReason::at_or_above_upper_bound};
    f_hi = f(hi);
  }

  // Bisection with a secant candidate when it stays inside the bracket. Runs
  // the bracket down to rounding so the root is as sharp as the price data
  // allows (well inside the 1e-10 price tolerance).
  double v = 0.5 * (lo + hi);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + hi); ++i) {
    // Alternate secant and bisection steps; plain false position stagnates on
    // convex deep-OTM profiles.
    double secant = 0.5 * (lo + hi);
    if (i % 2 == 0) {
      double candidate = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (candidate > lo && candidate < hi) secant = candidate;
    }
    double fv = f(secant);
    v = secant;
    if (fv == 0.0) break;
    if (fv < 0) {
      lo = secant;
      f_lo = fv;
    } else {
      hi = secant;
      f_hi = fv;
    }
  }
  if (std::abs(f(v)) > price_tol * std::max(1.0, s0)) {
    double mid = 0.5 * (lo + hi);
    if (std::abs(f(mid)) < std::abs(f(v))) v = mid;
  }
  return {v, IvMissingReason::none};
}

}  // namespace sigvol
