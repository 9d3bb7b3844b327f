#include "sigvol/smile.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigvol/black_scholes.hpp"
#include "sigvol/stats.hpp"

namespace sigvol {

namespace {

std::optional<double> invert(double price, double s0, double strike, double T, bool is_call) {
  auto res = implied_vol(price, s0, strike, T, is_call);
  return res.vol;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<SmileRow> smile_from_samples(std::span<const PriceSample> samples, double s0, double T,
                                         std::span<const double> strikes, double confidence) {
  if (samples.empty()) throw std::invalid_argument("smile_from_samples: empty sample set");
  std::vector<double> prices;
  prices.reserve(samples.size());
  for (const auto& s : samples)
    if (s.valid) prices.push_back(s.terminal_price);
  if (prices.empty()) throw std::invalid_argument("smile_from_samples: no valid samples");

  std::vector<SmileRow> rows;
  rows.reserve(strikes.size());
  std::vector<double> payoff(prices.size());
  for (double strike : strikes) {
    if (!(strike > 0)) throw std::invalid_argument("strikes must be > 0");
    SmileRow row;
    row.strike = strike;
    row.k = std::log(strike / s0);
    row.n_effective = static_cast<long long>(prices.size());
    for (bool is_call : {false, true}) {
      for (std::size_t i = 0; i < prices.size(); ++i)
        payoff[i] = is_call ? std::max(prices[i] - strike, 0.0) : std::max(strike - prices[i], 0.0);
      MeanCi est = mean_ci(payoff, confidence);
      double intrinsic = is_call ? std::max(s0 - strike, 0.0) : std::max(strike - s0, 0.0);
      bool floored = est.mean < intrinsic;
      double point = floored ? intrinsic : est.mean;
      auto iv = invert(point, s0, strike, T, is_call);
      auto lo = invert(std::max(est.ci.first, intrinsic), s0, strike, T, is_call);
      auto hi = invert(est.ci.second, s0, strike, T, is_call);
      std::optional<std::pair<double, double>> ci;
      if (iv && lo && hi) ci = std::make_pair(*lo, *hi);
      if (is_call) {
        row.call_iv = floored ? std::nullopt : iv;
        row.call_ci = floored ? std::nullopt : ci;
        row.call_floored = floored;
      } else {
        row.put_iv = floored ? std::nullopt : iv;
        row.put_ci = floored ? std::nullopt : ci;
        row.put_floored = floored;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WingReport wing_slope(std::span<const SmileRow> rows, double T,
                      std::pair<double, double> fit_range, double rho) {
  WingReport report;
  report.fit_range = fit_range;
  report.beta_r = theoretical_lee_slope(rho).beta_r;
  std::vector<std::pair<double, double>> pts;  // (k, sigma_BS^2 T)
  for (const auto& row : rows) {
    if (!row.call_iv) continue;
    if (row.k < fit_range.first || row.k > fit_range.second) continue;
    pts.emplace_back(row.k, *row.call_iv * *row.call_iv * T);
  }
  if (pts.size() < 3)
    throw std::invalid_argument("wing_slope: fewer than 3 usable rows in the fit range");
  report.n_points = static_cast<long long>(pts.size());

  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0) throw std::invalid_argument("wing_slope: degenerate fit range");
  report.slope_hat = (n * sxy - sx * sy) / denom;
  double intercept = (sy - report.slope_hat * sx) / n;
  double ss_res = 0;
  for (auto [x, y] : pts) {
    double r = y - intercept - report.slope_hat * x;
    ss_res += r * r;
  }
  double dof = n > 2 ? n - 2 : 1;
  report.stderr_ = std::sqrt(ss_res / dof * n / denom);
  return report;
}

LeeSlope theoretical_lee_slope(double rho) {
  double a = std::abs(rho);
  if (a > 1) throw std::invalid_argument("|rho| must be <= 1");
  LeeSlope out;
  out.beta_r = 2.0 * (1.0 - a) / (1.0 + a);
  out.p_bar = a < 1 ? rho * rho / (1.0 - rho * rho) : std::numeric_limits<double>::infinity();
  return out;
}

std::string smile_csv(std::span<const SmileRow> rows) {
  std::string out = "strike,k,put_iv,put_lo,put_hi,call_iv,call_lo,call_hi,n_effective\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    out += format_double(r.strike) + "," + format_double(r.k) + ",";
    out += opt(r.put_iv) + ",";
    out += (r.put_ci ? format_double(r.put_ci->first) : std::string()) + ",";
    out += (r.put_ci ? format_double(r.put_ci->second) : std::string()) + ",";
    out += opt(r.call_iv) + ",";
    out += (r.call_ci ? format_double(r.call_ci->first) : std::string()) + ",";
    out += (r.call_ci ? format_double(r.call_ci->second) : std::string()) + ",";
    out += std::to_string(r.n_effective) + "\n";
  }
  return out;
}

}  // namespace sigvol
