#include "sigvol/diagnostics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "sigvol/rng.hpp"

namespace sigvol {

namespace {

int sign_of(double v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

}  // namespace

std::string to_string(MartingaleReason reason) {
  switch (reason) {
    case MartingaleReason::rho_zero: return "rho_zero";
    case MartingaleReason::order_one: return "order_one";
    case MartingaleReason::odd_and_nonpositive: return "odd_and_nonpositive";
    case MartingaleReason::even_order: return "even_order";
    case MartingaleReason::positive_product: return "positive_product";
  }
  return "unknown";
}

MartingaleVerdict martingality_predicate(const ModelParams& params) {
  params.validate();
  Rational leading = params.leading_coefficient();
  if (leading == 0)
    throw std::invalid_argument(
        "theorem hypothesis violated: leading coefficient sigma^{2^N} vanishes");

  MartingaleVerdict v;
  if (params.order <= 1) {
    v.predicted_martingale = true;
    v.reason = MartingaleReason::order_one;
    return v;
  }
  if (!params.multid() && params.rho == 0.0) {
    v.predicted_martingale = true;
    v.reason = MartingaleReason::rho_zero;
    return v;
  }
  // N >= 2: martingale iff N odd and the signed product is <= 0.
  int product_sign = params.multid() ? (leading < 0 ? -1 : 1)
                                     : sign_of(params.rho) * (leading < 0 ? -1 : 1);
  if (params.order % 2 == 0) {
    v.predicted_martingale = false;
    v.reason = MartingaleReason::even_order;
  } else if (product_sign <= 0) {
    v.predicted_martingale = true;
    v.reason = MartingaleReason::odd_and_nonpositive;
  } else {
    v.predicted_martingale = false;
    v.reason = MartingaleReason::positive_product;
  }
  return v;
}

GapEstimate martingale_gap(std::span<const PriceSample> samples, double s0, double confidence) {
  std::vector<double> prices;
  prices.reserve(samples.size());
  long long invalid = 0;
  for (const auto& s : samples) {
    if (s.valid)
      prices.push_back(s.terminal_price);
    else
      ++invalid;
  }
  if (prices.empty()) throw std::invalid_argument("martingale_gap: no valid samples");
  MeanCi mc = mean_ci(prices, confidence);
  GapEstimate out;
  out.gap = s0 - mc.mean;
  out.ci = {s0 - mc.ci.second, s0 - mc.ci.first};
  out.n_valid = mc.n;
  out.n_invalid = invalid;
  return out;
}

MartingaleVerdict assess_martingality(const ModelParams& params,
                                      std::span<const PriceSample> samples, double confidence) {
  MartingaleVerdict v = martingality_predicate(params);
  GapEstimate gap = martingale_gap(samples, params.s0, confidence);
  v.has_measurement = true;
  v.measured_gap = gap.gap;
  v.gap_ci = gap.ci;
  bool gap_ci_contains_zero = gap.ci.first <= 0.0 && 0.0 <= gap.ci.second;
  v.consistent = v.predicted_martingale == gap_ci_contains_zero;
  return v;
}

std::string to_string(MomentRegime regime) {
  switch (regime) {
    case MomentRegime::finite: return "finite";
    case MomentRegime::infinite: return "infinite";
    case MomentRegime::critical: return "critical";
  }
  return "unknown";
}

MomentVerdict moment_predicate(double rho, double m) {
  if (!(m > 0)) throw std::invalid_argument("moment order m must be > 0");
  if (std::abs(rho) > 1) throw std::invalid_argument("|rho| must be <= 1");
  MomentVerdict v;
  v.m = m;
  if (m <= 1) {
    v.threshold = 0.0;
    v.regime = MomentRegime::finite;
    v.note = "m <= 1: moments of a nonnegative supermartingale are trivially finite";
    return v;
  }
  double thr2 = 1.0 - 1.0 / m;
  v.threshold = std::sqrt(thr2);
  double r2 = rho * rho;
  // |rho| = sqrt(1 - 1/m) up to floating rounding counts as critical.
  double tol = 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, thr2);
  if (std::abs(r2 - thr2) <= tol)
    v.regime = MomentRegime::critical;
  else if (r2 > thr2)
    v.regime = MomentRegime::finite;
  else
    v.regime = MomentRegime::infinite;
  return v;
}

MomentEstimate moment_estimate(std::span<const PriceSample> samples, double m) {
  if (!(m > 0)) throw std::invalid_argument("moment order m must be > 0");
  MomentEstimate out;
  double sum = 0.0, max_term = 0.0;
  for (const auto& s : samples) {
    if (!s.valid) continue;
    double term = std::pow(s.terminal_price, m);
    ++out.n;
    sum += term;
    max_term = std::max(max_term, term);
  }
  if (out.n == 0) throw std::invalid_argument("moment_estimate: no valid samples");
  if (!std::isfinite(sum)) {
    out.diverging = true;
    out.estimate = std::numeric_limits<double>::infinity();
    out.tail_share = 1.0;
    return out;
  }
  out.estimate = sum / out.n;
  out.tail_share = sum > 0 ? max_term / sum : 0.0;
  return out;
}

int spot_vol_correlation_sign(const ModelParams& params, const TruncSig& sig_state) {
  if (params.multid())
    throw std::invalid_argument("spot-vol correlation sign applies to the one-dimensional model");
  TensorPoly projected = right_deconcat_by_letter(params.sigma, 2);
  double value = bracket(projected, sig_state);
  return sign_of(params.rho) * sign_of(value);
}

ControlShape ControlShape::sine(double T) {
  if (!(T > 0)) throw std::invalid_argument("control horizon must be > 0");
  ControlShape s;
  s.T = T;
  const double w = std::numbers::pi / T;
  s.psi = [w](double t) { return std::sin(w * t); };
  s.dpsi = [w](double t) { return w * std::cos(w * t); };
  s.int_psi2 = T / 2;
  s.int_dpsi2 = std::numbers::pi * std::numbers::pi / (2 * T);
  s.int_psi3 = 4 * T / (3 * std::numbers::pi);
  s.int_t2_dpsi = -T * T / std::numbers::pi;
  return s;
}

ControlShape ControlShape::from_functions(double T, std::function<double(double)> psi,
                                          std::function<double(double)> dpsi) {
  if (!(T > 0)) throw std::invalid_argument("control horizon must be > 0");
  ControlShape s;
  s.T = T;
  s.psi = std::move(psi);
  s.dpsi = std::move(dpsi);
  if (std::abs(s.psi(0.0)) > 1e-9 || std::abs(s.psi(T)) > 1e-9)
    throw std::invalid_argument("control shape must satisfy psi(0) = psi(T) = 0");
  auto simpson = [T](const std::function<double(double)>& f) {
    const int n = 200000;  // even
    const double h = T / n;
    double acc = f(0.0) + f(T);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  s.int_psi2 = simpson([&](double t) { return s.psi(t) * s.psi(t); });
  s.int_dpsi2 = simpson([&](double t) { return s.dpsi(t) * s.dpsi(t); });
  s.int_psi3 = simpson([&](double t) { return std::pow(s.psi(t), 3); });
  s.int_t2_dpsi = simpson([&](double t) { return 0.5 * t * t * s.dpsi(t); });
  return s;
}

double critical_kappa(double m) {
  if (!(m > 1)) throw std::invalid_argument("critical case requires m > 1");
  return std::sqrt(m * m - m);
}

double critical_rho(double m) {
  if (!(m > 1)) throw std::invalid_argument("critical case requires m > 1");
  return -std::sqrt(1.0 - 1.0 / m);
}

double critical_t_star(double alpha, double m) {
  if (!(alpha > 0)) throw std::invalid_argument("t_star requires alpha > 0");
  return std::sqrt(2 * std::numbers::pi * std::numbers::pi / (alpha * critical_kappa(m)));
}

void CriticalParams::validate() const {
  if (!(m > 1)) throw std::invalid_argument("critical case requires m > 1");
  if (!(T > 0)) throw std::invalid_argument("critical case requires T > 0");
  if (!(alpha > 0)) throw std::invalid_argument("critical case requires alpha > 0");
  if (rho) {
    double expected = critical_rho(m);
    if (std::abs(*rho - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
      throw std::invalid_argument(
          "correlation is not critical (expected rho = -sqrt(1 - 1/m)); "
          "use moment_predicate for non-critical correlations");
  }
}

double critical_case_functional_analytic(const CriticalParams& p, double lambda,
                                         const ControlShape& shape) {
  p.validate();
  const double kappa = critical_kappa(p.m);
  // Gaussian expectations: E[B_T^4] = 3 T^2 and int E[B_t^2] dt = T^2/2 make
  // the constant term vanish; cross terms are odd in B.
  const double c2 = (p.alpha * kappa / 4.0) * shape.int_psi2 - 0.5 * shape.int_dpsi2;
  const double c1 = -(p.beta * kappa / 2.0) * shape.int_t2_dpsi;
  const double c3 = (p.beta * kappa / 2.0) * shape.int_psi3;
  return c1 * lambda + c2 * lambda * lambda + c3 * lambda * lambda * lambda;
}

MeanCi critical_case_functional_mc(const CriticalParams& p, double lambda,
                                   const ControlShape& shape, const SimConfig& config) {
  p.validate();
  config.validate();
  const double kappa = critical_kappa(p.m);
  const double T = p.T;
  const int total = config.total_steps(T);
  const double dt = T / total;
  const double sqdt = std::sqrt(dt);

  std::vector<double> u_vals(total + 1), du(total);
  for (int i = 0; i <= total; ++i) u_vals[i] = lambda * shape.psi(std::min(T, i * dt));
  for (int i = 0; i < total; ++i) du[i] = u_vals[i + 1] - u_vals[i];

  std::vector<double> f_vals(config.n_paths);
  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<long long>(workers) > config.n_paths)
    workers = static_cast<int>(config.n_paths);

  auto run = [&](long long lo, long long hi) {
    for (long long path = lo; path < hi; ++path) {
      std::mt19937_64 gen(path_seed(config.seed, path));
      std::normal_distribution<double> normal(0.0, 1.0);
      double b = 0.0;
      double sq_prev = u_vals[0] * u_vals[0];  // (B_0 + U_0)^2
      double i2 = 0.0;                         // int (B + U)^2, trapezoid
      double q = 0.0;                          // running int_0^t (B + U)^2
      double term4 = 0.0;                      // int Q dU, trapezoid in U
      for (int i = 0; i < total; ++i) {
        double b_next = b + sqdt * normal(gen);
        double y = b_next + u_vals[i + 1];
        double sq_next = y * y;
        double q_next = q + 0.5 * (sq_prev + sq_next) * dt;
        term4 += 0.5 * (q + q_next) * du[i];
        i2 = q_next;
        q = q_next;
        sq_prev = sq_next;
        b = b_next;
      }
      double tail = b + u_vals[total];
      f_vals[path] = -(p.alpha * kappa / 24.0) * tail * tail * tail * tail +
                     (p.alpha * kappa / 4.0) * i2 - (p.beta * kappa / 2.0) * term4;
    }
  };
  if (workers <= 1) {
    run(0, config.n_paths);
  } else {
    std::vector<std::thread> pool;
    long long chunk = (config.n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long long lo = w * chunk, hi = std::min<long long>(config.n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  MeanCi mc = mean_ci(f_vals);
  const double deterministic = -0.5 * lambda * lambda * shape.int_dpsi2;
  mc.mean += deterministic;
  mc.ci.first += deterministic;
  mc.ci.second += deterministic;
  return mc;
}

std::string to_string(CriticalVerdictKind kind) {
  switch (kind) {
    case CriticalVerdictKind::finite: return "finite";
    case CriticalVerdictKind::infinite_quadratic: return "infinite_quadratic";
    case CriticalVerdictKind::infinite_cubic: return "infinite_cubic";
    case CriticalVerdictKind::critical_undetermined: return "critical_undetermined";
  }
  return "unknown";
}

namespace {

// Solves the 4x4 normal equations of the cubic fit by Gaussian elimination.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (std::abs(a[col][col]) < 1e-300) throw std::invalid_argument("degenerate lambda grid");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

CriticalCaseReport critical_case_report(const CriticalParams& p,
                                        std::span<const double> lambda_grid,
                                        const ControlShape& shape, bool analytic,
                                        const SimConfig& config) {
  p.validate();
  if (lambda_grid.size() < 4)
    throw std::invalid_argument("lambda grid too small to fit a cubic (need >= 4 points)");

  CriticalCaseReport report;
  report.params = p;
  report.kappa = critical_kappa(p.m);
  report.t_star = critical_t_star(p.alpha, p.m);
  report.analytic = analytic;
  report.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());

  for (double lambda : lambda_grid) {
    if (analytic) {
      report.j_values.push_back(critical_case_functional_analytic(p, lambda, shape));
      report.j_stderr.push_back(0.0);
    } else {
      MeanCi mc = critical_case_functional_mc(p, lambda, shape, config);
      report.j_values.push_back(mc.mean);
      report.j_stderr.push_back(mc.stderr_);
    }
  }

  // Ordinary least squares for J ~ c0 + c1 l + c2 l^2 + c3 l^3.
  std::array<std::array<double, 4>, 4> xtx{};
  std::array<double, 4> xty{};
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    double powers[4] = {1.0, lambda_grid[i], 0.0, 0.0};
    powers[2] = powers[1] * powers[1];
    powers[3] = powers[2] * powers[1];
    for (int r = 0; r < 4; ++r) {
      xty[r] += powers[r] * report.j_values[i];
      for (int c = 0; c < 4; ++c) xtx[r][c] += powers[r] * powers[c];
    }
  }
  auto coeffs = solve4(xtx, xty);
  report.quadratic_coeff = coeffs[2];
  report.cubic_coeff = coeffs[3];

  // Propagate per-point standard errors: cov = (X'X)^-1 X' D X (X'X)^-1.
  if (!analytic) {
    std::array<std::array<double, 4>, 4> inv{};
    for (int col = 0; col < 4; ++col) {
      std::array<double, 4> e{};
      e[col] = 1.0;
      auto column = solve4(xtx, e);
      for (int r = 0; r < 4; ++r) inv[r][col] = column[r];
    }
    double var2 = 0.0, var3 = 0.0;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      double powers[4] = {1.0, lambda_grid[i], lambda_grid[i] * lambda_grid[i], 0.0};
      powers[3] = powers[2] * powers[1];
      double w2 = 0.0, w3 = 0.0;
      for (int c = 0; c < 4; ++c) {
        w2 += inv[2][c] * powers[c];
        w3 += inv[3][c] * powers[c];
      }
      var2 += w2 * w2 * report.j_stderr[i] * report.j_stderr[i];
      var3 += w3 * w3 * report.j_stderr[i] * report.j_stderr[i];
    }
    report.quadratic_se = std::sqrt(var2);
    report.cubic_se = std::sqrt(var3);
  }

  const double scale = std::max(1.0, p.alpha * report.kappa * p.T);
  if (p.beta == 0.0) {
    double c2 = report.quadratic_coeff;
    if (analytic) {
      if (std::abs(c2) <= 1e-12 * scale) {
        report.verdict = CriticalVerdictKind::critical_undetermined;
        report.note = "T is at the boundary T^2 = 2 pi^2 / (alpha kappa)";
      } else {
        report.verdict =
            c2 < 0 ? CriticalVerdictKind::finite : CriticalVerdictKind::infinite_quadratic;
      }
    } else {
      if (c2 + 2 * report.quadratic_se < 0)
        report.verdict = CriticalVerdictKind::finite;
      else if (c2 - 2 * report.quadratic_se > 0)
        report.verdict = CriticalVerdictKind::infinite_quadratic;
      else {
        report.verdict = CriticalVerdictKind::critical_undetermined;
        report.note = "quadratic coefficient not statistically resolved";
      }
    }
  } else {
    double c3 = report.cubic_coeff;
    bool significant = analytic ? std::abs(c3) > 1e-12 * scale
                                : std::abs(c3) > 2 * report.cubic_se;
    if (significant) {
      report.verdict = CriticalVerdictKind::infinite_cubic;
    } else {
      report.verdict = CriticalVerdictKind::critical_undetermined;
      report.note = "cubic coefficient not statistically resolved";
    }
  }
  return report;
}

}  // namespace sigvol
