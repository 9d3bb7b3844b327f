#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sigvol/black_scholes.hpp"
#include "sigvol/diagnostics.hpp"
#include "sigvol/engine.hpp"
#include "sigvol/stats.hpp"

using namespace sigvol;

namespace {

Word W(const char* s) { return Word::parse(s); }

ModelParams one_d_model(TensorPoly sigma, double rho, double s0 = 1.0, double T = 1.0) {
  ModelParams p;
  p.alphabet_dim = 2;
  p.sigma = std::move(sigma);
  p.order = p.sigma.max_order();
  p.rho = rho;
  p.s0 = s0;
  p.horizon = T;
  return p;
}

}  // namespace

TEST_CASE("driver generation") {
  auto d = gen_drivers(1.0, 1.0, 1000, 42);
  for (int i = 0; i < 1000; ++i) CHECK(d.dw[i] == d.db[i]);

  auto again = gen_drivers(1.0, 1.0, 1000, 42);
  CHECK(again.db == d.db);

  auto flipped = gen_drivers(1.0, 1.0, 1000, 42, true);
  for (int i = 0; i < 1000; ++i) CHECK(flipped.db[i] == -d.db[i]);

  for (double rho : {0.0, -0.9}) {
    const int n = 400000;
    auto drv = gen_drivers(rho, 1.0, n, 7);
    double sbb = 0, sww = 0, sbw = 0;
    for (int i = 0; i < n; ++i) {
      sbb += drv.db[i] * drv.db[i];
      sww += drv.dw[i] * drv.dw[i];
      sbw += drv.db[i] * drv.dw[i];
    }
    double corr = sbw / std::sqrt(sbb * sww);
    CHECK(std::abs(corr - rho) < 4.0 / std::sqrt(static_cast<double>(n)));
  }
  CHECK_THROWS(gen_drivers(1.5, 1.0, 10, 0));
}

TEST_CASE("zero volatility freezes the price") {
  ModelParams params = one_d_model(TensorPoly::zero(2), 0.5, 2.5);
  SimConfig config;
  config.n_paths = 50;
  config.n_steps = 20;
  config.seed = 1;
  auto samples = simulate_price_paths(params, config);
  for (const auto& s : samples) {
    CHECK(s.valid);
    CHECK(s.terminal_price == 2.5);
    CHECK(s.realized_variance == 0.0);
  }
}

TEST_CASE("constant volatility is lognormal") {
  ModelParams params = one_d_model(TensorPoly::monomial(2, W(""), Rational(1, 5)), -0.3);
  SimConfig config;
  config.n_paths = 20000;
  config.n_steps = 50;
  config.seed = 2;
  auto samples = simulate_price_paths(params, config);
  std::vector<double> prices;
  for (const auto& s : samples) {
    REQUIRE(s.valid);
    prices.push_back(s.terminal_price);
    CHECK(s.realized_variance == doctest::Approx(0.04).epsilon(1e-12));
  }
  auto mc = mean_ci(prices);
  CHECK(mc.ci.first <= 1.0);
  CHECK(1.0 <= mc.ci.second);
}

TEST_CASE("expected integrated variance closed forms") {
  // sigma = c: c^2 T.
  ModelParams flat = one_d_model(TensorPoly::monomial(2, W(""), Rational(1, 5)), 0.0, 1.0, 2.0);
  CHECK(expected_integrated_variance(flat) == doctest::Approx(0.04 * 2.0).epsilon(1e-13));

  // sigma = 2 (vol = W_t): int E[W^2] dt = T^2/2.
  ModelParams lin = one_d_model(TensorPoly::monomial(2, W("2")), 0.0, 1.0, 1.5);
  CHECK(expected_integrated_variance(lin) == doctest::Approx(1.5 * 1.5 / 2).epsilon(1e-13));

  // sigma = 22 (vol = W^2/2): int 3t^2/4 dt = T^3/4.
  ModelParams quad = one_d_model(TensorPoly::monomial(2, W("22")), 0.0, 1.0, 1.2);
  CHECK(expected_integrated_variance(quad) == doctest::Approx(std::pow(1.2, 3) / 4).epsilon(1e-13));
}

TEST_CASE("realized variance tracks its expectation") {
  TensorPoly sigma(2);
  sigma.add_term(W(""), Rational(1, 10));
  sigma.add_term(W("2"), Rational(2, 5));
  sigma.add_term(W("21"), Rational(-1, 4));
  sigma.add_term(W("222"), Rational(1, 2));
  ModelParams params = one_d_model(std::move(sigma), -0.5);
  SimConfig config;
  config.n_paths = 6000;
  config.n_steps = 200;
  config.seed = 3;
  auto samples = simulate_price_paths(params, config);
  std::vector<double> rv;
  for (const auto& s : samples) rv.push_back(s.realized_variance);
  auto mc = mean_ci(rv);
  double expected = expected_integrated_variance(params);
  CHECK(std::abs(mc.mean - expected) <= 4 * mc.stderr_);
}

TEST_CASE("supermartingale bound on the price mean") {
  // Strict local martingale regime: the sample mean never exceeds s0 by more
  // than statistical error.
  TensorPoly sigma = sample_sigma_coefficients(2, 4, 1.0, 11);
  ModelParams params = one_d_model(std::move(sigma), 0.9);
  SimConfig config;
  config.n_paths = 4000;
  config.n_steps = 100;
  config.seed = 4;
  auto samples = simulate_price_paths(params, config);
  std::vector<double> prices;
  for (const auto& s : samples)
    if (s.valid) prices.push_back(s.terminal_price);
  auto mc = mean_ci(prices);
  CHECK(mc.mean <= params.s0 + 4 * mc.stderr_);
}

TEST_CASE("results are independent of the worker count and antithetic pairs share seeds") {
  TensorPoly sigma = sample_sigma_coefficients(2, 3, 1.0, 5);
  ModelParams params = one_d_model(std::move(sigma), -0.7);
  SimConfig base;
  base.n_paths = 300;
  base.n_steps = 40;
  base.seed = 77;
  base.workers = 1;
  auto one = simulate_price_paths(params, base);
  base.workers = 2;
  auto two = simulate_price_paths(params, base);
  base.workers = 3;
  auto three = simulate_price_paths(params, base);
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].terminal_price == two[i].terminal_price);
    CHECK(one[i].realized_variance == three[i].realized_variance);
    CHECK(one[i].path_seed == two[i].path_seed);
  }

  base.antithetic = true;
  auto anti = simulate_price_paths(params, base);
  CHECK(anti[0].path_seed == anti[1].path_seed);
  CHECK(anti[2].path_seed == anti[3].path_seed);
  CHECK(anti[0].terminal_price != anti[1].terminal_price);

  // Drift SDE shares the determinism contract.
  SimConfig ex = base;
  ex.antithetic = false;
  ex.workers = 1;
  std::vector<double> terminals1, terminals2;
  auto s1 = simulate_drift_sde(params, ex, &terminals1);
  ex.workers = 3;
  auto s2 = simulate_drift_sde(params, ex, &terminals2);
  CHECK(s1.n_exploded == s2.n_exploded);
  CHECK(terminals1 == terminals2);
}

TEST_CASE("drift-free SDE reduces to Brownian motion") {
  ModelParams params = one_d_model(TensorPoly::zero(2), 0.5);
  SimConfig config;
  config.n_paths = 10000;
  config.n_steps = 100;
  config.seed = 5;
  std::vector<double> terminal;
  auto stats = simulate_drift_sde(params, config, &terminal);
  CHECK(stats.n_exploded == 0);
  CHECK(stats.p_hat == 0.0);
  CHECK(std::isnan(stats.mean_exit_time));

  double d = oracles::ks_statistic(terminal, [](double x) { return norm_cdf(x); });
  CHECK(d < 1.628 / std::sqrt(10000.0));  // KS critical value at the 1% level
}

TEST_CASE("explosion criterion at reduced scale") {
  // sigma = 6 * 222 gives drift rho X^3.
  ModelParams params = one_d_model(TensorPoly::monomial(2, W("222"), 6), 0.5);
  SimConfig config;
  config.n_paths = 1500;
  config.n_steps = 100;
  config.seed = 6;
  config.x_cap = 1e3;
  auto hot = simulate_drift_sde(params, config);
  CHECK(hot.n_exploded > 0);
  CHECK(hot.ci95.first > 0.0);
  CHECK(hot.mean_exit_time > 0.0);
  CHECK(hot.mean_exit_time < 1.0);

  params.rho = -0.5;
  auto cold = simulate_drift_sde(params, config);
  CHECK(cold.n_exploded == 0);
  CHECK(cold.ci95.first == 0.0);
}

TEST_CASE("ODE blow-up closed forms") {
  CHECK(ode_blowup_time(1.0, 3, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  // Passage 2 -> 4 for xdot = x^3 (sigma/N! = 1): (1/2)(2^-2 - 4^-2) = 3/32.
  CHECK(ode_level_passage_time(6.0, 3, 2.0, 4.0) == doctest::Approx(3.0 / 32).epsilon(1e-14));
  // Blow-up time vanishes as x0 grows.
  CHECK(ode_blowup_time(1.0, 3, 1e8) < 1e-15);
  CHECK(ode_blowup_time(1.0, 3, 10.0) < ode_blowup_time(1.0, 3, 1.0));
  CHECK_THROWS(ode_blowup_time(1.0, 1, 1.0));
  CHECK_THROWS(ode_blowup_time(-1.0, 3, 1.0));

  std::mt19937 gen(51);
  std::uniform_real_distribution<double> uc(0.2, 4.0), ux(0.5, 3.0);
  std::uniform_int_distribution<int> un(2, 5);
  for (int i = 0; i < 5; ++i) {
    double c = uc(gen), x0 = ux(gen);
    int N = un(gen);
    double exact = ode_blowup_time(c, N, x0);
    double numeric = oracles::ode_blowup_time_rk4(c, N, x0);
    CHECK(std::abs(numeric - exact) <= 0.01 * exact);
  }
}

TEST_CASE("one-dimensional model embeds into the multidimensional one") {
  std::mt19937 gen(61);
  TensorPoly sigma = sample_sigma_coefficients(2, 3, 1.0, 21);
  const double rho = -0.6;
  TensorPoly embedded = embed_one_d_sigma(sigma, rho);
  CHECK(embedded.alphabet_dim() == 3);
  CHECK(to_double(embedded.coeff(W("222"))) ==
        doctest::Approx(std::pow(rho, 3) * to_double(sigma.coeff(W("222")))).epsilon(1e-12));

  // <sigma, sig(t, W)> == <embedded, sig(t, B, Bperp)> pathwise for
  // piecewise-linear paths, with W = rho B + rhobar Bperp.
  const double rhobar = std::sqrt(1 - rho * rho);
  PathSample yb = oracles::random_time_augmented_path(gen, 3, 8);
  PathSample xw;
  xw.dim = 2;
  xw.times = yb.times;
  for (std::size_t i = 0; i < yb.size(); ++i) {
    xw.coords.push_back(yb.point(i)[0]);
    xw.coords.push_back(rho * yb.point(i)[1] + rhobar * yb.point(i)[2]);
  }
  TruncSig sig_w = path_signature(xw, 3);
  TruncSig sig_y = path_signature(yb, 3);
  CHECK(bracket(sigma, sig_w) == doctest::Approx(bracket(embedded, sig_y)).epsilon(1e-11));
}

TEST_CASE("multidimensional price model") {
  // sigma supported on letters {1, 3}: the volatility is independent of the
  // price driver B, so the price is a martingale.
  TensorPoly sigma(3);
  sigma.add_term(W(""), Rational(1, 5));
  sigma.add_term(W("3"), Rational(1, 2));
  sigma.add_term(W("31"), Rational(-1, 4));
  ModelParams params;
  params.alphabet_dim = 3;
  params.sigma = sigma;
  params.order = 2;
  params.s0 = 1.0;
  params.horizon = 1.0;
  SimConfig config;
  config.n_paths = 8000;
  config.n_steps = 100;
  config.seed = 8;
  auto samples = simulate_price_paths_multid(params, config);
  auto gap = martingale_gap(samples, params.s0);
  CHECK(gap.ci.first <= 0.0);
  CHECK(0.0 <= gap.ci.second);

  // Realized variance matches the closed form in the multid alphabet too.
  std::vector<double> rv;
  for (const auto& s : samples) rv.push_back(s.realized_variance);
  auto mc = mean_ci(rv);
  CHECK(std::abs(mc.mean - expected_integrated_variance(params)) <= 4 * mc.stderr_);

  CHECK_THROWS(simulate_price_paths_multid(one_d_model(TensorPoly::zero(2), 0.0), config));
  CHECK_THROWS(simulate_price_paths(params, config));
}

TEST_CASE("invalid samples are excluded from aggregation but reported") {
  std::vector<PriceSample> samples(10);
  for (auto& s : samples) {
    s.terminal_price = 1.0;
    s.valid = true;
  }
  samples[3].valid = false;
  samples[3].terminal_price = std::numeric_limits<double>::quiet_NaN();
  auto gap = martingale_gap(samples, 1.0);
  CHECK(gap.n_valid == 9);
  CHECK(gap.n_invalid == 1);
  CHECK(gap.gap == 0.0);
}
