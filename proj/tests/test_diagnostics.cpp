#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sigvol/diagnostics.hpp"
#include "sigvol/engine.hpp"
#include "sigvol/path.hpp"

using namespace sigvol;

namespace {

Word W(const char* s) { return Word::parse(s); }

ModelParams model(int alphabet_dim, TensorPoly sigma, double rho) {
  ModelParams p;
  p.alphabet_dim = alphabet_dim;
  p.sigma = std::move(sigma);
  p.order = p.sigma.max_order();
  p.rho = rho;
  return p;
}

ModelParams leading_model(int order, double rho, double leading = 1.0) {
  TensorPoly sigma(2);
  sigma.add_term(Word::repeated(2, order), Rational(leading));
  return model(2, std::move(sigma), rho);
}

}  // namespace

TEST_CASE("martingality predicate case split") {
  auto v1 = martingality_predicate(leading_model(5, -0.9));
  CHECK(v1.predicted_martingale);
  CHECK(v1.reason == MartingaleReason::odd_and_nonpositive);

  auto v2 = martingality_predicate(leading_model(4, -0.9));
  CHECK_FALSE(v2.predicted_martingale);
  CHECK(v2.reason == MartingaleReason::even_order);

  auto v3 = martingality_predicate(leading_model(4, 0.0));
  CHECK(v3.predicted_martingale);
  CHECK(v3.reason == MartingaleReason::rho_zero);

  auto v4 = martingality_predicate(leading_model(1, 0.9));
  CHECK(v4.predicted_martingale);
  CHECK(v4.reason == MartingaleReason::order_one);

  auto v5 = martingality_predicate(leading_model(5, 0.9));
  CHECK_FALSE(v5.predicted_martingale);
  CHECK(v5.reason == MartingaleReason::positive_product);

  // rho sigma^{2^N} <= 0 via a negative leading coefficient.
  auto v6 = martingality_predicate(leading_model(5, 0.9, -2.0));
  CHECK(v6.predicted_martingale);

  // Vanishing leading coefficient violates the theorem hypothesis.
  TensorPoly no_lead(2);
  no_lead.add_term(W("21"), 1);
  CHECK_THROWS_WITH_AS(martingality_predicate(model(2, no_lead, 0.5)),
                       doctest::Contains("hypothesis"), std::invalid_argument);
}

TEST_CASE("martingality predicate, multidimensional model") {
  TensorPoly sigma(3);
  sigma.add_term(W("222"), Rational(-1));
  auto v = martingality_predicate(model(3, sigma, 0.0));
  CHECK(v.predicted_martingale);
  CHECK(v.reason == MartingaleReason::odd_and_nonpositive);

  TensorPoly sigma2(3);
  sigma2.add_term(W("222"), Rational(1));
  auto v2 = martingality_predicate(model(3, sigma2, 0.0));
  CHECK_FALSE(v2.predicted_martingale);
  CHECK(v2.reason == MartingaleReason::positive_product);

  TensorPoly sigma3(3);
  sigma3.add_term(W("2222"), Rational(-1));
  auto v3 = martingality_predicate(model(3, sigma3, 0.0));
  CHECK_FALSE(v3.predicted_martingale);
  CHECK(v3.reason == MartingaleReason::even_order);
}

TEST_CASE("predicate is invariant under flipping both rho and the leading sign") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> ur(-1.0, 1.0);
  std::uniform_int_distribution<int> uo(2, 6);
  for (int i = 0; i < 40; ++i) {
    double rho = ur(gen);
    double lead = ur(gen) * 3;
    if (rho == 0 || lead == 0) continue;
    int order = uo(gen);
    auto a = martingality_predicate(leading_model(order, rho, lead));
    auto b = martingality_predicate(leading_model(order, -rho, -lead));
    CHECK(a.predicted_martingale == b.predicted_martingale);
  }
}

TEST_CASE("martingale gap and verdict consistency") {
  std::vector<PriceSample> flat(100);
  for (auto& s : flat) {
    s.terminal_price = 1.0;
    s.valid = true;
  }
  auto gap = martingale_gap(flat, 1.0);
  CHECK(gap.gap == 0.0);
  CHECK(gap.ci.first == 0.0);
  CHECK(gap.ci.second == 0.0);

  // Constant vol: CI contains zero and the prediction agrees.
  ModelParams params = leading_model(0, -0.5, 0.2);
  SimConfig config;
  config.n_paths = 5000;
  config.n_steps = 25;
  config.seed = 12;
  auto samples = simulate_price_paths(params, config);
  auto verdict = assess_martingality(params, samples);
  CHECK(verdict.predicted_martingale);
  CHECK(verdict.has_measurement);
  CHECK(verdict.consistent);
  CHECK(verdict.gap_ci.first <= 0.0);
  CHECK(0.0 <= verdict.gap_ci.second);
}

TEST_CASE("moment predicate thresholds") {
  auto a = moment_predicate(-0.8, 2.0);
  CHECK(a.regime == MomentRegime::finite);
  CHECK(a.threshold == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  auto b = moment_predicate(-0.7, 3.0);
  CHECK(b.regime == MomentRegime::infinite);
  CHECK(b.threshold == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-15));

  for (double m : {2.0, 3.0, 5.0}) {
    double threshold = std::sqrt(1.0 - 1.0 / m);
    CHECK(moment_predicate(-threshold, m).regime == MomentRegime::critical);
    CHECK(moment_predicate(threshold, m).regime == MomentRegime::critical);
    CHECK(moment_predicate(-threshold * (1 + 1e-9), m).regime == MomentRegime::finite);
    CHECK(moment_predicate(-threshold * (1 - 1e-9), m).regime == MomentRegime::infinite);
    CHECK(moment_predicate(0.0, m).regime == MomentRegime::infinite);
    CHECK(moment_predicate(-1.0, m).regime == MomentRegime::finite);
    // The stated threshold value, cross-checked in exact arithmetic:
    // threshold^2 m = m - 1 up to double rounding.
    Rational lhs = Rational(threshold) * Rational(threshold) * Rational(m);
    Rational rhs = Rational(m) - 1;
    CHECK(std::abs(to_double(lhs - rhs)) < 1e-15 * m);
  }

  auto small = moment_predicate(-0.5, 0.7);
  CHECK(small.regime == MomentRegime::finite);
  CHECK_FALSE(small.note.empty());
  CHECK_THROWS(moment_predicate(-0.5, 0.0));
  CHECK_THROWS(moment_predicate(-1.5, 2.0));
}

TEST_CASE("moment estimation") {
  std::vector<PriceSample> flat(50);
  for (auto& s : flat) {
    s.terminal_price = 2.0;
    s.valid = true;
  }
  auto est = moment_estimate(flat, 3.0);
  CHECK(est.estimate == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(est.tail_share == doctest::Approx(1.0 / 50).epsilon(1e-12));
  CHECK_FALSE(est.diverging);

  // Lognormal second moment: s0^2 exp(c^2 T).
  ModelParams params = leading_model(0, 0.0, 0.2);
  SimConfig config;
  config.n_paths = 30000;
  config.n_steps = 25;
  config.seed = 13;
  auto samples = simulate_price_paths(params, config);
  std::vector<double> squares;
  for (const auto& s : samples) squares.push_back(s.terminal_price * s.terminal_price);
  auto mc = mean_ci(squares);
  auto est2 = moment_estimate(samples, 2.0);
  CHECK(est2.estimate == doctest::Approx(mc.mean).epsilon(1e-12));
  CHECK(std::abs(est2.estimate - std::exp(0.04)) <= 4 * mc.stderr_);

  std::vector<PriceSample> huge(4);
  for (auto& s : huge) {
    s.terminal_price = 1e300;
    s.valid = true;
  }
  auto div = moment_estimate(huge, 2.0);
  CHECK(div.diverging);
  CHECK(std::isinf(div.estimate));
  CHECK(div.tail_share == 1.0);
}

TEST_CASE("spot-vol correlation sign") {
  // sigma = 22: sigma{2} = 2, so the sign is rho * sign(W_t).
  PathSample up;
  up.dim = 2;
  up.times = {0.0, 1.0};
  up.coords = {0.0, 0.0, 1.0, 2.0};
  TruncSig sig_up = path_signature(up, 2);

  ModelParams params = model(2, TensorPoly::monomial(2, W("22")), -0.9);
  CHECK(spot_vol_correlation_sign(params, sig_up) == -1);
  params.rho = 0.9;
  CHECK(spot_vol_correlation_sign(params, sig_up) == 1);

  // sigma{2} = -1 (empty word): sign is -sign(rho).
  ModelParams neg = model(2, TensorPoly::monomial(2, W("2"), -1), 0.9);
  CHECK(spot_vol_correlation_sign(neg, sig_up) == -1);

  // Zero bracket reports sign 0.
  PathSample flat;
  flat.dim = 2;
  flat.times = {0.0, 1.0};
  flat.coords = {0.0, 0.0, 1.0, 0.0};
  TruncSig sig_flat = path_signature(flat, 2);
  CHECK(spot_vol_correlation_sign(params, sig_flat) == 0);
}

TEST_CASE("critical-case analytic functional") {
  CriticalParams p{1.0, 0.0, 2.0, 1.0, std::nullopt};
  auto shape = ControlShape::sine(1.0);
  const double kappa = std::sqrt(2.0);
  CHECK(critical_kappa(2.0) == doctest::Approx(kappa).epsilon(1e-15));
  CHECK(critical_rho(2.0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
  CHECK(critical_t_star(1.0, 2.0) == doctest::Approx(3.7360043360892609).epsilon(1e-14));

  CHECK(critical_case_functional_analytic(p, 0.0, shape) == 0.0);
  const double coeff = kappa / 8 - std::numbers::pi * std::numbers::pi / 4;
  CHECK(coeff == doctest::Approx(-2.2906244049757028).epsilon(1e-14));
  for (double lambda : {1.0, -1.0, 2.5}) {
    CHECK(critical_case_functional_analytic(p, lambda, shape) ==
          doctest::Approx(coeff * lambda * lambda).epsilon(1e-12));
  }

  // Quadrature-backed shapes agree with the closed-form sine integrals.
  auto numeric = ControlShape::from_functions(
      1.0, [](double t) { return std::sin(std::numbers::pi * t); },
      [](double t) { return std::numbers::pi * std::cos(std::numbers::pi * t); });
  CHECK(numeric.int_psi2 == doctest::Approx(shape.int_psi2).epsilon(1e-10));
  CHECK(numeric.int_dpsi2 == doctest::Approx(shape.int_dpsi2).epsilon(1e-10));
  CHECK(numeric.int_psi3 == doctest::Approx(shape.int_psi3).epsilon(1e-10));
  CHECK(numeric.int_t2_dpsi == doctest::Approx(shape.int_t2_dpsi).epsilon(1e-10));

  // The correlation echo must be critical when present.
  CriticalParams bad{1.0, 0.0, 2.0, 1.0, -0.5};
  CHECK_THROWS_WITH_AS(critical_case_functional_analytic(bad, 1.0, shape),
                       doctest::Contains("moment_predicate"), std::invalid_argument);
  CriticalParams good{1.0, 0.0, 2.0, 1.0, critical_rho(2.0)};
  CHECK(critical_case_functional_analytic(good, 1.0, shape) ==
        doctest::Approx(coeff).epsilon(1e-12));
}

TEST_CASE("critical-case Monte Carlo agrees with the analytic values") {
  CriticalParams p{1.0, 0.0, 2.0, 1.0, std::nullopt};
  auto shape = ControlShape::sine(1.0);
  SimConfig config;
  config.n_paths = 20000;
  config.n_steps = 200;
  config.seed = 21;
  for (double lambda : {0.0, 1.0, -1.0, 3.0}) {
    auto mc = critical_case_functional_mc(p, lambda, shape, config);
    double exact = critical_case_functional_analytic(p, lambda, shape);
    CHECK(std::abs(mc.mean - exact) <= 4 * mc.stderr_ + 2e-3);
  }
}

TEST_CASE("critical-case report classification") {
  auto shape = ControlShape::sine(1.0);
  SimConfig config;  // unused in analytic mode
  std::vector<double> grid{-3, -2, -1, 0, 1, 2, 3};

  CriticalParams finite_case{1.0, 0.0, 2.0, 1.0, std::nullopt};
  auto r1 = critical_case_report(finite_case, grid, shape, true, config);
  CHECK(r1.verdict == CriticalVerdictKind::finite);
  CHECK(r1.t_star == doctest::Approx(3.7360043360892609).epsilon(1e-14));
  CHECK(r1.quadratic_coeff == doctest::Approx(-2.2906244049757028).epsilon(1e-10));
  CHECK(std::abs(r1.cubic_coeff) < 1e-10);

  CriticalParams infinite_case{1.0, 0.0, 2.0, 5.0, std::nullopt};
  auto shape5 = ControlShape::sine(5.0);
  auto r2 = critical_case_report(infinite_case, grid, shape5, true, config);
  CHECK(r2.verdict == CriticalVerdictKind::infinite_quadratic);
  CHECK(r2.quadratic_coeff > 0);

  // Exactly at the boundary the sign is unresolved.
  double t_star = critical_t_star(1.0, 2.0);
  CriticalParams boundary{1.0, 0.0, 2.0, t_star, std::nullopt};
  auto r3 = critical_case_report(boundary, grid, ControlShape::sine(t_star), true, config);
  CHECK(r3.verdict == CriticalVerdictKind::critical_undetermined);

  CriticalParams cubic_case{1.0, 0.3, 2.0, 1.0, std::nullopt};
  auto r4 = critical_case_report(cubic_case, grid, shape, true, config);
  CHECK(r4.verdict == CriticalVerdictKind::infinite_cubic);
  // lambda^3 coefficient: (beta kappa / 2) int psi^3 = beta kappa 2T/(3 pi).
  CHECK(r4.cubic_coeff ==
        doctest::Approx(0.3 * std::sqrt(2.0) * 2 / (3 * std::numbers::pi)).epsilon(1e-10));

  std::vector<double> tiny{-1, 0, 1};
  CHECK_THROWS(critical_case_report(finite_case, tiny, shape, true, config));
}
