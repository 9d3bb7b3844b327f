#include "sigvol/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "sigvol/rng.hpp"
#include "sigvol/stats.hpp"
#include "sigvol/trunc_sig.hpp"

namespace sigvol {

namespace {

// Sub-step gain for the drift SDE near blow-up: dt_eff = min(dt, kKappa /
// (1 + |drift|)), so the deterministic move per sub-step stays below kKappa.
constexpr double kKappa = 0.1;

int resolve_workers(const SimConfig& config, long long n_paths) {
  int w = config.workers > 0 ? config.workers
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (static_cast<long long>(w) > n_paths) w = static_cast<int>(n_paths);
  return w;
}

void parallel_paths(long long n_paths, int workers, const std::function<void(long long, long long)>& fn) {
  if (workers <= 1) {
    fn(0, n_paths);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long long chunk = (n_paths + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long long lo = w * chunk, hi = std::min(n_paths, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// Correlated increment stream shared by gen_drivers and the price engine so
// the two are draw-for-draw identical.
struct PairStream {
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};
  double sqdt, rho, rhobar, sign;

  PairStream(std::uint64_t seed, double dt, double rho_, bool flip)
      : gen(seed), sqdt(std::sqrt(dt)), rho(rho_), rhobar(std::sqrt(1.0 - rho_ * rho_)),
        sign(flip ? -1.0 : 1.0) {}

  void next(double& db, double& dw) {
    double z1 = sign * normal(gen);
    double z2 = sign * normal(gen);
    db = sqdt * z1;
    dw = rho * db + rhobar * sqdt * z2;
  }
};

struct PathIdentity {
  std::uint64_t seed;
  bool flip;
};

PathIdentity path_identity(const SimConfig& config, long long index) {
  if (!config.antithetic) return {path_seed(config.seed, index), false};
  return {path_seed(config.seed, index / 2), index % 2 == 1};
}

}  // namespace

Drivers gen_drivers(double rho, double T, int n_steps, std::uint64_t seed, bool antithetic_flip) {
  if (std::abs(rho) > 1.0) throw std::invalid_argument("|rho| must be <= 1");
  if (n_steps < 1 || !(T > 0)) throw std::invalid_argument("need n_steps >= 1 and T > 0");
  Drivers out;
  out.dt = T / n_steps;
  out.db.resize(n_steps);
  out.dw.resize(n_steps);
  PairStream stream(seed, out.dt, rho, antithetic_flip);
  for (int i = 0; i < n_steps; ++i) stream.next(out.db[i], out.dw[i]);
  return out;
}

std::vector<PriceSample> simulate_price_paths(const ModelParams& params, const SimConfig& config) {
  params.validate();
  config.validate();
  if (params.multid())
    throw std::invalid_argument("simulate_price_paths requires the one-dimensional model");

  const int level = params.order;
  const int total = config.total_steps(params.horizon);
  const double dt = params.horizon / total;
  const CompiledPoly csigma(params.sigma, 2, level);

  std::vector<PriceSample> out(config.n_paths);
  auto run = [&](long long lo, long long hi) {
    TruncSig state(2, level), seg = TruncSig::zeros(2, level), scratch = TruncSig::zeros(2, level);
    double increment[2];
    for (long long p = lo; p < hi; ++p) {
      auto id = path_identity(config, p);
      PairStream stream(id.seed, dt, params.rho, id.flip);
      state = TruncSig::identity(2, level);
      // sigma enters the price increment at the left endpoint (the Itô
      // choice); the realized-variance quadrature is trapezoidal.
      double log_s = 0.0, rv = 0.0, db, dw;
      double sigma_t = csigma.eval(state);
      for (int i = 0; i < total; ++i) {
        stream.next(db, dw);
        log_s += -0.5 * sigma_t * sigma_t * dt + sigma_t * db;
        increment[0] = dt;
        increment[1] = dw;
        segment_sig_into(seg, increment);
        chen_mul_into(scratch, state, seg);
        std::swap(state, scratch);
        double sigma_next = csigma.eval(state);
        rv += 0.5 * (sigma_t * sigma_t + sigma_next * sigma_next) * dt;
        sigma_t = sigma_next;
      }
      double price = params.s0 * std::exp(log_s);
      bool valid = std::isfinite(log_s) && std::isfinite(rv) && std::isfinite(price);
      out[p] = {valid ? price : std::numeric_limits<double>::quiet_NaN(), rv, id.seed, valid};
    }
  };
  parallel_paths(config.n_paths, resolve_workers(config, config.n_paths), run);
  return out;
}

std::vector<PriceSample> simulate_price_paths_multid(const ModelParams& params,
                                                     const SimConfig& config) {
  params.validate();
  config.validate();
  if (!params.multid())
    throw std::invalid_argument("simulate_price_paths_multid requires alphabet_dim >= 3");

  const int dim = params.alphabet_dim;
  const int level = params.order;
  const int total = config.total_steps(params.horizon);
  const double dt = params.horizon / total;
  const double sqdt = std::sqrt(dt);
  const CompiledPoly csigma(params.sigma, dim, level);

  std::vector<PriceSample> out(config.n_paths);
  auto run = [&](long long lo, long long hi) {
    TruncSig state(dim, level), seg = TruncSig::zeros(dim, level),
        scratch = TruncSig::zeros(dim, level);
    std::vector<double> increment(dim);
    for (long long p = lo; p < hi; ++p) {
      auto id = path_identity(config, p);
      std::mt19937_64 gen(id.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      double sign = id.flip ? -1.0 : 1.0;
      state = TruncSig::identity(dim, level);
      double log_s = 0.0, rv = 0.0;
      double sigma_t = csigma.eval(state);
      for (int i = 0; i < total; ++i) {
        increment[0] = dt;
        for (int j = 1; j < dim; ++j) increment[j] = sign * sqdt * normal(gen);
        double db = increment[1];
        log_s += -0.5 * sigma_t * sigma_t * dt + sigma_t * db;
        segment_sig_into(seg, increment);
        chen_mul_into(scratch, state, seg);
        std::swap(state, scratch);
        double sigma_next = csigma.eval(state);
        rv += 0.5 * (sigma_t * sigma_t + sigma_next * sigma_next) * dt;
        sigma_t = sigma_next;
      }
      double price = params.s0 * std::exp(log_s);
      bool valid = std::isfinite(log_s) && std::isfinite(rv) && std::isfinite(price);
      out[p] = {valid ? price : std::numeric_limits<double>::quiet_NaN(), rv, id.seed, valid};
    }
  };
  parallel_paths(config.n_paths, resolve_workers(config, config.n_paths), run);
  return out;
}

double expected_integrated_variance(const ModelParams& params) {
  params.validate();
  TensorPoly integrand = concat_word(shuffle(params.sigma, params.sigma), Word{1});
  TruncSig esig = expected_sig_time_bm(params.horizon, params.num_brownian() , integrand.max_order());
  return bracket(integrand, esig);
}

ExplosionStats simulate_drift_sde(const ModelParams& params, const SimConfig& config,
                                  std::vector<double>* terminal_x) {
  params.validate();
  config.validate();
  const int dim = params.alphabet_dim;
  const int level = params.order;
  const int total = config.total_steps(params.horizon);
  const double dt = params.horizon / total;
  const double T = params.horizon;
  const double drift_scale = params.multid() ? 1.0 : params.rho;
  const CompiledPoly csigma(params.sigma, dim, level);

  std::vector<std::uint8_t> exploded(config.n_paths, 0);
  std::vector<double> exit_times(config.n_paths, 0.0);
  if (terminal_x) terminal_x->assign(config.n_paths, std::numeric_limits<double>::quiet_NaN());

  auto run = [&](long long lo, long long hi) {
    TruncSig state(dim, level), seg = TruncSig::zeros(dim, level),
        scratch = TruncSig::zeros(dim, level);
    std::vector<double> increment(dim);
    for (long long p = lo; p < hi; ++p) {
      auto id = path_identity(config, p);
      std::mt19937_64 gen(id.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      double sign = id.flip ? -1.0 : 1.0;
      state = TruncSig::identity(dim, level);
      double x = 0.0, t = 0.0;
      bool blew = false;
      while (t < T) {
        double drift = drift_scale * csigma.eval(state);
        if (!std::isfinite(drift)) {  // state outran double range; cap crossing was imminent
          blew = true;
          break;
        }
        double dt_eff = std::min({dt, kKappa / (1.0 + std::abs(drift)), T - t});
        double sq = std::sqrt(dt_eff);
        increment[0] = dt_eff;
        double dx = drift * dt_eff + sign * sq * normal(gen);
        increment[1] = dx;
        for (int j = 2; j < dim; ++j) increment[j] = sign * sq * normal(gen);
        x += dx;
        t += dt_eff;
        segment_sig_into(seg, increment);
        chen_mul_into(scratch, state, seg);
        std::swap(state, scratch);
        if (std::abs(x) >= config.x_cap) {
          blew = true;
          break;
        }
      }
      exploded[p] = blew ? 1 : 0;
      exit_times[p] = blew ? t : std::numeric_limits<double>::quiet_NaN();
      if (terminal_x && !blew) (*terminal_x)[p] = x;
    }
  };
  parallel_paths(config.n_paths, resolve_workers(config, config.n_paths), run);

  ExplosionStats stats;
  stats.n_paths = config.n_paths;
  stats.cap_used = config.x_cap;
  double exit_sum = 0.0;
  for (long long p = 0; p < config.n_paths; ++p) {
    if (exploded[p]) {
      ++stats.n_exploded;
      exit_sum += exit_times[p];
    }
  }
  stats.p_hat = static_cast<double>(stats.n_exploded) / stats.n_paths;
  stats.ci95 = wilson_ci(stats.n_exploded, stats.n_paths);
  stats.mean_exit_time = stats.n_exploded > 0 ? exit_sum / stats.n_exploded
                                              : std::numeric_limits<double>::quiet_NaN();
  return stats;
}

double ode_blowup_time(double c, int N, double x0) {
  if (N < 2) throw std::invalid_argument("blow-up requires N >= 2");
  if (!(c > 0) || !(x0 > 0)) throw std::invalid_argument("blow-up requires c > 0 and x0 > 0");
  return std::pow(x0, 1.0 - N) / (c * (N - 1));
}

double ode_level_passage_time(double sigma_leading, int N, double from, double to) {
  if (N < 2) throw std::invalid_argument("level passage requires N >= 2");
  if (!(sigma_leading > 0) || !(from > 0) || !(to > from))
    throw std::invalid_argument("level passage requires sigma_leading > 0 and to > from > 0");
  double n_fact = 1.0;
  for (int i = 2; i <= N; ++i) n_fact *= i;
  return n_fact / ((N - 1) * sigma_leading) *
         (std::pow(from, 1.0 - N) - std::pow(to, 1.0 - N));
}

TensorPoly embed_one_d_sigma(const TensorPoly& sigma, double rho) {
  if (sigma.alphabet_dim() != 2)
    throw std::invalid_argument("embedding requires a one-dimensional model sigma");
  if (std::abs(rho) > 1.0) throw std::invalid_argument("|rho| must be <= 1");
  const double rhobar = std::sqrt(1.0 - rho * rho);
  TensorPoly out(3);
  for (const auto& [w, c] : sigma.terms()) {
    std::vector<std::size_t> twos;
    for (std::size_t i = 0; i < w.length(); ++i)
      if (w.letter(i) == 2) twos.push_back(i);
    const std::size_t n2 = twos.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n2); ++mask) {
      std::vector<std::uint8_t> letters(w.letters());
      double weight = 1.0;
      for (std::size_t b = 0; b < n2; ++b) {
        if (mask >> b & 1) {
          letters[twos[b]] = 3;  // B_perp
          weight *= rhobar;
        } else {
          weight *= rho;
        }
      }
      if (weight == 0.0) continue;
      out.add_term(Word(std::move(letters)), c * Rational(weight));
    }
  }
  return out;
}

}  // namespace sigvol
