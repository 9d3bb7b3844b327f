#ifndef SIGVOL_ENGINE_HPP
#define SIGVOL_ENGINE_HPP

#include <vector>

#include "sigvol/model.hpp"

namespace sigvol {

struct Drivers {
  double dt = 0.0;
  std::vector<double> db, dw;
};

// Correlated Brownian increments on a uniform grid: dW = rho dB +
// sqrt(1 - rho^2) dB_perp, reproducible from path_seed alone.
Drivers gen_drivers(double rho, double T, int n_steps, std::uint64_t path_seed,
                    bool antithetic_flip = false);

// One-dimensional signature volatility price model (alphabet {1, 2}): per
// path the truncated signature of (t, W) is maintained by Chen products with
// segment exponentials, sigma_t = <sigma, sig>, and the log price follows
// dlog S = -1/2 sigma^2 dt + sigma dB. Non-finite paths are flagged invalid,
// never dropped.
std::vector<PriceSample> simulate_price_paths(const ModelParams& params, const SimConfig& config);

// Multidimensional variant: the signature of (t, B, Z^1..Z^d) drives the
// volatility; letter 2 is B, letters 3.. are independent Z's; rho is unused.
std::vector<PriceSample> simulate_price_paths_multid(const ModelParams& params,
                                                     const SimConfig& config);

// E[int_0^T sigma_t^2 dt] = <(sigma sh sigma) 1, E[sig_T]> in closed form via
// the expected signature of the time-extended Brownian motion.
double expected_integrated_variance(const ModelParams& params);

// The signature-drift SDE: dX = rho <sigma, sig(t, X)> dt + dW in the
// one-dimensional model, dX = <sigma, sig(t, X, Z)> dt + dB in the
// multidimensional one. Adaptive sub-stepping dt_eff = min(dt, 0.1 / (1 +
// |drift|)); a path is declared exploded when |X| reaches config.x_cap before
// the horizon. When terminal_x is given it receives X_T per path (NaN for
// exploded paths).
ExplosionStats simulate_drift_sde(const ModelParams& params, const SimConfig& config,
                                  std::vector<double>* terminal_x = nullptr);

// Blow-up time of dx/dt = c x^N started from x0 > 0: x0^{1-N} / (c (N - 1)).
// N < 2 is an error (the affine case does not blow up).
double ode_blowup_time(double c, int N, double x0);

// Time for dx/dt = (sigma_leading / N!) x^N to travel from `from` to `to`:
// (N! / ((N-1) sigma_leading)) (from^{1-N} - to^{1-N}).
double ode_level_passage_time(double sigma_leading, int N, double from, double to);

// Rewrites a one-dimensional model's sigma over (t, W) as an equivalent
// linear form over (t, B, B_perp) with W = rho B + sqrt(1-rho^2) B_perp:
// every letter 2 is replaced by 2 (weight rho) or 3 (weight sqrt(1-rho^2)).
// Coefficients are double-rounded (dyadic) rationals; the coefficient of
// 2^{(x)N} equals rho^N sigma^{2^{(x)N}} up to rounding.
TensorPoly embed_one_d_sigma(const TensorPoly& sigma, double rho);

}  // namespace sigvol

#endif
