#ifndef SIGVOL_DIAGNOSTICS_HPP
#define SIGVOL_DIAGNOSTICS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigvol/model.hpp"
#include "sigvol/stats.hpp"
#include "sigvol/trunc_sig.hpp"

namespace sigvol {

enum class MartingaleReason { rho_zero, order_one, odd_and_nonpositive, even_order, positive_product };
std::string to_string(MartingaleReason reason);

struct MartingaleVerdict {
  bool predicted_martingale = false;
  MartingaleReason reason = MartingaleReason::order_one;
  bool has_measurement = false;
  double measured_gap = 0.0;
  std::pair<double, double> gap_ci{0.0, 0.0};
  bool consistent = false;  // prediction matches the gap-CI test
};

// The martingality case split: rho = 0 or N = 1 give a martingale; otherwise
// a martingale iff N is odd and rho sigma^{2(x)N} <= 0 (one-dimensional) or
// N is odd and sigma^{2(x)N} <= 0 (multidimensional). A vanishing leading
// coefficient violates the hypothesis and is an error.
MartingaleVerdict martingality_predicate(const ModelParams& params);

// gap = s0 - mean(S_T) with a two-sided CI; negative point estimates are
// legal noise, but positive local martingales are supermartingales so the
// mean never exceeds s0 beyond statistical error.
struct GapEstimate {
  double gap = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
  long long n_valid = 0;
  long long n_invalid = 0;
};
GapEstimate martingale_gap(std::span<const PriceSample> samples, double s0,
                           double confidence = 0.95);

// Predicate plus measurement plus the consistency flag.
MartingaleVerdict assess_martingality(const ModelParams& params,
                                      std::span<const PriceSample> samples,
                                      double confidence = 0.95);

enum class MomentRegime { finite, infinite, critical };
std::string to_string(MomentRegime regime);

struct MomentVerdict {
  double m = 0.0;
  double threshold = 0.0;  // sqrt(1 - 1/m)
  MomentRegime regime = MomentRegime::finite;
  std::string note;
  std::optional<double> estimate;
  double tail_share = 0.0;  // share of the estimate from the single largest sample
  bool diverging = false;   // estimate overflowed
  long long n_samples = 0;
};

// E[S_T^m] is finite iff |rho| > sqrt(1 - 1/m) (infinite when <, critical at
// equality up to floating rounding). m in (0, 1] is trivially finite for a
// supermartingale and reported with a note; m <= 0 is an error.
MomentVerdict moment_predicate(double rho, double m);

struct MomentEstimate {
  double estimate = 0.0;
  double tail_share = 0.0;
  bool diverging = false;
  long long n = 0;
};
MomentEstimate moment_estimate(std::span<const PriceSample> samples, double m);

// rho * sign(<sigma{2}, sig>) in {-1, 0, +1}, where sigma{2} collects the
// terms of sigma ending in letter 2 with that letter removed.
int spot_vol_correlation_sign(const ModelParams& params, const TruncSig& sig_state);

// A smooth control shape psi with psi(0) = psi(T) = 0 and the integrals the
// critical-case functional needs. The default is psi(t) = sin(pi t / T).
struct ControlShape {
  double T = 1.0;
  std::function<double(double)> psi, dpsi;
  double int_psi2 = 0.0;     // int_0^T psi^2
  double int_dpsi2 = 0.0;    // int_0^T psi'^2
  double int_psi3 = 0.0;     // int_0^T psi^3
  double int_t2_dpsi = 0.0;  // int_0^T (t^2/2) psi'

  static ControlShape sine(double T);
  // Integrals computed by composite Simpson quadrature.
  static ControlShape from_functions(double T, std::function<double(double)> psi,
                                     std::function<double(double)> dpsi);
};

// Critical-correlation moment functional, |rho| = sqrt(1 - 1/m) with
// sigma = alpha 222 + beta 221 and deterministic controls U = lambda psi.
struct CriticalParams {
  double alpha = 1.0;
  double beta = 0.0;
  double m = 2.0;
  double T = 1.0;
  // Optional echo of the correlation; must equal -sqrt(1 - 1/m) when given.
  std::optional<double> rho;

  void validate() const;
};

double critical_kappa(double m);                    // sqrt(m^2 - m)
double critical_rho(double m);                      // -sqrt(1 - 1/m)
double critical_t_star(double alpha, double m);     // sqrt(2 pi^2 / (alpha kappa))

// Closed-form Gaussian evaluation of
//   J(lambda) = E[-1/2 int u^2 - (alpha kappa / 24)(B_T + U_T)^4
//               + (alpha kappa / 4) int (B + U)^2
//               - (beta kappa / 2) int (int (B + U)^2) dU]
// for U = lambda psi: a cubic in lambda whose constant term vanishes.
double critical_case_functional_analytic(const CriticalParams& p, double lambda,
                                         const ControlShape& shape);

// Monte Carlo estimate of the same expectation.
MeanCi critical_case_functional_mc(const CriticalParams& p, double lambda,
                                   const ControlShape& shape, const SimConfig& config);

enum class CriticalVerdictKind { finite, infinite_quadratic, infinite_cubic, critical_undetermined };
std::string to_string(CriticalVerdictKind kind);

struct CriticalCaseReport {
  CriticalParams params;
  double kappa = 0.0;
  double t_star = 0.0;
  std::vector<double> lambda_grid;
  std::vector<double> j_values;
  std::vector<double> j_stderr;  // zeros in analytic mode
  double quadratic_coeff = 0.0, quadratic_se = 0.0;
  double cubic_coeff = 0.0, cubic_se = 0.0;
  CriticalVerdictKind verdict = CriticalVerdictKind::critical_undetermined;
  std::string note;
  bool analytic = false;
};

// Evaluates J over the grid, fits a cubic in lambda by least squares and
// classifies the moment regime. Needs at least 4 grid points.
CriticalCaseReport critical_case_report(const CriticalParams& p,
                                        std::span<const double> lambda_grid,
                                        const ControlShape& shape, bool analytic,
                                        const SimConfig& config);

}  // namespace sigvol

#endif
