#ifndef SIGVOL_MODEL_HPP
#define SIGVOL_MODEL_HPP

#include <cstdint>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <utility>

#include "sigvol/tensor_poly.hpp"

namespace sigvol {

// Configuration/schema violation, carrying the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

// The signature volatility model. alphabet_dim = 2 for the one-dimensional
// model (letters: 1 = time, 2 = W); alphabet_dim = d + 2 for the
// multidimensional one (2 = B, 3.. = independent Z's), where rho is ignored.
struct ModelParams {
  int alphabet_dim = 2;
  int order = 0;  // N; always equals sigma.max_order() unless sigma is zero
  TensorPoly sigma{2};
  double rho = 0.0;
  double s0 = 1.0;
  double horizon = 1.0;

  bool multid() const { return alphabet_dim > 2; }
  int num_brownian() const { return alphabet_dim - 1; }
  Rational leading_coefficient() const { return sigma.coeff(Word::repeated(2, order)); }
  void validate(const std::string& path = "model") const;
};

struct SimConfig {
  long long n_paths = 1;
  int n_steps = 1;  // per unit of horizon; total steps = max(1, round(n_steps * T))
  std::uint64_t seed = 0;
  double x_cap = 1e4;
  bool antithetic = false;
  int workers = 0;  // 0 = use hardware concurrency

  int total_steps(double horizon) const;
  void validate(const std::string& path = "sim") const;
};

struct PriceSample {
  double terminal_price = 0.0;
  double realized_variance = 0.0;  // int sigma^2 dt along the path
  std::uint64_t path_seed = 0;
  bool valid = true;  // false when the path state went non-finite
};

struct ExplosionStats {
  long long n_exploded = 0;
  long long n_paths = 0;
  double p_hat = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  double cap_used = 0.0;
  double mean_exit_time = 0.0;  // over exploded paths; NaN when none exploded
};

// Figure-style coefficient protocol: every coefficient of order <= N drawn
// uniformly on [-0.5, 0.5] from the coefficient seed (graded-lex order), then
// the leading coefficient sigma^{2 (x) N} overwritten with `leading`.
TensorPoly sample_sigma_coefficients(int alphabet_dim, int order, double leading,
                                     std::uint64_t coeff_seed);

// JSON forms. ModelParams accepts either an explicit "sigma" tensor
// polynomial or a "sigma_protocol" {order, leading, coeff_seed} block.
ModelParams model_params_from_json(const nlohmann::json& j, const std::string& path = "model");
nlohmann::json model_params_to_json(const ModelParams& p);
SimConfig sim_config_from_json(const nlohmann::json& j, const std::string& path = "sim");
nlohmann::json sim_config_to_json(const SimConfig& c);

}  // namespace sigvol

#endif
