#include "sigvol/model.hpp"

#include <cmath>
#include <random>

#include "sigvol/json_io.hpp"

namespace sigvol {

void ModelParams::validate(const std::string& path) const {
  if (alphabet_dim < 2) throw ConfigError(path + ".alphabet_dim", "must be >= 2");
  if (sigma.alphabet_dim() != alphabet_dim)
    throw ConfigError(path + ".sigma", "alphabet_dim mismatch with model");
  if (!sigma.is_zero() && sigma.max_order() != order)
    throw ConfigError(path + ".order", "order " + std::to_string(order) +
                                           " does not match sigma of order " +
                                           std::to_string(sigma.max_order()));
  if (order < 0) throw ConfigError(path + ".order", "must be >= 0");
  if (!(std::abs(rho) <= 1.0)) throw ConfigError(path + ".rho", "must lie in [-1, 1]");
  if (!(s0 > 0.0)) throw ConfigError(path + ".s0", "must be > 0");
  if (!(horizon > 0.0)) throw ConfigError(path + ".horizon", "must be > 0");
}

int SimConfig::total_steps(double horizon) const {
  long long steps = std::llround(static_cast<double>(n_steps) * horizon);
  if (steps < 1) steps = 1;
  if (steps > 1000000000LL) throw std::invalid_argument("step count overflow");
  return static_cast<int>(steps);
}

void SimConfig::validate(const std::string& path) const {
  if (n_paths < 1) throw ConfigError(path + ".n_paths", "must be >= 1");
  if (n_steps < 1) throw ConfigError(path + ".n_steps", "must be >= 1");
  if (!(x_cap > 0.0)) throw ConfigError(path + ".x_cap", "must be > 0");
  if (workers < 0) throw ConfigError(path + ".workers", "must be >= 0");
}

TensorPoly sample_sigma_coefficients(int alphabet_dim, int order, double leading,
                                     std::uint64_t coeff_seed) {
  if (alphabet_dim < 2) throw std::invalid_argument("alphabet_dim must be >= 2");
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  std::mt19937_64 gen(coeff_seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  TensorPoly sigma(alphabet_dim);
  // Enumerate words of length 0..order in graded-lex order.
  std::vector<std::vector<std::uint8_t>> level{{}};
  for (int n = 0; n <= order; ++n) {
    for (const auto& letters : level) sigma.add_term(Word(letters), Rational(uni(gen)));
    if (n == order) break;
    std::vector<std::vector<std::uint8_t>> next;
    next.reserve(level.size() * alphabet_dim);
    for (const auto& letters : level)
      for (int l = 1; l <= alphabet_dim; ++l) {
        auto ext = letters;
        ext.push_back(static_cast<std::uint8_t>(l));
        next.push_back(std::move(ext));
      }
    level = std::move(next);
  }
  Word top = Word::repeated(2, order);
  sigma.add_term(top, Rational(leading) - sigma.coeff(top));
  return sigma;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const std::string& path,
                                    const char* key) {
  if (!j.is_object()) throw ConfigError(path, "must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
  return *it;
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& field_path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field_path, "has wrong type");
  }
}

template <typename T>
T field_or(const nlohmann::json& j, const std::string& path, const char* key, T fallback) {
  if (!j.is_object()) throw ConfigError(path, "must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return get_as<T>(*it, path + "." + key);
}

}  // namespace

ModelParams model_params_from_json(const nlohmann::json& j, const std::string& path) {
  ModelParams p;
  bool has_sigma = j.is_object() && j.contains("sigma");
  bool has_protocol = j.is_object() && j.contains("sigma_protocol");
  if (has_sigma == has_protocol)
    throw ConfigError(path, "exactly one of sigma / sigma_protocol is required");

  if (has_sigma) {
    try {
      p.sigma = tensor_poly_from_json(j.at("sigma"));
    } catch (const std::exception& e) {
      throw ConfigError(path + ".sigma", e.what());
    }
    p.alphabet_dim = field_or<int>(j, path, "alphabet_dim", p.sigma.alphabet_dim());
    p.order = field_or<int>(j, path, "order", p.sigma.max_order());
  } else {
    const auto& proto = j.at("sigma_protocol");
    std::string ppath = path + ".sigma_protocol";
    int order = get_as<int>(require_field(proto, ppath, "order"), ppath + ".order");
    double leading = get_as<double>(require_field(proto, ppath, "leading"), ppath + ".leading");
    auto coeff_seed =
        get_as<std::uint64_t>(require_field(proto, ppath, "coeff_seed"), ppath + ".coeff_seed");
    p.alphabet_dim = field_or<int>(j, path, "alphabet_dim", 2);
    if (p.alphabet_dim < 2) throw ConfigError(path + ".alphabet_dim", "must be >= 2");
    if (order < 0) throw ConfigError(ppath + ".order", "must be >= 0");
    p.sigma = sample_sigma_coefficients(p.alphabet_dim, order, leading, coeff_seed);
    p.order = order;
  }
  p.rho = field_or<double>(j, path, "rho", 0.0);
  p.s0 = get_as<double>(require_field(j, path, "s0"), path + ".s0");
  p.horizon = get_as<double>(require_field(j, path, "horizon"), path + ".horizon");
  p.validate(path);
  return p;
}

nlohmann::json model_params_to_json(const ModelParams& p) {
  return {{"alphabet_dim", p.alphabet_dim}, {"order", p.order},
          {"sigma", tensor_poly_to_json(p.sigma)}, {"rho", p.rho},
          {"s0", p.s0},                     {"horizon", p.horizon}};
}

SimConfig sim_config_from_json(const nlohmann::json& j, const std::string& path) {
  SimConfig c;
  c.n_paths = get_as<long long>(require_field(j, path, "n_paths"), path + ".n_paths");
  c.n_steps = get_as<int>(require_field(j, path, "n_steps"), path + ".n_steps");
  c.seed = get_as<std::uint64_t>(require_field(j, path, "seed"), path + ".seed");
  c.x_cap = field_or<double>(j, path, "x_cap", 1e4);
  c.antithetic = field_or<bool>(j, path, "antithetic", false);
  c.workers = field_or<int>(j, path, "workers", 0);
  c.validate(path);
  return c;
}

nlohmann::json sim_config_to_json(const SimConfig& c) {
  // The worker count is a runtime hint, not part of the experiment identity;
  // results are byte-identical for any value, so it is never echoed.
  return {{"n_paths", c.n_paths}, {"n_steps", c.n_steps},       {"seed", c.seed},
          {"x_cap", c.x_cap},     {"antithetic", c.antithetic}};
}

}  // namespace sigvol
