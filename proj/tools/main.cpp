// Batch front end: algebra queries, signature computation on CSV paths, and
// the four experiment drivers (smiles, explosion, moments, critical case).
// Every experiment emits a manifest that reproduces its result files
// byte-for-byte.
#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "sigvol/diagnostics.hpp"
#include "sigvol/digest.hpp"
#include "sigvol/engine.hpp"
#include "sigvol/json_io.hpp"
#include "sigvol/lyndon.hpp"
#include "sigvol/model.hpp"
#include "sigvol/path.hpp"
#include "sigvol/smile.hpp"
#include "sigvol/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sigvol;

namespace {

constexpr const char* kToolVersion = "sigvol 0.1.0";
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = ".";
};

json load_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ConfigError(filename, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(filename, std::string("JSON parse error: ") + e.what());
  }
}

// Loads either --config or the config echoed inside --from-manifest.
json load_config(const std::string& config_file, const std::string& manifest_file,
                 const std::string& command) {
  if (config_file.empty() == manifest_file.empty())
    throw ConfigError("config", "exactly one of --config / --from-manifest is required");
  if (!config_file.empty()) return load_json_file(config_file);
  json manifest = load_json_file(manifest_file);
  if (!manifest.contains("command") || manifest.at("command") != command)
    throw ConfigError("manifest.command", "manifest was produced by a different command");
  if (!manifest.contains("config")) throw ConfigError("manifest.config", "missing config echo");
  return manifest.at("config");
}

void apply_overrides(json& config, const GlobalOpts& opts) {
  if (!config.contains("sim") || !config["sim"].is_object()) return;
  if (opts.seed) config["sim"]["seed"] = *opts.seed;
  if (opts.workers) config["sim"]["workers"] = *opts.workers;
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, json config, const GlobalOpts& opts)
      : command_(std::move(command)), config_(std::move(config)), out_dir_(opts.out_dir),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
  }

  fs::path dir() const { return out_dir_; }

  void write_text(const std::string& filename, const std::string& text) {
    fs::path path = out_dir_ / filename;
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    outputs_[filename] = sha256_hex(text);
  }

  void write_json(const std::string& filename, const json& j) { write_text(filename, j.dump(2) + "\n"); }

  void finish() {
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest{{"command", command_},
                  {"tool_version", kToolVersion},
                  {"config", config_},
                  {"wall_clock_sec", wall},
                  {"outputs", outputs_}};
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
    std::cout << "wrote " << (out_dir_ / "manifest.json").string() << "\n";
  }

 private:
  std::string command_;
  json config_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  json outputs_ = json::object();
};

json gap_to_json(const GapEstimate& gap) {
  return {{"gap", gap.gap},
          {"ci", {gap.ci.first, gap.ci.second}},
          {"n_valid", gap.n_valid},
          {"n_invalid", gap.n_invalid}};
}

json verdict_to_json(const MartingaleVerdict& v) {
  json j{{"predicted_martingale", v.predicted_martingale}, {"reason", to_string(v.reason)}};
  if (v.has_measurement) {
    j["measured_gap"] = v.measured_gap;
    j["gap_ci"] = {v.gap_ci.first, v.gap_ci.second};
    j["consistent"] = v.consistent;
  }
  return j;
}

json explosion_to_json(const ExplosionStats& s) {
  json j{{"n_exploded", s.n_exploded}, {"n_paths", s.n_paths},
         {"p_hat", s.p_hat},           {"ci95", {s.ci95.first, s.ci95.second}},
         {"cap_used", s.cap_used}};
  if (s.n_exploded > 0) j["mean_exit_time"] = s.mean_exit_time;
  return j;
}

double require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw std::range_error("non-finite aggregate: " + what);
  return v;
}

std::vector<double> strikes_from_config(const json& config, double s0) {
  if (config.contains("strikes")) {
    auto strikes = config.at("strikes").get<std::vector<double>>();
    if (strikes.empty()) throw ConfigError("strikes", "must not be empty");
    return strikes;
  }
  if (config.contains("k_grid")) {
    const auto& grid = config.at("k_grid");
    double lo = grid.at("lo").get<double>(), hi = grid.at("hi").get<double>();
    int n = grid.at("n").get<int>();
    if (n < 1 || hi < lo) throw ConfigError("k_grid", "need n >= 1 and hi >= lo");
    std::vector<double> strikes;
    for (int i = 0; i < n; ++i) {
      double k = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
      strikes.push_back(s0 * std::exp(k));
    }
    return strikes;
  }
  throw ConfigError("strikes", "missing required field (or k_grid)");
}

std::vector<PriceSample> run_price_sim(const ModelParams& params, const SimConfig& config) {
  return params.multid() ? simulate_price_paths_multid(params, config)
                         : simulate_price_paths(params, config);
}

std::string format_csv_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_shuffle(const std::string& a, const std::string& b) {
  Word v = Word::parse(a), w = Word::parse(b);
  int dim = std::max({1, v.max_letter(), w.max_letter()});
  std::cout << shuffle_words(v, w, dim).str() << "\n";
  return 0;
}

int cmd_radford(const std::string& text, int avoid_letter, const std::string& convention) {
  Word w = Word::parse(text);
  int dim = std::max(avoid_letter, std::max(1, w.max_letter()));
  ShufflePolynomial sp(dim);
  LyndonOrder order(dim);
  if (avoid_letter > 0) {
    order = LyndonOrder::paper_with_greatest(dim, avoid_letter);
    sp = avoid_letter_decompose(w, avoid_letter, dim);
  } else {
    order = LyndonOrder(dim, convention == "classical" ? LyndonConvention::classical
                                                       : LyndonConvention::paper);
    sp = radford_decompose(w, order);
  }
  std::string word_text = w.empty() ? "ø" : w.str();
  std::cout << word_text << " = " << sp.str(order) << "\n";
  return 0;
}

int cmd_lyndon(int dim, int max_len, const std::string& convention) {
  LyndonOrder order(dim, convention == "classical" ? LyndonConvention::classical
                                                   : LyndonConvention::paper);
  bool first = true;
  for (const Word& w : lyndon_words(dim, max_len, order)) {
    if (!first) std::cout << " ";
    std::cout << w.str();
    first = false;
  }
  std::cout << "\n";
  return 0;
}

int cmd_sig(const std::string& path_file, int level, const std::string& out_file) {
  PathSample path = PathSample::read_csv_file(path_file);
  json j = trunc_sig_to_json(path_signature(path, level));
  if (out_file.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_file, std::ios::binary);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_expected_sig(double T, int bm_dim, int level, const std::string& out_file) {
  json j = trunc_sig_to_json(expected_sig_time_bm(T, bm_dim, level));
  if (out_file.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_file, std::ios::binary);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_simulate(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  ModelParams params = model_params_from_json(config.at("model"));
  SimConfig sim = sim_config_from_json(config.at("sim"));
  bool dump_terminals = config.value("dump_terminals", false);

  config["model"] = model_params_to_json(params);
  config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("simulate", config, opts);

  auto samples = run_price_sim(params, sim);
  GapEstimate gap = martingale_gap(samples, params.s0);
  std::vector<double> rv;
  for (const auto& s : samples)
    if (s.valid) rv.push_back(s.realized_variance);
  MeanCi rv_ci = mean_ci(rv);

  json results{{"model", model_params_to_json(params)},
               {"sim", sim_config_to_json(sim)},
               {"n_paths", sim.n_paths},
               {"n_invalid", gap.n_invalid},
               {"mean_price", require_finite(params.s0 - gap.gap, "mean price")},
               {"martingale_gap", gap_to_json(gap)},
               {"realized_variance_mean", require_finite(rv_ci.mean, "realized variance")},
               {"realized_variance_ci", {rv_ci.ci.first, rv_ci.ci.second}},
               {"expected_integrated_variance", expected_integrated_variance(params)},
               {"step_size", params.horizon / sim.total_steps(params.horizon)}};
  manifest.write_json("simulate.json", results);

  if (dump_terminals) {
    std::string csv = "terminal_price\n";
    for (const auto& s : samples)
      csv += (s.valid ? format_csv_double(s.terminal_price) : std::string("nan")) + "\n";
    manifest.write_text("terminals.csv", csv);
  }
  manifest.finish();
  return 0;
}

int cmd_smile(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  ModelParams params = model_params_from_json(config.at("model"));
  SimConfig sim = sim_config_from_json(config.at("sim"));
  std::vector<double> strikes = strikes_from_config(config, params.s0);

  config["model"] = model_params_to_json(params);
  config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("smile", config, opts);

  auto samples = run_price_sim(params, sim);
  auto rows = smile_from_samples(samples, params.s0, params.horizon, strikes);
  MartingaleVerdict verdict = assess_martingality(params, samples);
  require_finite(verdict.measured_gap, "martingale gap");

  manifest.write_text("smile.csv", smile_csv(rows));
  json results{{"model", model_params_to_json(params)},
               {"sim", sim_config_to_json(sim)},
               {"verdict", verdict_to_json(verdict)},
               {"step_size", params.horizon / sim.total_steps(params.horizon)}};
  manifest.write_json("smile.json", results);
  manifest.finish();
  return 0;
}

int cmd_explode(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  ModelParams params = model_params_from_json(config.at("model"));
  SimConfig sim = sim_config_from_json(config.at("sim"));

  config["model"] = model_params_to_json(params);
  config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("explode", config, opts);

  ExplosionStats stats = simulate_drift_sde(params, sim);
  SimConfig doubled = sim;
  doubled.x_cap = 2 * sim.x_cap;
  ExplosionStats stats2 = simulate_drift_sde(params, doubled);

  double ci_width = stats.ci95.second - stats.ci95.first;
  json results{{"model", model_params_to_json(params)},
               {"sim", sim_config_to_json(sim)},
               {"explosion", explosion_to_json(stats)},
               {"cap_sensitivity",
                {{"doubled_cap", doubled.x_cap},
                 {"p_hat_at_doubled_cap", stats2.p_hat},
                 {"delta_p_hat", stats2.p_hat - stats.p_hat},
                 {"ci_width", ci_width},
                 {"within_ci_width", std::abs(stats2.p_hat - stats.p_hat) < ci_width ||
                                         (stats.n_exploded == 0 && stats2.n_exploded == 0)}}},
               {"step_size", params.horizon / sim.total_steps(params.horizon)}};
  manifest.write_json("explode.json", results);
  manifest.finish();
  return 0;
}

int cmd_moments(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  ModelParams params = model_params_from_json(config.at("model"));
  SimConfig sim = sim_config_from_json(config.at("sim"));
  if (!config.contains("m")) throw ConfigError("m", "missing required field");
  double m = config.at("m").get<double>();

  config["model"] = model_params_to_json(params);
  config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("moments", config, opts);

  MomentVerdict verdict = moment_predicate(params.rho, m);
  auto samples = run_price_sim(params, sim);
  MomentEstimate est = moment_estimate(samples, m);

  // The moment theorem assumes the martingale regime; echo that check.
  MartingaleVerdict precondition = martingality_predicate(params);

  json results{{"model", model_params_to_json(params)},
               {"martingale_precondition", verdict_to_json(precondition)},
               {"sim", sim_config_to_json(sim)},
               {"m", m},
               {"threshold", verdict.threshold},
               {"regime", to_string(verdict.regime)},
               {"note", verdict.note},
               {"estimate", est.diverging ? json("diverging") : json(est.estimate)},
               {"tail_share", est.tail_share},
               {"n_samples", est.n}};
  manifest.write_json("moments.json", results);
  manifest.finish();
  return 0;
}

int cmd_critical(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  CriticalParams params;
  const auto& c = config.contains("critical") ? config.at("critical") : config;
  if (!c.contains("alpha") || !c.contains("m") || !c.contains("T"))
    throw ConfigError("critical", "alpha, m and T are required");
  params.alpha = c.at("alpha").get<double>();
  params.beta = c.value("beta", 0.0);
  params.m = c.at("m").get<double>();
  params.T = c.at("T").get<double>();
  if (c.contains("rho")) params.rho = c.at("rho").get<double>();
  std::vector<double> grid = config.value("lambda_grid", std::vector<double>{-3, -2, -1, 0, 1, 2, 3});
  bool analytic = config.value("mode", std::string("analytic")) == "analytic";
  SimConfig sim;
  if (config.contains("sim")) sim = sim_config_from_json(config.at("sim"));
  if (!analytic && !config.contains("sim"))
    throw ConfigError("sim", "Monte Carlo mode requires a sim block");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("critical", e.what());
  }

  if (config.contains("sim")) config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("critical", config, opts);

  auto shape = ControlShape::sine(params.T);
  CriticalCaseReport report = critical_case_report(params, grid, shape, analytic, sim);

  json results{{"alpha", params.alpha},
               {"beta", params.beta},
               {"m", params.m},
               {"T", params.T},
               {"rho", params.rho ? json(*params.rho) : json(critical_rho(params.m))},
               {"kappa", report.kappa},
               {"t_star", report.t_star},
               {"mode", analytic ? "analytic" : "mc"},
               {"lambda_grid", report.lambda_grid},
               {"j_values", report.j_values},
               {"j_stderr", report.j_stderr},
               {"quadratic_coeff", report.quadratic_coeff},
               {"quadratic_se", report.quadratic_se},
               {"cubic_coeff", report.cubic_coeff},
               {"cubic_se", report.cubic_se},
               {"verdict", to_string(report.verdict)},
               {"note", report.note}};
  if (config.contains("sim")) results["sim"] = sim_config_to_json(sim);
  for (double v : report.j_values) require_finite(v, "critical functional value");
  manifest.write_json("critical.json", results);
  manifest.finish();
  return 0;
}

int cmd_wings(json config, const GlobalOpts& opts) {
  apply_overrides(config, opts);
  ModelParams params = model_params_from_json(config.at("model"));
  SimConfig sim = sim_config_from_json(config.at("sim"));
  std::vector<double> strikes = strikes_from_config(config, params.s0);
  if (!config.contains("fit_range")) throw ConfigError("fit_range", "missing required field");
  auto range = config.at("fit_range").get<std::vector<double>>();
  if (range.size() != 2) throw ConfigError("fit_range", "must be [k_lo, k_hi]");

  config["model"] = model_params_to_json(params);
  config["sim"] = sim_config_to_json(sim);
  ManifestWriter manifest("wings", config, opts);

  auto samples = run_price_sim(params, sim);
  auto rows = smile_from_samples(samples, params.s0, params.horizon, strikes);
  WingReport report = wing_slope(rows, params.horizon, {range[0], range[1]}, params.rho);
  LeeSlope lee = theoretical_lee_slope(params.rho);
  require_finite(report.slope_hat, "wing slope");

  manifest.write_text("smile.csv", smile_csv(rows));
  json results{{"model", model_params_to_json(params)},
               {"sim", sim_config_to_json(sim)},
               {"slope_hat", report.slope_hat},
               {"stderr", report.stderr_},
               {"beta_r", report.beta_r},
               {"p_bar", lee.p_bar},
               {"fit_range", {report.fit_range.first, report.fit_range.second}},
               {"n_points", report.n_points}};
  manifest.write_json("wings.json", results);
  manifest.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signature volatility model toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  // Global flags (--seed, --workers, --out) remain usable after the
  // subcommand name.
  app.fallthrough();

  GlobalOpts opts;
  std::uint64_t seed_opt = 0;
  int workers_opt = 0;
  auto* seed_flag = app.add_option("--seed", seed_opt, "override the config seed");
  auto* workers_flag = app.add_option("--workers", workers_opt, "override the worker count");
  app.add_option("--out", opts.out_dir, "output directory for experiment files");

  // algebra / signature queries
  std::string word_a, word_b, word_text, convention = "paper", path_file, out_file;
  int avoid_letter = 0, level = 0, dim = 2, max_len = 1, bm_dim = 1;
  double horizon = 1.0;

  auto* shuffle_cmd = app.add_subcommand("shuffle", "shuffle product of two words");
  shuffle_cmd->add_option("v", word_a, "first word (digits, empty allowed)");
  shuffle_cmd->add_option("w", word_b, "second word");

  auto* radford_cmd = app.add_subcommand("radford", "decompose a word over Lyndon words");
  radford_cmd->add_option("word", word_text, "word to decompose")->required();
  radford_cmd->add_option("--avoid-letter", avoid_letter, "decompose avoiding this ending letter");
  radford_cmd->add_option("--convention", convention, "paper|classical");

  auto* lyndon_cmd = app.add_subcommand("lyndon", "enumerate Lyndon words");
  lyndon_cmd->add_option("alphabet_dim", dim, "alphabet size")->required();
  lyndon_cmd->add_option("max_len", max_len, "maximum word length")->required();
  lyndon_cmd->add_option("--convention", convention, "paper|classical");

  auto* sig_cmd = app.add_subcommand("sig", "truncated signature of a CSV path");
  sig_cmd->add_option("--path", path_file, "CSV file with header t,x1,...,xd")->required();
  sig_cmd->add_option("--level", level, "truncation level")->required();
  sig_cmd->add_option("--out-file", out_file, "write JSON here instead of stdout");

  auto* esig_cmd = app.add_subcommand("expected-sig", "expected signature of (t, W)");
  esig_cmd->add_option("--t", horizon, "horizon")->required();
  esig_cmd->add_option("--bm-dim", bm_dim, "number of Brownian coordinates");
  esig_cmd->add_option("--level", level, "truncation level")->required();
  esig_cmd->add_option("--out-file", out_file, "write JSON here instead of stdout");

  // experiment drivers
  std::string config_file, manifest_file;
  for (const char* name : {"simulate", "smile", "explode", "moments", "critical", "wings"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    cmd->add_option("--config", config_file, "experiment config JSON");
    cmd->add_option("--from-manifest", manifest_file, "re-run from a manifest");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*seed_flag) opts.seed = seed_opt;
  if (*workers_flag) opts.workers = workers_opt;

  try {
    if (shuffle_cmd->parsed()) return cmd_shuffle(word_a, word_b);
    if (radford_cmd->parsed()) return cmd_radford(word_text, avoid_letter, convention);
    if (lyndon_cmd->parsed()) return cmd_lyndon(dim, max_len, convention);
    if (sig_cmd->parsed()) return cmd_sig(path_file, level, out_file);
    if (esig_cmd->parsed()) return cmd_expected_sig(horizon, bm_dim, level, out_file);

    for (const char* name : {"simulate", "smile", "explode", "moments", "critical", "wings"}) {
      auto* cmd = app.get_subcommand(name);
      if (!cmd->parsed()) continue;
      json config = load_config(config_file, manifest_file, name);
      std::string sname = name;
      if (sname == "simulate") return cmd_simulate(std::move(config), opts);
      if (sname == "smile") return cmd_smile(std::move(config), opts);
      if (sname == "explode") return cmd_explode(std::move(config), opts);
      if (sname == "moments") return cmd_moments(std::move(config), opts);
      if (sname == "critical") return cmd_critical(std::move(config), opts);
      if (sname == "wings") return cmd_wings(std::move(config), opts);
    }
    std::cerr << "error: no subcommand\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::range_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
