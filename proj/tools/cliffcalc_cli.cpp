#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cliffcalc/calculus.hpp"
#include "cliffcalc/combinatorics.hpp"
#include "cliffcalc/equations.hpp"
#include "cliffcalc/error.hpp"
#include "cliffcalc/resolvents.hpp"

namespace {

using namespace cliffcalc;
using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_breach = 1;
constexpr int exit_config = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  unsigned n = 5;
  std::size_t d = 4;
  unsigned trials = 20;
  std::uint64_t seed = 42;
  std::vector<std::string> tol_specs;
  std::string contour = "0,0,2,256";
  std::string out;
  unsigned jobs = 1;
  std::string ablate;
  std::optional<std::size_t> drop_term;
  std::optional<std::size_t> scale_term;
  std::string scale_group;
  std::vector<double> ratios{0.0, 0.5, 1.1};
  unsigned max_m = 80;
  unsigned h_min = 1;
  unsigned h_max = 6;
  unsigned m_extra = 40;
  int rhs_offset = 0;
};

double default_tolerance(const std::string& key) {
  static const std::map<std::string, double> defaults{
      {"S_EQ", 1e-10},      {"F3", 1e-9},         {"F5_PSEUDO", 1e-9},       {"F5_FULL", 1e-9},
      {"F7_PSEUDO", 1e-8},  {"F7_FULL", 1e-8},    {"GEN_PSEUDO", 1e-8},      {"PSEUDO_F_H_ODD", 1e-7},
      {"PSEUDO_F_H_EVEN", 1e-7}, {"PROJECTOR", 1e-8}, {"SERIES", 0.05},
  };
  return defaults.at(key);
}

std::string upper(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::toupper(c); });
  return text;
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& specs) {
  std::map<std::string, double> out;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects <id>=<value>, got '" + spec + "'");
    std::string key = upper(spec.substr(0, eq));
    if (key != "PROJECTOR" && key != "SERIES") key = std::string(to_string(parse_equation_id(key)));
    double value = 0.0;
    try {
      value = std::stod(spec.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("tolerance '" + spec + "' is not a number");
    }
    if (!(value > 0.0)) throw ConfigError("tolerances must be positive");
    out[key] = value;
  }
  return out;
}

double tolerance(const std::map<std::string, double>& tols, const std::string& key) {
  const auto it = tols.find(key);
  return it != tols.end() ? it->second : default_tolerance(key);
}

void validate(const RunConfig& config) {
  if (config.n % 2 == 0) throw ConfigError("n must be odd");
  if (config.n < 3 || config.n > max_algebra_dimension) throw ConfigError("n must be in [3, 13]");
  if (config.d == 0) throw ConfigError("d must be positive");
  if (config.trials == 0) throw ConfigError("trials must be positive");
}

// Writes to --out when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void line(const json& j) { stream() << j.dump() << '\n'; }

private:
  std::ofstream file_;
};

// Runs body(k) for k in [0, count) on `jobs` threads; results are written by index so output order
// does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, count); ++j) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) body(k);
    });
  }
  for (auto& thread : pool) thread.join();
}

std::uint64_t trial_seed(std::uint64_t seed, unsigned trial) { return seed + trial; }

Perturbation requested_perturbation(const RunConfig& config) {
  if (config.drop_term) return Perturbation::drop_term(*config.drop_term);
  if (config.scale_term) return Perturbation::scale_term(*config.scale_term);
  if (!config.scale_group.empty()) return Perturbation::scale_group(config.scale_group);
  return Perturbation::none();
}

int cmd_verify(const RunConfig& config) {
  validate(config);
  const auto tols = parse_tolerances(config.tol_specs);
  std::vector<EquationId> ids = equations_for(config.n);
  Perturbation perturbation = Perturbation::none();
  if (!config.ablate.empty()) {
    const EquationId id = parse_equation_id(config.ablate);
    if (!equation_applies(id, config.n)) throw ConfigError(std::string(to_string(id)) + " does not apply to this n");
    ids = {id};
    perturbation = requested_perturbation(config);
  } else if (config.drop_term || config.scale_term || !config.scale_group.empty()) {
    throw ConfigError("--drop-term, --scale-term and --scale-group require --ablate");
  }

  std::vector<std::vector<json>> lines(config.trials);
  parallel_for(config.trials, config.jobs, [&](std::size_t trial) {
    const std::uint64_t seed = trial_seed(config.seed, static_cast<unsigned>(trial));
    const CommutingTuple t = make_commuting_tuple(config.n, config.d, seed, SpectrumSpec::uniform(-1, 1));
    std::mt19937_64 rng(seed);
    const auto [s, p] = sample_admissible_points(t, rng);
    for (EquationId id : ids) {
      const double tol = tolerance(tols, std::string(to_string(id)));
      json j;
      try {
        const EquationSystem system = assemble_equation(id, t, s, p);
        if (perturbation.mode != Perturbation::Mode::none &&
            perturbation.mode != Perturbation::Mode::scale_group && perturbation.index >= system.lhs.size())
          throw ConfigError("term index out of range: " + std::to_string(system.lhs.size()) + " terms");
        ResidualReport report = evaluate_system(system, t, s, p, perturbation);
        report.seed = seed;
        j = to_json(report);
        j["tolerance"] = tol;
        j["pass"] = report.residual_rel <= tol;
      } catch (const Error& err) {
        j = {{"schema", "1"}, {"equation_id", to_string(id)}, {"n", config.n}, {"d", config.d}, {"seed", seed}};
        j["error"] = to_string(err.code());
        j["message"] = err.what();
        j["pass"] = false;
      }
      lines[trial].push_back(std::move(j));
    }
  });

  Sink sink(config.out);
  std::size_t total = 0;
  std::size_t failed = 0;
  for (const auto& trial : lines) {
    for (const json& j : trial) {
      sink.line(j);
      ++total;
      if (!j["pass"].get<bool>()) ++failed;
    }
  }
  std::cerr << "verify: " << total << " checks, " << failed << " above tolerance\n";
  return failed == 0 ? exit_ok : exit_breach;
}

int cmd_projector(const RunConfig& config) {
  validate(config);
  if (config.d < 2) throw ConfigError("projector needs d >= 2 for two clusters");
  const double tol = tolerance(parse_tolerances(config.tol_specs), "PROJECTOR");
  Sink sink(config.out);
  std::size_t failed = 0;
  for (unsigned trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> direction(config.n);
    for (double& c : direction) c = normal(rng);
    const Contour contour = Contour::parse(config.contour, SliceUnit::normalized(direction));
    const CommutingTuple t = two_cluster_tuple(config.n, config.d, seed);
    json j{{"schema", "1"}, {"command", "projector"}, {"n", config.n}, {"d", config.d}, {"seed", seed}};
    j["contour"] = contour.to_json();
    try {
      const ProjectorResult left = riesz_projector(config.n, t, contour, Side::left);
      const ProjectorResult wider = riesz_projector(config.n, t, contour.with_radius(1.1 * contour.radius), Side::left);
      Contour full = contour;
      full.c0 = 0.0;
      full.c1 = 0.0;
      full.radius = 2.0 * t.spectral_radius();
      Contour empty = full;
      empty.radius = 0.5 * joint_spectrum(t).front().radius;
      for (const auto& sphere : joint_spectrum(t)) empty.radius = std::min(empty.radius, 0.5 * sphere.radius);
      const CliffordOperator id = CliffordOperator::identity(config.n, config.d);
      const CliffordOperator p_full = riesz_projector(config.n, t, full, Side::left).projector;
      const CliffordOperator complement = p_full - left.projector;
      j["idempotency_gap"] = left.idempotency_gap;
      j["left_right_gap"] = left.left_right_gap;
      j["oracle_gap"] = (left.projector - spectral_projector_oracle(t, contour)).norm();
      j["contour_independence_gap"] = (wider.projector - left.projector).norm();
      j["full_identity_gap"] = (p_full - id).norm();
      j["empty_norm"] = riesz_projector(config.n, t, empty, Side::left).projector.norm();
      j["additivity_gap"] = (complement * complement - complement).norm() + (left.projector * complement).norm();
      bool pass = true;
      for (const char* key : {"idempotency_gap", "left_right_gap", "oracle_gap", "contour_independence_gap",
                              "full_identity_gap", "empty_norm", "additivity_gap"})
        pass = pass && j[key].get<double>() <= tol;
      j["tolerance"] = tol;
      j["pass"] = pass;
    } catch (const Error& err) {
      j["error"] = to_string(err.code());
      j["message"] = err.what();
      j["pass"] = false;
    }
    if (!j["pass"].get<bool>()) ++failed;
    sink.line(j);
  }
  return failed == 0 ? exit_ok : exit_breach;
}

int cmd_series(const RunConfig& config) {
  validate(config);
  const double tol = tolerance(parse_tolerances(config.tol_specs), "SERIES");
  Sink sink(config.out);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  bool pass = true;
  for (double ratio : config.ratios) {
    if (ratio < 0.0) throw ConfigError("ratios must be non-negative");
    Paravector x{normal(rng), std::vector<double>(config.n)};
    for (double& c : x.vec) c = normal(rng);
    std::vector<double> direction(config.n);
    for (double& c : direction) c = normal(rng);
    const double angle = std::uniform_real_distribution<double>(0.3, 2.8)(rng);
    const double s_mod = ratio > 0.0 ? pv_modulus(x) / ratio : 1.0;
    if (ratio == 0.0) x = Paravector{0.0, std::vector<double>(config.n)};
    const SlicePoint s{s_mod * std::cos(angle), s_mod * std::sin(angle), SliceUnit::normalized(direction)};
    json head{{"schema", "1"}, {"command", "series"}, {"n", config.n}, {"ratio", ratio}};
    if (ratio >= 1.0) {
      try {
        f_kernel_series_left(config.n, s, x, config.max_m);
        head["flag"] = "none";
      } catch (const Error& err) {
        head["flag"] = to_string(err.code());
      }
      sink.line(head);
      continue;
    }
    const double scale = f_kernel_left(config.n, s, x).norm();
    const SeriesStudy study = series_convergence(config.n, s, x, config.max_m);
    for (std::size_t k = 0; k < study.truncations.size(); ++k) {
      json row = head;
      row["M"] = study.truncations[k];
      row["abs_error"] = study.errors[k] * scale;
      row["rel_error"] = study.errors[k];
      if (k > 0 && study.errors[k] > 1e-13 && study.errors[k - 1] > 1e-13)
        row["observed_ratio"] = study.errors[k] / study.errors[k - 1];
      else
        row["observed_ratio"] = nullptr;
      sink.line(row);
    }
    json summary = head;
    summary["fitted_ratio"] = study.fitted_ratio;
    summary["final_rel_error"] = study.errors.back();
    bool ok = true;
    if (ratio == 0.0)
      ok = study.errors.front() <= 1e-14;
    else if (study.fitted_ratio > 0.0)
      ok = std::abs(study.fitted_ratio - ratio) <= tol;
    summary["pass"] = ok;
    pass = pass && ok;
    sink.line(summary);
  }
  return pass ? exit_ok : exit_breach;
}

int cmd_appendix(const RunConfig& config) {
  Sink sink(config.out);
  std::ostream& out = sink.stream();
  if (config.h_min == 0) throw ConfigError("h must be at least 1");
  if (config.h_min > config.h_max) {
    std::cerr << "warning: empty (h, m) range, nothing checked\n";
    out << "appendix: 0 checks, 0 failures\n";
    return exit_ok;
  }
  std::size_t checks = 0;
  std::size_t failures = 0;
  for (unsigned h = config.h_min; h <= config.h_max; ++h) {
    out << "h=" << h << " m=" << 2 * h << ".." << 2 * h + config.m_extra << ' ';
    for (unsigned m = 2 * h; m <= 2 * h + config.m_extra; ++m) {
      const auto [lhs, rhs] = appendix_identity_sides(m, h);
      const bool ok = lhs == rhs + config.rhs_offset;
      out << (ok ? '.' : 'X');
      ++checks;
      if (!ok) ++failures;
    }
    out << '\n';
  }
  out << "appendix: " << checks << " checks, " << failures << " failures\n";
  return failures == 0 ? exit_ok : exit_breach;
}

void add_common(CLI::App& app, RunConfig& config) {
  app.add_option("--n", config.n, "Clifford algebra dimension (odd)");
  app.add_option("--d", config.d, "operator size");
  app.add_option("--trials", config.trials, "random tuples per check");
  app.add_option("--seed", config.seed, "base seed (CLIFF_FCALC_SEED overrides)");
  app.add_option("--tol", config.tol_specs, "tolerance override <id>=<value>, repeatable");
  app.add_option("--contour", config.contour, "c0,c1,r[,N]");
  app.add_option("--out", config.out, "write JSON lines here instead of stdout");
  app.add_option("--jobs", config.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"F-functional calculus verification toolkit"};
  app.require_subcommand(1);
  RunConfig config;

  auto* verify = app.add_subcommand("verify", "residuals of every resolvent equation for n");
  add_common(*verify, config);
  verify->add_option("--ablate", config.ablate, "evaluate only this equation, perturbed");
  verify->add_option("--drop-term", config.drop_term, "drop term k of the ablated equation");
  verify->add_option("--scale-term", config.scale_term, "scale term k of the ablated equation by 1.01");
  verify->add_option("--scale-group", config.scale_group, "scale a constant group of the ablated equation by 1.01");

  auto* projector = app.add_subcommand("projector", "Riesz projector diagnostics on two-cluster spectra");
  add_common(*projector, config);

  auto* series = app.add_subcommand("series", "F-kernel series truncation table");
  add_common(*series, config);
  series->add_option("--ratio", config.ratios, "|x|/|s| values, repeatable");
  series->add_option("--max-m", config.max_m, "largest truncation");

  auto* appendix = app.add_subcommand("appendix", "exact sweep of the summation identity");
  add_common(*appendix, config);
  appendix->add_option("--h-min", config.h_min);
  appendix->add_option("--h-max", config.h_max);
  appendix->add_option("--m-extra", config.m_extra, "m runs over 2h..2h+m_extra");
  appendix->add_option("--rhs-offset", config.rhs_offset, "add to the right-hand side (mutation check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  if (const char* env = std::getenv("CLIFF_FCALC_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "error: CLIFF_FCALC_SEED must be an unsigned integer\n";
      return exit_config;
    }
  }

  try {
    if (verify->parsed()) return cmd_verify(config);
    if (projector->parsed()) return cmd_projector(config);
    if (series->parsed()) return cmd_series(config);
    return cmd_appendix(config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_config;
  }
}
