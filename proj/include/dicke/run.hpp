// Command-line harness: configuration parsing (flags + JSON file), scenario
// time-series emission (CSV/JSON) and the closed-form/generic/RK4 cross-check
// runner. Everything here is double precision and deterministic: identical
// configs produce byte-identical output.
#pragma once

#include "dicke/dynamics.hpp"
#include "dicke/measures.hpp"
#include "dicke/scenarios.hpp"
#include "dicke/types.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dicke {

enum class OutputFormat { csv, json };

struct RunConfig {
  Scenario scenario;
  std::optional<CollectiveParams<double>> params;    // direct gamma/eta
  std::optional<AtomPairGeometry<double>> geometry;  // or derived from geometry
  double eta = 0.0;                                  // used with geometry-free near-zero runs
  double tau_max = 10.0;
  long samples = 1000;
  OutputFormat format = OutputFormat::csv;
  bool cross_check = false;
  std::optional<long> rk4_steps;      // total steps over [0, tau_max]
  std::vector<double> sweep_gamma;    // non-empty selects sweep mode
  std::string out_path;               // empty = stdout
  // cross-check tolerances (closed form vs generic pipeline, vs RK4, vs brute force)
  double tol_analytic = 1e-10;
  double tol_rk4 = 1e-7;
  double tol_bruteforce = 1e-3;
  long bf_stride = 0;  // 0 = auto: ~8 brute-force rows per run
};

// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

namespace detail {

struct RawConfig {
  std::optional<std::string> scenario, separation, dipole, direction, sweep_gamma, format, out;
  std::optional<double> gamma, eta, tau_max, tol_analytic, tol_rk4, tol_bruteforce;
  std::optional<long> samples, rk4_steps, bf_stride;
  std::optional<bool> near_zero, cross_check;

  void merge_over(const RawConfig& base) {
    auto pick = [](auto& mine, const auto& theirs) {
      if (!mine && theirs) mine = theirs;
    };
    pick(scenario, base.scenario);
    pick(separation, base.separation);
    pick(dipole, base.dipole);
    pick(direction, base.direction);
    pick(sweep_gamma, base.sweep_gamma);
    pick(format, base.format);
    pick(out, base.out);
    pick(gamma, base.gamma);
    pick(eta, base.eta);
    pick(tau_max, base.tau_max);
    pick(tol_analytic, base.tol_analytic);
    pick(tol_rk4, base.tol_rk4);
    pick(tol_bruteforce, base.tol_bruteforce);
    pick(samples, base.samples);
    pick(rk4_steps, base.rk4_steps);
    pick(bf_stride, base.bf_stride);
    pick(near_zero, base.near_zero);
    pick(cross_check, base.cross_check);
  }
};

inline std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::ConfigError, flag + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

inline Vector3r<double> parse_vec3(const std::string& text, const std::string& flag) {
  const auto v = parse_number_list(text, flag);
  if (v.size() != 3) throw Error(Errc::ConfigError, flag + ": expected 3 components");
  return Vector3r<double>(v[0], v[1], v[2]);
}

inline std::vector<double> parse_sweep(const std::string& text) {
  // "a:b:step" inclusive of both ends (within half a step)
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3 || parts[2] <= 0)
    throw Error(Errc::ConfigError, "--sweep-gamma: expected a:b:step with step > 0");
  std::vector<double> values;
  for (long i = 0;; ++i) {
    const double v = parts[0] + double(i) * parts[2];
    if (v > parts[1] + parts[2] / 2) break;
    values.push_back(v);
  }
  if (values.empty()) throw Error(Errc::ConfigError, "--sweep-gamma: empty range");
  return values;
}

RawConfig load_json_config(const std::string& path);

inline RunConfig finalize(const RawConfig& raw) {
  RunConfig cfg;
  if (!raw.scenario) throw Error(Errc::ConfigError, "--scenario is required");
  if (*raw.scenario == "bell-zero-double")
    cfg.scenario.kind = ScenarioKind::BellZeroDouble;
  else if (*raw.scenario == "single-excitation")
    cfg.scenario.kind = ScenarioKind::SingleExcitation;
  else if (*raw.scenario == "symmetric")
    cfg.scenario.kind = ScenarioKind::SymmetricBell;
  else
    throw Error(Errc::ConfigError, "--scenario: unknown value '" + *raw.scenario + "'");
  cfg.scenario.near_zero_separation = raw.near_zero.value_or(false);

  if (raw.gamma && raw.separation)
    throw Error(Errc::ConfigError, "--gamma and --separation are mutually exclusive");
  if (cfg.scenario.near_zero_separation && (raw.gamma || raw.separation))
    throw Error(Errc::ConfigError, "--near-zero fixes gamma; drop --gamma/--separation");

  cfg.eta = raw.eta.value_or(0.0);
  if (raw.separation) {
    Vector3r<double> sep;
    const auto comps = parse_number_list(*raw.separation, "--separation");
    if (comps.size() == 1) {
      Vector3r<double> dir(1, 0, 0);
      if (raw.direction) dir = parse_vec3(*raw.direction, "--direction");
      const double n = dir.norm();
      if (n <= 0) throw Error(Errc::ConfigError, "--direction: zero vector");
      sep = comps[0] * dir / n;
    } else if (comps.size() == 3) {
      sep = Vector3r<double>(comps[0], comps[1], comps[2]);
    } else {
      throw Error(Errc::ConfigError, "--separation: expected a scalar or 3 components");
    }
    if (!raw.dipole) throw Error(Errc::ConfigError, "--separation requires --dipole");
    Vector3r<double> mu = parse_vec3(*raw.dipole, "--dipole");
    const double n = mu.norm();
    if (n <= 0) throw Error(Errc::ConfigError, "--dipole: zero vector");
    try {
      cfg.geometry = AtomPairGeometry<double>::validated(sep, mu / n);
    } catch (const Error& e) {
      throw Error(Errc::ConfigError, e.what());
    }
    if (raw.eta) throw Error(Errc::ConfigError, "--eta conflicts with geometry input");
  } else if (cfg.scenario.near_zero_separation) {
    cfg.params = CollectiveParams<double>{1.0, cfg.eta};
  } else if (raw.gamma) {
    try {
      cfg.params = CollectiveParams<double>::validated(*raw.gamma, cfg.eta);
    } catch (const Error& e) {
      throw Error(Errc::ConfigError, std::string("--gamma: ") + e.what());
    }
  } else if (!raw.sweep_gamma) {
    throw Error(Errc::ConfigError, "one of --gamma, --separation or --sweep-gamma is required");
  }

  cfg.tau_max = raw.tau_max.value_or(10.0);
  if (!(cfg.tau_max > 0)) throw Error(Errc::ConfigError, "--tau-max must be > 0");
  cfg.samples = raw.samples.value_or(1000);
  if (cfg.samples < 2) throw Error(Errc::ConfigError, "--samples must be >= 2");

  if (raw.format) {
    if (*raw.format == "csv")
      cfg.format = OutputFormat::csv;
    else if (*raw.format == "json")
      cfg.format = OutputFormat::json;
    else
      throw Error(Errc::ConfigError, "--format: expected csv or json");
  }
  cfg.cross_check = raw.cross_check.value_or(false);
  if (raw.rk4_steps) {
    if (*raw.rk4_steps < 1) throw Error(Errc::ConfigError, "--rk4-steps must be >= 1");
    cfg.rk4_steps = raw.rk4_steps;
  }
  if (raw.sweep_gamma) {
    if (raw.gamma || raw.separation || cfg.scenario.near_zero_separation)
      throw Error(Errc::ConfigError, "--sweep-gamma conflicts with --gamma/--separation/--near-zero");
    if (cfg.cross_check)
      throw Error(Errc::ConfigError, "--cross-check runs a single parameter set, not a sweep");
    cfg.sweep_gamma = parse_sweep(*raw.sweep_gamma);
    for (double g : cfg.sweep_gamma)
      if (std::abs(g) > 1.0 + 1e-12)
        throw Error(Errc::ConfigError, "--sweep-gamma: |gamma| > 1 at " + format_number(g));
    cfg.params = CollectiveParams<double>{cfg.sweep_gamma.front(), cfg.eta};
  }
  if (!cfg.params && !cfg.geometry && cfg.sweep_gamma.empty())
    throw Error(Errc::ConfigError, "no collective parameters supplied");
  if (raw.out) cfg.out_path = *raw.out;
  cfg.tol_analytic = raw.tol_analytic.value_or(1e-10);
  cfg.tol_rk4 = raw.tol_rk4.value_or(1e-7);
  cfg.tol_bruteforce = raw.tol_bruteforce.value_or(1e-3);
  cfg.bf_stride = raw.bf_stride.value_or(0);
  if (cfg.bf_stride < 0) throw Error(Errc::ConfigError, "--bf-stride must be >= 0");
  return cfg;
}

}  // namespace detail

// Parses a flag-style argument list (without argv[0]); when --config names a
// JSON file its kebab-case keys fill in whatever the flags leave unset.
// Returns nullopt when help was requested (help text goes to `help_out`).
std::optional<RunConfig> parse_config(const std::vector<std::string>& args,
                                      std::ostream& help_out);

inline RunConfig parse_config(const std::vector<std::string>& args) {
  std::ostringstream sink;
  auto cfg = parse_config(args, sink);
  if (!cfg) throw Error(Errc::ConfigError, "help requested");
  return *cfg;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

struct CrossCheckRow {
  double tau{};
  CorrelationReport<double> closed;
  double dev_state_generic{};  // max |scenario closed-form state - evolution pipeline state|
  double dev_state_rk4{};      // max |closed-form state - RK4 state|
  double dev_concurrence{}, dev_tqd{}, dev_lqu{};
  std::optional<double> dev_tqd_bf, dev_lqu_bf;  // brute-force rows only
  bool pass = true;
};

struct CrossCheckSummary {
  bool pass = true;
  std::string worst_name;
  double worst_value = 0;
  double worst_tau = 0;
  double worst_tol = 0;
};

namespace detail {

struct ResolvedParams {
  CollectiveParams<double> params{0, 0};
  bool from_geometry = false;
  bool eta_diverging = false;
};

inline ResolvedParams resolve_params(const RunConfig& cfg) {
  ResolvedParams out;
  if (cfg.geometry) {
    out.from_geometry = true;
    out.params = collective_params_from_geometry(*cfg.geometry, &out.eta_diverging);
  } else {
    out.params = *cfg.params;
  }
  return out;
}

inline double tau_at(const RunConfig& cfg, long i) {
  return cfg.tau_max * double(i) / double(cfg.samples - 1);
}

void write_header_comments(std::ostream& os, const RunConfig& cfg, const ResolvedParams& rp);
std::vector<CrossCheckRow> run_cross_check_rows(const RunConfig& cfg,
                                                const CollectiveParams<double>& params,
                                                CrossCheckSummary& summary);

}  // namespace detail

// Emits the scenario time series for the resolved configuration.
void run_scenario(const RunConfig& cfg, std::ostream& os);

// Runs closed form vs generic pipeline vs RK4 (vs brute force on a strided
// subsample) for every tau sample; returns the overall verdict.
CrossCheckSummary cross_check(const RunConfig& cfg, std::ostream& os);

}  // namespace dicke
