#include "dicke/run.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <iomanip>

namespace dicke {
namespace detail {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string json_number_or_list(const ordered_json& j, const std::string& key) {
  if (j.is_number()) return format_number(j.get<double>());
  if (j.is_array()) {
    std::vector<double> v;
    for (const auto& e : j) {
      if (!e.is_number()) throw Error(Errc::ConfigError, "config key '" + key + "': expected numbers");
      v.push_back(e.get<double>());
    }
    return join_numbers(v);
  }
  if (j.is_string()) return j.get<std::string>();
  throw Error(Errc::ConfigError, "config key '" + key + "': expected number, list or string");
}

}  // namespace

RawConfig load_json_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "config: cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(Errc::ConfigError, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::ConfigError, "config: top level must be an object");
  RawConfig raw;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "scenario") raw.scenario = value.get<std::string>();
      else if (key == "near-zero") raw.near_zero = value.get<bool>();
      else if (key == "gamma") raw.gamma = value.get<double>();
      else if (key == "eta") raw.eta = value.get<double>();
      else if (key == "separation") raw.separation = json_number_or_list(value, key);
      else if (key == "dipole") raw.dipole = json_number_or_list(value, key);
      else if (key == "direction") raw.direction = json_number_or_list(value, key);
      else if (key == "tau-max") raw.tau_max = value.get<double>();
      else if (key == "samples") raw.samples = value.get<long>();
      else if (key == "format") raw.format = value.get<std::string>();
      else if (key == "cross-check") raw.cross_check = value.get<bool>();
      else if (key == "rk4-steps") raw.rk4_steps = value.get<long>();
      else if (key == "sweep-gamma") raw.sweep_gamma = json_number_or_list(value, key);
      else if (key == "out") raw.out = value.get<std::string>();
      else if (key == "tol-analytic") raw.tol_analytic = value.get<double>();
      else if (key == "tol-rk4") raw.tol_rk4 = value.get<double>();
      else if (key == "tol-bruteforce") raw.tol_bruteforce = value.get<double>();
      else if (key == "bf-stride") raw.bf_stride = value.get<long>();
      else throw Error(Errc::ConfigError, "config: unknown key '" + key + "'");
    } catch (const ordered_json::exception& e) {
      throw Error(Errc::ConfigError, "config key '" + key + "': " + e.what());
    }
  }
  return raw;
}

}  // namespace detail

std::optional<RunConfig> parse_config(const std::vector<std::string>& args,
                                      std::ostream& help_out) {
  CLI::App app{"dicke-sim: correlation dynamics of two atoms decaying into a common vacuum"};
  std::string scenario, separation, dipole, direction, sweep, format, out, config_path;
  double gamma{}, eta{}, tau_max{}, tol_a{}, tol_r{}, tol_b{};
  long samples{}, rk4_steps{}, bf_stride{};
  bool near_zero{false}, cross{false};

  auto* o_scenario =
      app.add_option("--scenario", scenario, "bell-zero-double | single-excitation | symmetric");
  auto* o_near = app.add_flag("--near-zero", near_zero, "zero-separation (gamma -> 1) limit");
  auto* o_gamma = app.add_option("--gamma", gamma, "collective damping ratio Gamma_12/Gamma");
  auto* o_eta = app.add_option("--eta", eta, "dipole-dipole shift Omega_12/Gamma");
  auto* o_sep = app.add_option("--separation", separation,
                               "atom separation in wavelength units (scalar or x,y,z)");
  auto* o_dip = app.add_option("--dipole", dipole, "dipole direction x,y,z");
  auto* o_dir = app.add_option("--direction", direction,
                               "separation direction for scalar --separation (default 1,0,0)");
  auto* o_tau = app.add_option("--tau-max", tau_max, "end of the time grid (default 10)");
  auto* o_samples = app.add_option("--samples", samples, "number of tau samples (default 1000)");
  auto* o_format = app.add_option("--format", format, "csv | json (default csv)");
  auto* o_cross = app.add_flag("--cross-check", cross, "run the oracle cross-check");
  auto* o_rk4 = app.add_option("--rk4-steps", rk4_steps, "total RK4 steps over [0, tau-max]");
  auto* o_sweep = app.add_option("--sweep-gamma", sweep, "gamma sweep a:b:step");
  auto* o_out = app.add_option("--out", out, "output path (default stdout)");
  auto* o_config = app.add_option("--config", config_path, "JSON config file (flags override)");
  auto* o_tol_a = app.add_option("--tol-analytic", tol_a, "closed form vs generic tolerance");
  auto* o_tol_r = app.add_option("--tol-rk4", tol_r, "closed form vs RK4 tolerance");
  auto* o_tol_b = app.add_option("--tol-bruteforce", tol_b, "closed form vs brute force tolerance");
  auto* o_bf = app.add_option("--bf-stride", bf_stride, "brute-force row stride (0 = auto)");

  std::vector<const char*> argv;
  argv.push_back("dicke-sim");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(Errc::ConfigError, e.what());
  }

  detail::RawConfig cli;
  if (o_scenario->count()) cli.scenario = scenario;
  if (o_near->count()) cli.near_zero = near_zero;
  if (o_gamma->count()) cli.gamma = gamma;
  if (o_eta->count()) cli.eta = eta;
  if (o_sep->count()) cli.separation = separation;
  if (o_dip->count()) cli.dipole = dipole;
  if (o_dir->count()) cli.direction = direction;
  if (o_tau->count()) cli.tau_max = tau_max;
  if (o_samples->count()) cli.samples = samples;
  if (o_format->count()) cli.format = format;
  if (o_cross->count()) cli.cross_check = cross;
  if (o_rk4->count()) cli.rk4_steps = rk4_steps;
  if (o_sweep->count()) cli.sweep_gamma = sweep;
  if (o_out->count()) cli.out = out;
  if (o_tol_a->count()) cli.tol_analytic = tol_a;
  if (o_tol_r->count()) cli.tol_rk4 = tol_r;
  if (o_tol_b->count()) cli.tol_bruteforce = tol_b;
  if (o_bf->count()) cli.bf_stride = bf_stride;
  if (o_config->count()) cli.merge_over(detail::load_json_config(config_path));
  return detail::finalize(cli);
}

namespace detail {

const char* scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::BellZeroDouble: return "bell-zero-double";
    case ScenarioKind::SingleExcitation: return "single-excitation";
    case ScenarioKind::SymmetricBell: return "symmetric";
  }
  return "?";
}

void write_header_comments(std::ostream& os, const RunConfig& cfg, const ResolvedParams& rp) {
  os << "# dicke-sim\n";
  os << "# scenario = " << scenario_name(cfg.scenario.kind) << "\n";
  os << "# near-zero = " << (cfg.scenario.near_zero_separation ? "true" : "false") << "\n";
  if (rp.from_geometry) {
    os << "# separation = " << join_numbers({cfg.geometry->separation(0),
                                             cfg.geometry->separation(1),
                                             cfg.geometry->separation(2)}) << "\n";
    os << "# dipole = " << join_numbers({cfg.geometry->dipole_direction(0),
                                         cfg.geometry->dipole_direction(1),
                                         cfg.geometry->dipole_direction(2)}) << "\n";
    os << "# gamma = " << format_number(rp.params.gamma) << " (from geometry)\n";
    os << "# eta = " << format_number(rp.params.eta) << " (from geometry)\n";
    if (rp.eta_diverging) os << "# warning: |eta| > 1e3 (near-zero separation regime)\n";
  } else if (cfg.sweep_gamma.empty()) {
    os << "# gamma = " << format_number(rp.params.gamma) << "\n";
    os << "# eta = " << format_number(rp.params.eta) << "\n";
  } else {
    os << "# sweep-gamma = " << join_numbers(cfg.sweep_gamma) << "\n";
    os << "# eta = " << format_number(cfg.eta) << "\n";
  }
}

ordered_json config_json(const RunConfig& cfg, const ResolvedParams& rp) {
  ordered_json j;
  j["scenario"] = scenario_name(cfg.scenario.kind);
  j["near-zero"] = cfg.scenario.near_zero_separation;
  if (rp.from_geometry) {
    j["separation"] = {cfg.geometry->separation(0), cfg.geometry->separation(1),
                       cfg.geometry->separation(2)};
    j["dipole"] = {cfg.geometry->dipole_direction(0), cfg.geometry->dipole_direction(1),
                   cfg.geometry->dipole_direction(2)};
    if (rp.eta_diverging) j["eta-diverging"] = true;
  }
  if (cfg.sweep_gamma.empty()) {
    j["gamma"] = rp.params.gamma;
    j["eta"] = rp.params.eta;
  } else {
    j["eta"] = cfg.eta;
  }
  return j;
}

ordered_json report_json(const CorrelationReport<double>& r) {
  ordered_json row;
  row["tau"] = r.tau;
  row["concurrence"] = r.concurrence;
  row["tqd"] = r.tqd;
  row["lqu"] = r.lqu;
  row["p_plus"] = r.p_plus;
  row["p_minus"] = r.p_minus;
  return row;
}

void write_report_csv(std::ostream& os, const CorrelationReport<double>& r) {
  os << format_number(r.tau) << ',' << format_number(r.concurrence) << ','
     << format_number(r.tqd) << ',' << format_number(r.lqu) << ',' << format_number(r.p_plus)
     << ',' << format_number(r.p_minus);
}

std::vector<CorrelationReport<double>> series(const RunConfig& cfg,
                                              const CollectiveParams<double>& params) {
  std::vector<CorrelationReport<double>> rows;
  rows.reserve(cfg.samples);
  for (long i = 0; i < cfg.samples; ++i)
    rows.push_back(scenario_correlations(cfg.scenario, params, tau_at(cfg, i)));
  return rows;
}

}  // namespace detail

void run_scenario(const RunConfig& cfg, std::ostream& os) {
  const auto rp = detail::resolve_params(cfg);
  const bool sweep = !cfg.sweep_gamma.empty();

  if (cfg.format == OutputFormat::csv) {
    detail::write_header_comments(os, cfg, rp);
    const auto emit_block = [&](const CollectiveParams<double>& p) {
      os << "tau,concurrence,tqd,lqu,p_plus,p_minus\n";
      for (const auto& r : detail::series(cfg, p)) {
        detail::write_report_csv(os, r);
        os << '\n';
      }
    };
    if (!sweep) {
      emit_block(rp.params);
    } else {
      for (double g : cfg.sweep_gamma) {
        os << "# gamma = " << format_number(g) << "\n";
        emit_block(CollectiveParams<double>{g, cfg.eta});
      }
    }
    return;
  }

  detail::ordered_json j = detail::config_json(cfg, rp);
  if (!sweep) {
    auto& rows = j["rows"] = detail::ordered_json::array();
    for (const auto& r : detail::series(cfg, rp.params)) rows.push_back(detail::report_json(r));
  } else {
    auto& blocks = j["sweep"] = detail::ordered_json::array();
    for (double g : cfg.sweep_gamma) {
      detail::ordered_json block;
      block["gamma"] = g;
      auto& rows = block["rows"] = detail::ordered_json::array();
      for (const auto& r : detail::series(cfg, CollectiveParams<double>{g, cfg.eta}))
        rows.push_back(detail::report_json(r));
      blocks.push_back(std::move(block));
    }
  }
  os << j.dump(2) << '\n';
}

namespace detail {

std::vector<CrossCheckRow> run_cross_check_rows(const RunConfig& cfg,
                                                const CollectiveParams<double>& params,
                                                CrossCheckSummary& summary) {
  // Near-zero runs check the limit formulas against the exact gamma = 1 dynamics.
  const CollectiveParams<double> p =
      cfg.scenario.near_zero_separation ? CollectiveParams<double>{1.0, params.eta} : params;
  const long stride =
      cfg.bf_stride > 0 ? cfg.bf_stride : std::max<long>(1, cfg.samples / 8);
  const long total_steps =
      cfg.rk4_steps ? *cfg.rk4_steps : default_rk4_steps(cfg.tau_max, p.eta);

  const CollectiveState<double> s0 = initial_collective_state<double>(cfg.scenario.kind);
  DensityMatrix<double> rk4_state = collective_to_product(s0).to_density();
  double rk4_tau = 0;

  auto consider = [&](const char* name, double dev, double tol, double tau) {
    if (dev > tol && (summary.pass || dev / tol > summary.worst_value / summary.worst_tol)) {
      summary.pass = false;
      summary.worst_name = name;
      summary.worst_value = dev;
      summary.worst_tol = tol;
      summary.worst_tau = tau;
    }
  };

  std::vector<CrossCheckRow> rows;
  rows.reserve(cfg.samples);
  for (long i = 0; i < cfg.samples; ++i) {
    const double tau = tau_at(cfg, i);
    CrossCheckRow row;
    row.tau = tau;
    row.closed = scenario_correlations(cfg.scenario, params, tau);

    const XState<double> closed_state = scenario_state(cfg.scenario, p, tau);
    const XState<double> generic_state = collective_to_product(evolve_closed_form(s0, p, tau));
    row.dev_state_generic =
        (closed_state.to_matrix() - generic_state.to_matrix()).cwiseAbs().maxCoeff();

    if (tau > rk4_tau) {
      const long seg_steps = std::max<long>(
          1, static_cast<long>(std::ceil(double(total_steps) * (tau - rk4_tau) / cfg.tau_max)));
      rk4_state = integrate_rk4(rk4_state, p, tau - rk4_tau, seg_steps);
      rk4_tau = tau;
    }
    row.dev_state_rk4 = (closed_state.to_matrix() - rk4_state.matrix()).cwiseAbs().maxCoeff();

    const DensityMatrix<double> rho = generic_state.to_density();
    row.dev_concurrence = std::abs(row.closed.concurrence - concurrence(rho));
    row.dev_tqd = std::abs(row.closed.tqd - tqd_x(generic_state));
    row.dev_lqu = std::abs(row.closed.lqu - lqu(rho));

    if (i % stride == 0) {
      row.dev_tqd_bf = std::abs(row.closed.tqd - tqd_bruteforce(rho));
      row.dev_lqu_bf = std::abs(row.closed.lqu - lqu_bruteforce(rho));
    }

    consider("state_generic", row.dev_state_generic, cfg.tol_analytic, tau);
    consider("state_rk4", row.dev_state_rk4, cfg.tol_rk4, tau);
    consider("concurrence", row.dev_concurrence, cfg.tol_analytic, tau);
    consider("tqd", row.dev_tqd, cfg.tol_analytic, tau);
    consider("lqu", row.dev_lqu, cfg.tol_analytic, tau);
    if (row.dev_tqd_bf) consider("tqd_bruteforce", *row.dev_tqd_bf, cfg.tol_bruteforce, tau);
    if (row.dev_lqu_bf) consider("lqu_bruteforce", *row.dev_lqu_bf, cfg.tol_bruteforce, tau);
    row.pass = row.dev_state_generic <= cfg.tol_analytic &&
               row.dev_state_rk4 <= cfg.tol_rk4 && row.dev_concurrence <= cfg.tol_analytic &&
               row.dev_tqd <= cfg.tol_analytic && row.dev_lqu <= cfg.tol_analytic &&
               (!row.dev_tqd_bf || *row.dev_tqd_bf <= cfg.tol_bruteforce) &&
               (!row.dev_lqu_bf || *row.dev_lqu_bf <= cfg.tol_bruteforce);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

CrossCheckSummary cross_check(const RunConfig& cfg, std::ostream& os) {
  if (!cfg.cross_check) throw Error(Errc::ConfigError, "cross_check requires cross-check mode");
  const auto rp = detail::resolve_params(cfg);
  CrossCheckSummary summary;
  const auto rows = detail::run_cross_check_rows(cfg, rp.params, summary);

  auto opt_str = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };

  if (cfg.format == OutputFormat::csv) {
    detail::write_header_comments(os, cfg, rp);
    os << "tau,concurrence,tqd,lqu,p_plus,p_minus,dev_state_generic,dev_state_rk4,"
          "dev_concurrence,dev_tqd,dev_lqu,dev_tqd_bf,dev_lqu_bf,status\n";
    for (const auto& r : rows) {
      detail::write_report_csv(os, r.closed);
      os << ',' << format_number(r.dev_state_generic) << ',' << format_number(r.dev_state_rk4)
         << ',' << format_number(r.dev_concurrence) << ',' << format_number(r.dev_tqd) << ','
         << format_number(r.dev_lqu) << ',' << opt_str(r.dev_tqd_bf) << ','
         << opt_str(r.dev_lqu_bf) << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
    if (summary.pass) {
      os << "# cross-check: PASS\n";
    } else {
      os << "# cross-check: FAIL worst = " << summary.worst_name << " deviation "
         << format_number(summary.worst_value) << " at tau = " << format_number(summary.worst_tau)
         << " (tolerance " << format_number(summary.worst_tol) << ")\n";
    }
    return summary;
  }

  detail::ordered_json j = detail::config_json(cfg, rp);
  auto& jrows = j["rows"] = detail::ordered_json::array();
  for (const auto& r : rows) {
    detail::ordered_json row = detail::report_json(r.closed);
    row["dev_state_generic"] = r.dev_state_generic;
    row["dev_state_rk4"] = r.dev_state_rk4;
    row["dev_concurrence"] = r.dev_concurrence;
    row["dev_tqd"] = r.dev_tqd;
    row["dev_lqu"] = r.dev_lqu;
    if (r.dev_tqd_bf) row["dev_tqd_bf"] = *r.dev_tqd_bf;
    if (r.dev_lqu_bf) row["dev_lqu_bf"] = *r.dev_lqu_bf;
    row["status"] = r.pass ? "pass" : "fail";
    jrows.push_back(std::move(row));
  }
  detail::ordered_json s;
  s["pass"] = summary.pass;
  if (!summary.pass) {
    s["worst"] = summary.worst_name;
    s["deviation"] = summary.worst_value;
    s["tau"] = summary.worst_tau;
    s["tolerance"] = summary.worst_tol;
  }
  j["summary"] = std::move(s);
  os << j.dump(2) << '\n';
  return summary;
}

}  // namespace dicke
