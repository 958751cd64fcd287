#include "pseudomode/run_config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "pseudomode/oracle.hpp"
#include "pseudomode/parallel.hpp"

namespace pm {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) invalid(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(where + "." + key + " must be finite");
  return d;
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) invalid(where + "." + key + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) invalid(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) invalid(where + "." + key + " must be a string");
  return v.get<std::string>();
}

cplx get_complex(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  invalid(where + " must be a number or a [re, im] pair");
}

std::vector<double> get_number_list(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_array()) invalid(where + "." + key + " must be an array");
  if (v.empty()) invalid(where + "." + key + " must not be empty");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) invalid(where + "." + key + " must contain numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

ReportField parse_field(const std::string& s) {
  for (ReportField f : {ReportField::ratio, ReportField::kappa, ReportField::sigma, ReportField::extra,
                        ReportField::f_norm})
    if (s == field_name(f)) return f;
  invalid("unknown fit field '" + s + "'");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Abscissa of a path point: lambda (real axis), b (curve, singular), a (decaying), h (semiclassical).
std::string point_label(const PathPoint& pt) {
  std::ostringstream os;
  os << "lambda = " << num(pt.lambda.real()) << (pt.lambda.imag() < 0 ? " - " : " + ") << num(std::abs(pt.lambda.imag()))
     << "i";
  if (pt.h) os << " (h = " << num(*pt.h) << ")";
  return os.str();
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"potential", "regime", "mode", "n", "path", "cutoff", "mollify", "expansion", "oracle",
                              "fit", "output"});
  RunConfig cfg;
  if (!root.contains("potential")) invalid("missing potential block");
  const json& pot = root["potential"];
  check_keys(pot, "potential", {"name", "params", "coeffs"});
  if (!pot.contains("name")) invalid("potential.name is required");
  cfg.potential_name = get_string(pot, "name", "potential");
  if (pot.contains("params")) {
    check_keys(pot["params"], "potential.params",
               {"gamma", "beta", "re_coeff", "mu", "alpha", "c", "re", "im"});
    for (const auto& [key, value] : pot["params"].items())
      cfg.potential_params.scalars[key] = get_number(pot["params"], key, "potential.params");
  }
  if (pot.contains("coeffs")) {
    if (!pot["coeffs"].is_array() || pot["coeffs"].empty()) invalid("potential.coeffs must be a nonempty array");
    for (const json& c : pot["coeffs"]) cfg.potential_params.coeffs.push_back(get_complex(c, "potential.coeffs"));
  }
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), cfg.potential_name) == names.end())
    invalid("unknown potential '" + cfg.potential_name + "'");

  if (!root.contains("regime")) invalid("regime is required");
  cfg.regime = parse_regime(get_string(root, "regime", "config"));
  if (root.contains("mode")) {
    try {
      cfg.mode = parse_mode(get_string(root, "mode", "config"));
    } catch (const Error& e) {
      invalid(e.what());
    }
  }
  if (root.contains("n")) {
    cfg.n = get_int(root, "n", "config");
    if (cfg.n < 0 || cfg.n > 8) invalid("n must lie in [0, 8]");
  }

  if (!root.contains("path")) invalid("path block is required");
  const json& path = root["path"];
  check_keys(path, "path", {"lo", "hi", "count", "values", "exponent", "h", "z", "x0", "sc_eps", "sing_eps"});
  if (path.contains("lo")) cfg.path.lo = get_number(path, "lo", "path");
  if (path.contains("hi")) cfg.path.hi = get_number(path, "hi", "path");
  if (path.contains("count")) cfg.path.count = get_int(path, "count", "path");
  if (path.contains("values")) cfg.path.values = get_number_list(path, "values", "path");
  if (path.contains("exponent")) cfg.path.exponent = get_number(path, "exponent", "path");
  if (path.contains("h")) cfg.path.h_values = get_number_list(path, "h", "path");
  if (path.contains("z")) cfg.path.z = get_complex(path["z"], "path.z");
  if (path.contains("x0")) cfg.path.x0 = get_number(path, "x0", "path");
  if (path.contains("sc_eps")) cfg.path.sc_eps = get_number(path, "sc_eps", "path");
  if (path.contains("sing_eps")) cfg.path.sing_eps = get_number(path, "sing_eps", "path");
  if (cfg.regime == Regime::semiclassical) {
    if (cfg.path.h_values.empty()) invalid("semiclassical path needs a nonempty h list");
  } else if (cfg.path.values.empty()) {
    if (!(cfg.path.lo > 0.0 && cfg.path.hi >= cfg.path.lo)) invalid("path needs 0 < lo <= hi");
    if (cfg.path.count < 1) invalid("path.count must be positive");
  }

  if (root.contains("cutoff")) {
    const json& c = root["cutoff"];
    check_keys(c, "cutoff", {"eps1", "eps2"});
    if (c.contains("eps1")) cfg.path.widths.eps1 = get_number(c, "eps1", "cutoff");
    if (c.contains("eps2")) cfg.path.widths.eps2 = get_number(c, "eps2", "cutoff");
    if (cfg.path.widths.eps1 && *cfg.path.widths.eps1 <= 0.0) invalid("cutoff.eps1 must be positive");
    if (cfg.path.widths.eps2 && *cfg.path.widths.eps2 <= 0.0) invalid("cutoff.eps2 must be positive");
  }
  if (root.contains("mollify")) {
    const json& m = root["mollify"];
    check_keys(m, "mollify", {"alpha_minus", "alpha_plus", "alpha_zero"});
    if (m.contains("alpha_minus")) cfg.mollify.alpha_minus = get_number(m, "alpha_minus", "mollify");
    if (m.contains("alpha_plus")) cfg.mollify.alpha_plus = get_number(m, "alpha_plus", "mollify");
    if (m.contains("alpha_zero")) cfg.mollify.alpha_zero = get_number(m, "alpha_zero", "mollify");
    for (double a : {cfg.mollify.alpha_minus, cfg.mollify.alpha_plus, cfg.mollify.alpha_zero})
      if (!(a > 0.0 && a < 1.0)) invalid("mollify exponents must lie in (0, 1)");
  }
  if (root.contains("expansion")) {
    const json& e = root["expansion"];
    check_keys(e, "expansion", {"quad_tol", "min_nodes", "grid_refine"});
    if (e.contains("quad_tol")) cfg.quad_tol = get_number(e, "quad_tol", "expansion");
    if (e.contains("min_nodes")) cfg.min_nodes = get_int(e, "min_nodes", "expansion");
    if (e.contains("grid_refine")) cfg.grid_refine = get_number(e, "grid_refine", "expansion");
    if (!(cfg.quad_tol > 1e-14 && cfg.quad_tol < 1e-3)) invalid("expansion.quad_tol must lie in (1e-14, 1e-3)");
    if (cfg.min_nodes < 10) invalid("expansion.min_nodes must be at least 10");
    if (!(cfg.grid_refine >= 1.0)) invalid("expansion.grid_refine must be >= 1");
  }
  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    check_keys(o, "oracle", {"enabled", "step", "max_size"});
    if (o.contains("enabled")) cfg.oracle = get_bool(o, "enabled", "oracle");
    if (o.contains("step")) {
      cfg.oracle_step = get_number(o, "step", "oracle");
      if (!(*cfg.oracle_step > 0.0)) invalid("oracle.step must be positive");
    }
    if (o.contains("max_size")) {
      const int m = get_int(o, "max_size", "oracle");
      if (m < 10) invalid("oracle.max_size must be at least 10");
      cfg.oracle_max_size = static_cast<std::size_t>(m);
    }
    if (cfg.oracle && cfg.mode != ResidualMode::plain) invalid("the oracle supports plain mode only");
    if (cfg.oracle && cfg.regime == Regime::semiclassical) invalid("the oracle does not run on semiclassical paths");
  }
  if (root.contains("fit")) {
    const json& f = root["fit"];
    check_keys(f, "fit", {"field"});
    if (f.contains("field")) cfg.fit_field = parse_field(get_string(f, "field", "fit"));
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"dir", "termdump"});
    if (o.contains("dir")) cfg.output_dir = get_string(o, "dir", "output");
    if (o.contains("termdump")) cfg.termdump = get_bool(o, "termdump", "output");
  }
  if ((cfg.mode == ResidualMode::ignore_w || cfg.mode == ResidualMode::mollified) &&
      cfg.potential_name != "sgn_imag_split" && cfg.potential_name != "floor_steps")
    invalid(std::string(mode_name(cfg.mode)) + " mode needs a split potential (sgn_imag_split or floor_steps)");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

RunResult execute_run(const RunConfig& cfg) {
  SweepSetup setup;
  setup.mode = cfg.mode;
  setup.mollify = cfg.mollify;
  setup.cfg.n = cfg.n;
  setup.cfg.quad_tol = cfg.quad_tol;
  setup.cfg.min_nodes = cfg.min_nodes;
  setup.cfg.grid_refine = cfg.grid_refine;
  if (cfg.mode == ResidualMode::ignore_w || cfg.mode == ResidualMode::mollified) {
    setup.split = split_singular(cfg.potential_name, cfg.potential_params);
    setup.potential = setup.split->v_regular;
  } else {
    setup.potential = make_builtin(cfg.potential_name, cfg.potential_params);
  }
  const LambdaPath path = make_path(cfg.regime, *setup.potential, cfg.path, cfg.potential_params.get("alpha", 3.0));

  // Points run in parallel; each failure is tagged with its point.
  std::vector<PseudomodeGrid> grids(path.points.size());
  for_each_task(ExecPolicy::parallel, path.points.size(), [&](std::size_t i) {
    LambdaPath single = path;
    single.points = {path.points[i]};
    try {
      grids[i] = std::move(assemble_on_path(single, setup, ExecPolicy::serial).front());
    } catch (const Error& e) {
      throw Error(e.code(), "at " + point_label(path.points[i]) + ": " + e.what());
    }
  });

  RunResult out;
  const auto reports = report_path(path, grids);
  for (const auto& r : reports) out.rows.push_back(PointRow{r, std::nullopt, std::nullopt, std::nullopt});

  if (cfg.oracle) {
    for (std::size_t i = 0; i < path.points.size(); ++i) {
      const PathPoint& pt = path.points[i];
      PointRow& row = out.rows[i];
      const double lam_abs = std::abs(pt.lambda);
      const double h = cfg.oracle_step ? *cfg.oracle_step : oracle_step(lam_abs, row.report.ratio);
      const double span = pt.cutoff.delta_minus + pt.cutoff.delta_plus +
                          0.5 * std::max(pt.cutoff.Delta_minus, pt.cutoff.Delta_plus) + 20.0 * h;
      if (span / h > static_cast<double>(cfg.oracle_max_size)) {
        row.floor_limited = true;
        continue;
      }
      ExpansionConfig ec = setup.cfg;
      try {
        const OracleCheck oc = oracle_cross_check(*setup.potential, pt.lambda, ec, pt.cutoff, h, row.report.ratio);
        row.oracle_ratio = oc.disc_ratio_richardson;
        row.floor_limited = oc.floor_limited;
        row.oracle_gap = oc.relative_gap;
        if (!oc.floor_limited && oc.relative_gap > 0.1) out.oracle_ok = false;
      } catch (const Error& e) {
        throw Error(e.code(), "oracle at " + point_label(pt) + ": " + e.what());
      }
    }
  }

  if (cfg.regime == Regime::semiclassical) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < grids.size(); ++i) {
      const double h = *path.points[i].h;
      lx.push_back(-std::log(h));
      ly.push_back(cfg.fit_field == ReportField::ratio
                       ? semiclassical_log_ratio(grids[i], *setup.potential, cfg.path.z, h)
                       : log_field(reports[i], cfg.fit_field));
    }
    out.fit = rate_fit(lx, ly);
    out.fit_abscissa = "log(1/h)";
  } else {
    out.fit = rate_fit(reports, cfg.fit_field);
    out.fit_abscissa = "log|lambda|";
  }

  // Polynomial-like real-axis runs: ideal bound and the bound with the eps1 correction.
  const PotentialMeta& meta = setup.potential->meta();
  if (cfg.regime == Regime::real_axis && cfg.mode == ResidualMode::plain && meta.gamma_im && *meta.gamma_im > 0.0 &&
      meta.nu_plus == -1.0) {
    const double gamma = *meta.gamma_im;
    const double omega = std::max(gamma, meta.beta_re.value_or(0.0));
    const double eps1 = cfg.path.widths.eps1.value_or(meta.eps1);
    const double excess = omega - cfg.n - 1.0;
    const double width_excess = 1.0 / (2.0 * (gamma + 1.0 - eps1)) - 1.0 / (2.0 * (gamma + 1.0));
    out.ideal_slope = -(cfg.n + 1.0) / 2.0 + (excess > 0.0 ? excess / (2.0 * (gamma + 1.0)) : 0.0);
    out.eps_adjusted_slope = *out.ideal_slope + (excess > 0.0 ? width_excess * excess : 0.0);
  }
  return out;
}

std::string reports_csv(const RunResult& result) {
  bool has_xb = false, has_h = false, has_oracle = false;
  for (const auto& row : result.rows) {
    has_xb = has_xb || row.report.x_b.has_value();
    has_h = has_h || row.report.h.has_value();
    has_oracle = has_oracle || row.floor_limited.has_value();
  }
  std::ostringstream os;
  os << "lambda_re,lambda_im,ratio,kappa,sigma,extra,f_norm,delta_minus,delta_plus";
  if (has_xb) os << ",x_b";
  if (has_h) os << ",h";
  if (has_oracle) os << ",oracle_ratio,floor_limited";
  os << '\n';
  for (const auto& row : result.rows) {
    const ResidualReport& r = row.report;
    os << num(r.lambda.real()) << ',' << num(r.lambda.imag()) << ',' << num(r.ratio) << ',' << num(r.kappa) << ','
       << num(r.sigma) << ',' << num(r.extra) << ',' << num(r.f_norm) << ',' << num(r.delta_minus) << ','
       << num(r.delta_plus);
    if (has_xb) os << ',' << (r.x_b ? num(*r.x_b) : "");
    if (has_h) os << ',' << (r.h ? num(*r.h) : "");
    if (has_oracle)
      os << ',' << (row.oracle_ratio ? num(*row.oracle_ratio) : "") << ','
         << (row.floor_limited ? (*row.floor_limited ? "true" : "false") : "");
    os << '\n';
  }
  return os.str();
}

std::string fit_json(const RunConfig& cfg, const RunResult& result) {
  json j;
  j["schema_version"] = 1;
  j["field"] = field_name(cfg.fit_field);
  j["abscissa"] = result.fit_abscissa;
  j["slope"] = result.fit.slope;
  j["intercept"] = result.fit.intercept;
  j["fit_residual"] = result.fit.residual_of_fit;
  j["points_used"] = result.fit.points_used;
  j["transient_dropped"] = result.fit.transient_dropped;
  j["regime"] = regime_name(cfg.regime);
  j["mode"] = mode_name(cfg.mode);
  j["n"] = cfg.n;
  if (result.ideal_slope) {
    j["bounds"] = {{"ideal", *result.ideal_slope}, {"eps_adjusted", *result.eps_adjusted_slope}};
  }
  if (cfg.oracle) j["oracle_ok"] = result.oracle_ok;
  return j.dump(2) + "\n";
}

void write_run_outputs(const RunConfig& cfg, const RunResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) invalid("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(cfg.output_dir) / name, std::ios::binary);
    if (!out) invalid("cannot write " + name + " in '" + cfg.output_dir + "'");
    out << body;
  };
  write("reports.csv", reports_csv(result));
  write("fit.json", fit_json(cfg, result));
  if (cfg.termdump) write("termdump.txt", gen_remainder(cfg.n).to_string());
}

int run_command(const std::string& config_path, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const RunResult result = execute_run(cfg);
    write_run_outputs(cfg, result);
    log << "wrote " << result.rows.size() << " rows to " << cfg.output_dir << "; " << field_name(cfg.fit_field)
        << " slope " << result.fit.slope << '\n';
    if (!result.oracle_ok) {
      log << "oracle check failed: extrapolated residual differs from the analytic ratio by more than 10%\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    log << (is_config_error(e.code()) ? "config error: " : "numerical error: ") << e.what() << '\n';
    return is_config_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    log << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace pm
