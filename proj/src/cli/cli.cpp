#include "qcurv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "internal.hpp"
#include "qcurv/asymptotics.hpp"
#include "qcurv/curvature.hpp"
#include "qcurv/errors.hpp"
#include "qcurv/geometry.hpp"
#include "qcurv/potential.hpp"
#include "qcurv/profiles.hpp"

namespace qcurv::cli {

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<int> n;
  std::optional<std::string> profile;
  std::optional<double> rel_tol, abs_tol, tail_cut;
  std::optional<int> max_subdivisions, sphere_nodes;
  std::optional<double> r, r_min, r_max, eps;
  std::optional<int> points;
  std::vector<double> grid;
  std::optional<std::string> format;
  std::optional<std::string> suite;
};

struct GridDefaults {
  double r_min, r_max;
  int points;
};

// Thrown for problems with the invocation rather than the computation.
struct UsageError : Error {
  using Error::Error;
};

template <class T>
void apply(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

RunConfig resolve(const Flags& flags) {
  RunConfig cfg;
  if (flags.config) load_config_file(*flags.config, cfg);
  apply(flags.n, cfg.n);
  apply(flags.profile, cfg.profile);
  apply(flags.rel_tol, cfg.quadrature.rel_tol);
  apply(flags.abs_tol, cfg.quadrature.abs_tol);
  apply(flags.tail_cut, cfg.quadrature.tail_cut);
  apply(flags.max_subdivisions, cfg.quadrature.max_subdivisions);
  apply(flags.sphere_nodes, cfg.quadrature.sphere_nodes);
  apply(flags.r, cfg.r);
  apply(flags.r_min, cfg.r_min);
  apply(flags.r_max, cfg.r_max);
  apply(flags.points, cfg.points);
  apply(flags.eps, cfg.eps);
  apply(flags.format, cfg.format);
  apply(flags.suite, cfg.suite);
  if (!flags.grid.empty()) cfg.grid = flags.grid;
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  const auto suites = suite_names();
  if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end()) {
    throw UsageError("unknown suite '" + cfg.suite + "'");
  }
  cfg.quadrature.validate();
  return cfg;
}

std::vector<double> make_grid(const RunConfig& cfg, GridDefaults defaults) {
  if (!cfg.grid.empty()) {
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
      if (!(cfg.grid[i] > 0.0) || (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1]))) {
        throw UsageError("--grid radii must be positive and strictly increasing");
      }
    }
    return cfg.grid;
  }
  const double lo = cfg.r_min > 0.0 ? cfg.r_min : defaults.r_min;
  const double hi = cfg.r_max > 0.0 ? cfg.r_max : defaults.r_max;
  const int count = cfg.points > 0 ? cfg.points : defaults.points;
  if (!(hi > lo) || count < 2) throw UsageError("grid needs rmin < rmax and at least 2 points");
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return grid;
}

Json grid_json(const std::vector<double>& grid) {
  Json out = Json::array();
  for (double r : grid) out.push_back(number(r));
  return out;
}

constexpr GridDefaults kDecayGrid{2.0, 64.0, 6};
constexpr GridDefaults kNormalityGrid{0.5, 50.0, 9};
constexpr GridDefaults kDefectGrid{10.0, 1280.0, 8};
constexpr GridDefaults kAsymptoticsGrid{100.0, 1e5, 13};

Json decay_json(const DimensionContext& ctx, ProfilePtr u, const std::vector<double>& grid,
                Report* table) {
  Json out = Json::object();
  try {
    const auto margin = decay_margin(ctx, u, grid);
    out["verdict"] = to_string(margin.verdict);
    out["tail_epsilon"] = number(margin.tail_value);
    out["rows"] = pairs(margin.rows, "r", "epsilon");
    if (table) set_table(*table, {"r", "epsilon"}, margin.rows);
  } catch (const SignError& e) {
    out["verdict"] = "sign_error";
    out["message"] = e.what();
  }
  return out;
}

Report cmd_ctx(const RunConfig&, const DimensionContext& ctx) {
  Report report;
  auto& b = report.body;
  b["n"] = ctx.n;
  b["m"] = ctx.m;
  b["c_n"] = number(ctx.c_n);
  b["omega_n_minus_1"] = number(ctx.omega_n_minus_1);
  b["omega_n"] = number(ctx.omega_n);
  b["omega_n_minus_2"] = number(ctx.omega_n_minus_2);
  b["q_sphere"] = number(ctx.q_sphere);
  b["pizzetti"] = Json::array();
  for (double c : ctx.pizzetti) b["pizzetti"].push_back(number(c));
  b["d_chain"] = Json::array();
  for (double d : ctx.d_chain) b["d_chain"].push_back(number(d));
  return report;
}

Report cmd_q_curvature(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  if (!(cfg.r >= 0.0)) throw UsageError("--r must be >= 0");
  Report report;
  auto& b = report.body;
  const double r = cfg.r;
  b["profile"] = u->name();
  b["r"] = number(r);
  b["u"] = number(u->eval(r));
  b["polyharmonic"] = number(polyharmonic(ctx, u, ctx.m)->eval(r));
  b["q_curvature"] = number(q_curvature(ctx, u)(r));
  b["log_q_curvature"] = number(log_q_curvature(ctx, u)(r));
  b["density"] = number(density(ctx, u, cfg.quadrature).f(r));
  b["scalar_curvature"] = number(scalar_curvature(ctx, u)(r));
  return report;
}

Report cmd_alpha(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  const auto d = density(ctx, u, cfg.quadrature);
  const double alpha = total_alpha(ctx, d, cfg.quadrature);
  Report report;
  auto& b = report.body;
  b["profile"] = u->name();
  b["n"] = ctx.n;
  b["alpha"] = number(alpha);
  b["total_curvature"] = number(alpha * ctx.c_n);
  b["c_n"] = number(ctx.c_n);
  b["positive_beyond"] = number(d.positive_beyond);
  return report;
}

Report cmd_decay(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  const auto grid = make_grid(cfg, kDecayGrid);
  Report report;
  report.body["profile"] = u->name();
  report.body["grid"] = grid_json(grid);
  const Json decay = decay_json(ctx, u, grid, &report);
  for (const auto& [k, v] : decay.items()) report.body[k] = v;
  return report;
}

Report cmd_potential(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  if (!(cfg.r >= 0.0)) throw UsageError("--r must be >= 0");
  if (!(cfg.eps > 0.0)) throw UsageError("--eps must be > 0");
  const auto d = density(ctx, u, cfg.quadrature);
  const double r = cfg.r;
  const double alpha = total_alpha(ctx, d, cfg.quadrature);
  const double v = potential_v(ctx, d, r, cfg.quadrature);
  const double bad = bad_term_b(ctx, d, r, cfg.quadrature);
  Report report;
  auto& b = report.body;
  b["profile"] = u->name();
  b["r"] = number(r);
  b["alpha"] = number(alpha);
  b["v"] = number(v);
  b["u"] = number(u->eval(r));
  b["u_plus_v"] = number(u->eval(r) + v);
  b["bad_term"] = number(bad);
  b["eps"] = number(cfg.eps);
  if (r > 1.0) {
    b["upper_margin"] = number(v - alpha * std::log(r));
    b["lower_margin"] = number(v + bad - (alpha - cfg.eps) * std::log(r));
  }
  return report;
}

Report cmd_normality(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  const auto grid = make_grid(cfg, kNormalityGrid);
  const auto rep = normality_residual(ctx, u, cfg.quadrature, grid);
  Report report;
  auto& b = report.body;
  b["profile"] = u->name();
  b["alpha"] = number(rep.alpha);
  b["constant_estimate"] = number(rep.constant_estimate);
  b["residual_sup"] = number(rep.residual_sup);
  b["v_values"] = pairs(rep.v_values, "r", "v");
  std::vector<std::pair<double, double>> residuals;
  for (const auto& [r, v] : rep.v_values) residuals.emplace_back(r, u->eval(r) + v - rep.constant_estimate);
  b["residuals"] = pairs(residuals, "r", "residual");
  set_table(report, {"r", "v"}, rep.v_values);
  return report;
}

Report cmd_defect(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  const auto grid = make_grid(cfg, kDefectGrid);
  const auto rep = defect_extrapolate(ctx, u, cfg.quadrature, grid);
  const auto completeness = completeness_classify(ctx, u, cfg.quadrature);
  Report report;
  auto& b = report.body;
  b["profile"] = u->name();
  b["alpha"] = number(rep.alpha);
  b["defect_extrapolated"] = number(rep.defect_extrapolated);
  b["expected_defect"] = number(1.0 - rep.alpha);
  b["consistency_gap"] = number(rep.consistency_gap);
  b["fit_model"] = rep.fit_model;
  b["fit_exponent"] = number(rep.fit_exponent);
  b["fit_amplitude"] = number(rep.fit_amplitude);
  b["fit_residual"] = number(rep.fit_residual);
  b["low_confidence"] = rep.low_confidence;
  b["fallback_error"] = number(rep.fallback_error);
  b["defect_samples"] = pairs(rep.defect_samples, "r", "I");
  b["increment_quotients"] = pairs(rep.increment_quotients, "r", "quotient");
  b["decay"] = decay_json(ctx, u, make_grid(RunConfig{}, kDecayGrid), nullptr);
  Json comp = Json::object();
  comp["verdict"] = to_string(completeness.verdict);
  comp["slope"] = number(completeness.slope);
  comp["log_partial_lengths"] = pairs(completeness.log_partial_lengths, "R", "log_length");
  b["completeness"] = comp;
  set_table(report, {"r", "I"}, rep.defect_samples);
  return report;
}

Report cmd_asymptotics(const RunConfig& cfg, const DimensionContext& ctx, ProfilePtr u) {
  if (!(cfg.eps > 0.0)) throw UsageError("--eps must be > 0");
  const auto grid = make_grid(cfg, kAsymptoticsGrid);
  const auto d = density(ctx, u, cfg.quadrature);
  const auto slope = slope_estimate(*u, grid);
  const auto limit = radial_limit_check(ctx, *u, d, grid, cfg.quadrature);
  const auto bounds = bounds_check(*u, limit.alpha, cfg.eps, grid);
  Report report;
  auto& b = report.body;
  b["profile"] = u->name();
  b["alpha"] = number(limit.alpha);
  b["slope"] = number(slope.slope);
  b["intercept"] = number(slope.intercept);
  b["slope_residual"] = number(slope.slope_residual);
  b["non_logarithmic"] = slope.non_logarithmic;
  b["radial_limit"] = number(limit.limit);
  b["radial_limit_error"] = number(limit.limit_error);
  b["radial_limit_low_confidence"] = limit.low_confidence;
  b["radial_limit_gap"] = number(limit.gap);
  b["ru_prime_tail"] = pairs(limit.rows, "r", "ru_prime");
  b["eps"] = number(cfg.eps);
  b["bounds_ok"] = bounds.ok;
  b["upper_constant"] = number(bounds.upper_constant);
  b["lower_constant"] = number(bounds.lower_constant);
  b["grid"] = grid_json(grid);
  set_table(report, {"r", "ru_prime"}, limit.rows);
  return report;
}

Report cmd_catalog() {
  Report report;
  Json entries = Json::array();
  const auto add = [&](const char* selector, const char* formula, const char* alpha) {
    entries.push_back(Json{{"selector", selector}, {"u", formula}, {"alpha", alpha}});
  };
  add("sphere:<a>", "(a/2) log(2/(1+r^2)), 0 < a <= 1", "a");
  add("counterexample", "log(2/(1+r^2)) + r^2", "2");
  add("flat", "0", "0");
  add("logdecay:<b>", "-(b/2) log(1+r^2)", "b");
  add("file:<path>", "CSV samples r,u interpolated in t = r^2", "computed");
  report.body["profiles"] = entries;
  return report;
}

struct Outcome {
  Report report;
  int exit_code = 0;
};

Outcome cmd_verify(const RunConfig& cfg) {
  const auto checks = run_suite(cfg.suite, cfg.quadrature);
  Outcome outcome;
  auto& b = outcome.report.body;
  b["suite"] = cfg.suite;
  Json rows = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    rows.push_back(Json{{"suite", c.suite}, {"name", c.name}, {"value", number(c.value)},
                        {"tolerance", number(c.tolerance)}, {"passed", c.passed}});
    all = all && c.passed;
  }
  b["passed"] = all;
  b["checks"] = rows;
  outcome.exit_code = all ? 0 : 1;
  return outcome;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "qcurv: conformal factors u on R^n with metric e^{2u}|dx|^2, (-Delta)^{n/2} u = 2 Q e^{nu}.\n"
      "Profiles: sphere:<a> | counterexample | flat | logdecay:<b> | file:<path>.\n"
      "Defaults: n=4, profile=sphere:0.5, rel-tol=1e-8, abs-tol=1e-10, tail-cut=100,\n"
      "sphere-nodes=64, eps=0.1, format=json. Flags override --config values.\n"
      "QCURV_THREADS caps worker threads.",
      "qcurv"};
  app.require_subcommand(1, 1);
  Flags flags;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "TOML file with run settings");
    sub->add_option("--n", flags.n, "even dimension >= 4");
    sub->add_option("--rel-tol", flags.rel_tol, "relative quadrature tolerance");
    sub->add_option("--abs-tol", flags.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--tail-cut", flags.tail_cut, "radius where half-line tails switch to the decay model");
    sub->add_option("--max-subdivisions", flags.max_subdivisions, "adaptive quadrature subdivision budget");
    sub->add_option("--sphere-nodes", flags.sphere_nodes, "sphere rule size");
    sub->add_option("--format", flags.format, "json or csv");
  };
  const auto with_profile = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--profile", flags.profile, "profile selector");
  };
  const auto with_grid = [&](CLI::App* sub) {
    with_profile(sub);
    sub->add_option("--rmin", flags.r_min, "smallest grid radius");
    sub->add_option("--rmax", flags.r_max, "largest grid radius");
    sub->add_option("--points", flags.points, "number of geometric grid points");
    sub->add_option("--grid", flags.grid, "explicit radii (overrides rmin/rmax/points)")->delimiter(',');
  };

  auto* ctx_cmd = app.add_subcommand("ctx", "dimension constants");
  common(ctx_cmd);
  auto* q_cmd = app.add_subcommand("q-curvature", "pointwise Q, density and scalar curvature at --r");
  with_profile(q_cmd);
  q_cmd->add_option("--r", flags.r, "radius");
  auto* alpha_cmd = app.add_subcommand("alpha", "normalized total curvature");
  with_profile(alpha_cmd);
  auto* decay_cmd = app.add_subcommand("decay", "epsilon(r) = -log Q / r^2 and the decay verdict (grid 2..64, 6 points)");
  with_grid(decay_cmd);
  auto* pot_cmd = app.add_subcommand("potential", "log-kernel potential v and bad term b at --r");
  with_profile(pot_cmd);
  pot_cmd->add_option("--r", flags.r, "radius");
  pot_cmd->add_option("--eps", flags.eps, "epsilon of the lower bound");
  auto* norm_cmd = app.add_subcommand("normality", "sup |u + v - C| (grid 0.5..50, 9 points)");
  with_grid(norm_cmd);
  auto* defect_cmd = app.add_subcommand("defect", "isoperimetric defect, decay verdict, completeness (grid 10..1280, 8 points)");
  with_grid(defect_cmd);
  auto* asy_cmd = app.add_subcommand("asymptotics", "slope, r u' limit, two-sided bounds (grid 1e2..1e5, 13 points)");
  with_grid(asy_cmd);
  asy_cmd->add_option("--eps", flags.eps, "epsilon of the upper bound");
  auto* verify_cmd = app.add_subcommand("verify", "self-test suites; exit 1 if any check fails");
  common(verify_cmd);
  verify_cmd->add_option("--suite", flags.suite, "constants|quadrature|pizzetti|layer-cake|curvature|all");
  auto* catalog_cmd = app.add_subcommand("catalog", "list profile selectors");
  common(catalog_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  RunConfig cfg;
  std::optional<DimensionContext> ctx;
  ProfilePtr u;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    cfg = resolve(flags);
    ctx = make_context(cfg.n);
    if (command != "ctx" && command != "verify" && command != "catalog") {
      u = profile_from_selector(*ctx, cfg.profile);
    }
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    Outcome outcome;
    if (command == "ctx") {
      outcome.report = cmd_ctx(cfg, *ctx);
    } else if (command == "q-curvature") {
      outcome.report = cmd_q_curvature(cfg, *ctx, u);
    } else if (command == "alpha") {
      outcome.report = cmd_alpha(cfg, *ctx, u);
    } else if (command == "decay") {
      outcome.report = cmd_decay(cfg, *ctx, u);
    } else if (command == "potential") {
      outcome.report = cmd_potential(cfg, *ctx, u);
    } else if (command == "normality") {
      outcome.report = cmd_normality(cfg, *ctx, u);
    } else if (command == "defect") {
      outcome.report = cmd_defect(cfg, *ctx, u);
    } else if (command == "asymptotics") {
      outcome.report = cmd_asymptotics(cfg, *ctx, u);
    } else if (command == "verify") {
      outcome = cmd_verify(cfg);
    } else {
      outcome.report = cmd_catalog();
    }
    std::ostringstream buffer;
    write_report(command, outcome.report, cfg.format, buffer);
    out << buffer.str();
    return outcome.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace qcurv::cli
