#include "fdde/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdde/chaos.hpp"
#include "fdde/errors.hpp"
#include "fdde/region.hpp"
#include "fdde/stability.hpp"

namespace fdde::cli {

namespace {

using json = nlohmann::json;
using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json meta = json::object();
};

struct Outcome {
  Table table;
  bool diverged = false;
};

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"simulate", Command::Simulate},       {"equilibria", Command::Equilibria}, {"classify", Command::Classify},
    {"crit-delay", Command::CritDelay},    {"region", Command::Region},         {"bifurcation", Command::Bifurcation},
    {"lyapunov", Command::Lyapunov},
};

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

std::vector<std::string> split_pair(const std::string& text, const std::string& flag) {
  const auto pos = text.find_first_of(",:x");
  if (pos == std::string::npos || text.find_first_of(",:x", pos + 1) != std::string::npos)
    throw UsageError("--" + flag + " expects two values as A,B; got '" + text + "'");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

double to_double(const std::string& s, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("--" + flag + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw UsageError("--" + flag + ": '" + s + "' is not a number");
  return v;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
  return s;
}

Range parse_range(const std::string& text, const std::string& flag) {
  const auto parts = split_pair(text, flag);
  Range r{to_double(parts[0], flag), to_double(parts[1], flag)};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi))
    throw ValidationError("--" + flag + " must be a finite range with min < max");
  return r;
}

std::vector<double> linspace(Range r, std::size_t n) {
  if (n == 1) return {r.lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

json params_json(const ModelParams& m) {
  return {{"alpha", m.alpha}, {"tau", m.tau}, {"delta", m.delta}, {"epsilon", m.epsilon}, {"p", m.p}, {"q", m.q}};
}

std::vector<double> sweep_delays(const RunConfig& c) {
  if (c.tau_range) return linspace(*c.tau_range, c.tau_steps);
  return {c.params.tau};
}

// ---------------------------------------------------------------------------
// Commands

Outcome do_simulate(const RunConfig& c) {
  const TimeSeries ts = integrate(c.params, History::constant(*c.history_const), c.solver);
  Outcome o;
  o.table.columns = {"t", "x"};
  for (std::size_t k = 0; k < ts.size(); ++k) o.table.rows.push_back({ts.time(k), ts.samples[k]});
  o.table.meta = {{"command", "simulate"},        {"params", params_json(c.params)},
                  {"history_const", *c.history_const}, {"h", ts.h},
                  {"requested_h", ts.requested_h}, {"step_adjusted", ts.step_adjusted()},
                  {"t_end", c.solver.t_end},       {"diverged", ts.diverged}};
  o.diverged = ts.diverged;
  return o;
}

Outcome do_equilibria(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"branch", "value"};
  for (const auto& e : equilibria(c.params)) o.table.rows.push_back({std::string(to_string(e.branch)), e.value});
  o.table.meta = {{"command", "equilibria"}, {"params", params_json(c.params)}};
  return o;
}

Outcome do_classify(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"branch", "value", "a", "b", "verdict", "tau_star", "theorem"};
  for (const auto& e : equilibria(c.params)) {
    const LinearCoeffs lc = linearize(c.params, e.value);
    std::vector<Cell> row{std::string(to_string(e.branch)), e.value, lc.a, lc.b};
    try {
      const StabilityVerdict v = classify_equilibrium(c.params, e);
      row.emplace_back(std::string(to_string(v.kind)));
      row.emplace_back(v.tau_star ? Cell{*v.tau_star} : Cell{std::string()});
      row.emplace_back(v.theorem ? std::string(to_string(*v.theorem)) : std::string("general"));
    } catch (const BoundaryError&) {
      row.emplace_back(std::string("Boundary"));
      row.emplace_back(std::string());
      row.emplace_back(std::string());
    }
    o.table.rows.push_back(std::move(row));
  }
  o.table.meta = {{"command", "classify"}, {"params", params_json(c.params)}};
  return o;
}

Outcome do_crit_delay(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"branch", "a", "b", "alpha", "tau_star"};
  const double alpha = c.params.alpha;
  if (c.a && c.b) {
    o.table.rows.push_back({std::string("-"), *c.a, *c.b, alpha, crit_delay(*c.a, *c.b, alpha)});
    o.table.meta = {{"command", "crit-delay"}, {"mode", "direct"}, {"alpha", alpha}};
    return o;
  }
  for (const auto& e : equilibria(c.params)) {
    const LinearCoeffs lc = linearize(c.params, e.value);
    if (!(lc.b < -std::abs(lc.a))) continue;
    o.table.rows.push_back({std::string(to_string(e.branch)), lc.a, lc.b, alpha, crit_delay(lc.a, lc.b, alpha)});
  }
  o.table.meta = {{"command", "crit-delay"}, {"mode", "model"}, {"params", params_json(c.params)}};
  return o;
}

Outcome do_region(const RunConfig& c) {
  const region::Grid g = region::sample_grid(c.params.p, c.params.epsilon, c.q_range.lo, c.q_range.hi,
                                             c.delta_range.lo, c.delta_range.hi, c.grid_q, c.grid_delta);
  Outcome o;
  o.table.columns = {"q", "delta", "label"};
  for (std::size_t j = 0; j < g.delta.size(); ++j)
    for (std::size_t i = 0; i < g.q.size(); ++i)
      o.table.rows.push_back({g.q[i], g.delta[j], std::string(region::code(g.at(i, j)))});
  o.table.meta = {{"command", "region"}, {"p", c.params.p},       {"epsilon", c.params.epsilon},
                  {"nq", c.grid_q},      {"ndelta", c.grid_delta}, {"order", "row-major, q varies fastest"}};
  return o;
}

Outcome do_bifurcation(const RunConfig& c) {
  const auto taus = sweep_delays(c);
  const auto points = chaos::bifurcation_scan(c.params, taus, c.solver, c.transient, c.history_const);
  Outcome o;
  o.table.columns = {"tau", "extremum"};
  json diverged = json::array();
  for (const auto& pt : points) {
    if (pt.diverged) {
      diverged.push_back(pt.tau);
      o.diverged = true;
    }
    for (double v : pt.extrema) o.table.rows.push_back({pt.tau, v});
  }
  o.table.meta = {{"command", "bifurcation"}, {"params", params_json(c.params)}, {"h", c.solver.h},
                  {"t_end", c.solver.t_end},  {"transient", c.transient},        {"diverged_taus", diverged}};
  return o;
}

Outcome do_lyapunov(const RunConfig& c) {
  Outcome o;
  o.table.columns = {"tau", "mle"};
  json diverged = json::array();
  for (double tau : sweep_delays(c)) {
    ModelParams at = c.params;
    at.tau = tau;
    const auto est = chaos::lyapunov_for_delay(at, c.solver, c.transient, c.history_const);
    if (est.diverged) {
      diverged.push_back(tau);
      o.diverged = true;
    }
    o.table.rows.push_back({tau, est.mle});
  }
  o.table.meta = {{"command", "lyapunov"}, {"params", params_json(c.params)}, {"h", c.solver.h},
                  {"t_end", c.solver.t_end}, {"transient", c.transient},    {"diverged_taus", diverged}};
  return o;
}

// ---------------------------------------------------------------------------
// Serialization

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i]))
        os << format_number(*d);
      else
        os << std::get<std::string>(row[i]);
    }
    os << '\n';
  }
}

void write_json(const Table& t, std::ostream& os) {
  json data = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        obj[t.columns[i]] = std::isfinite(*d) ? json(*d) : json(nullptr);
      } else {
        const auto& s = std::get<std::string>(row[i]);
        obj[t.columns[i]] = s.empty() ? json(nullptr) : json(s);
      }
    }
    data.push_back(std::move(obj));
  }
  json doc = {{"meta", t.meta}, {"data", std::move(data)}};
  os << doc.dump() << '\n';
}

void write_table(const Table& t, Format f, std::ostream& os) {
  if (f == Format::Csv)
    write_csv(t, os);
  else
    write_json(t, os);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostic(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump();
}

RunConfig parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Simulation and stability analysis of a cubic fractional-order delay equation", "fdde"};
  app.set_help_flag("--help", "print this message and exit");

  std::string command;
  std::vector<std::string> names;
  for (const auto& [name, cmd] : kCommands) names.push_back(name);
  app.add_option("command", command, "one of: simulate, equilibria, classify, crit-delay, region, bifurcation, lyapunov")
      ->required()
      ->check(CLI::IsMember(names));

  double alpha = 0, tau = 0, delta = 0, epsilon = 0, p = 0, q = 0;
  double h = 0.01, t_end = 0, history = 0, tau_min = 0, tau_max = 0, a = 0, b = 0, transient = 0.5;
  int tau_steps = 0;
  std::vector<std::string> q_range, delta_range;
  std::string grid, out, format = "csv";

  auto* o_alpha = app.add_option("--alpha", alpha, "fractional order, 0 < alpha <= 1");
  auto* o_tau = app.add_option("--tau", tau, "delay");
  auto* o_delta = app.add_option("--delta", delta);
  auto* o_epsilon = app.add_option("--epsilon", epsilon);
  auto* o_p = app.add_option("--p", p);
  auto* o_q = app.add_option("--q", q);
  app.add_option("--h", h, "step size (default 0.01)");
  auto* o_t_end = app.add_option("--t-end", t_end, "final time (default 100; 400 for bifurcation/lyapunov)");
  auto* o_history = app.add_option("--history-const", history, "constant initial function");
  auto* o_tau_min = app.add_option("--tau-min", tau_min);
  auto* o_tau_max = app.add_option("--tau-max", tau_max);
  auto* o_tau_steps = app.add_option("--tau-steps", tau_steps);
  // config files hand "a,b" over as two items, so accept one or two
  auto* o_q_range = app.add_option("--q-range", q_range, "region q range as MIN,MAX")->expected(1, 2);
  auto* o_delta_range = app.add_option("--delta-range", delta_range, "region delta range as MIN,MAX")->expected(1, 2);
  auto* o_grid = app.add_option("--grid", grid, "region lattice as NQxNDELTA");
  app.add_option("--out", out, "output file (default: standard output)");
  app.add_option("--format", format, "csv or json");
  auto* o_a = app.add_option("--a", a, "crit-delay: linear coefficient of x(t)");
  auto* o_b = app.add_option("--b", b, "crit-delay: linear coefficient of x(t - tau)");
  app.add_option("--transient", transient, "discarded leading fraction (default 0.5)");
  app.set_config("--config", "", "file of key=value lines supplying any flag");

  RunConfig cfg;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    cfg.help = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [name, cmd] : kCommands)
    if (name == command) cfg.command = cmd;
  const std::string cmd_name = command_name(cfg.command);

  auto given = [](const CLI::Option* o) { return o->count() > 0; };
  auto require = [&](std::initializer_list<std::pair<const char*, const CLI::Option*>> flags) {
    for (const auto& [flag, opt] : flags)
      if (!given(opt)) throw UsageError(cmd_name + " requires --" + flag);
  };
  const std::initializer_list<std::pair<const char*, const CLI::Option*>> model_flags = {
      {"delta", o_delta}, {"epsilon", o_epsilon}, {"p", o_p}, {"q", o_q}};

  cfg.params = {given(o_alpha) ? alpha : 1.0, given(o_tau) ? tau : 0.0, delta, epsilon, p, q};
  cfg.solver.h = h;
  cfg.transient = transient;
  cfg.out_path = out;
  if (format == "csv")
    cfg.format = Format::Csv;
  else if (format == "json")
    cfg.format = Format::Json;
  else
    throw ValidationError("--format must be csv or json, got '" + format + "'");
  if (given(o_history)) cfg.history_const = history;

  const bool long_run = cfg.command == Command::Bifurcation || cfg.command == Command::Lyapunov;
  cfg.solver.t_end = given(o_t_end) ? t_end : (long_run ? 400.0 : 100.0);

  switch (cfg.command) {
    case Command::Simulate:
      require({{"alpha", o_alpha}, {"tau", o_tau}, {"history-const", o_history}});
      require(model_flags);
      break;
    case Command::Equilibria:
      require(model_flags);
      break;
    case Command::Classify:
      require({{"alpha", o_alpha}});
      require(model_flags);
      break;
    case Command::CritDelay:
      require({{"alpha", o_alpha}});
      if (given(o_a) || given(o_b)) {
        require({{"a", o_a}, {"b", o_b}});
        cfg.a = a;
        cfg.b = b;
      } else {
        require(model_flags);
      }
      break;
    case Command::Region:
      require({{"p", o_p}, {"epsilon", o_epsilon}, {"q-range", o_q_range}, {"delta-range", o_delta_range},
               {"grid", o_grid}});
      cfg.q_range = parse_range(join(q_range), "q-range");
      cfg.delta_range = parse_range(join(delta_range), "delta-range");
      {
        const auto parts = split_pair(grid, "grid");
        const double nq = to_double(parts[0], "grid"), nd = to_double(parts[1], "grid");
        if (nq != std::floor(nq) || nd != std::floor(nd) || nq < 2 || nd < 2)
          throw ValidationError("--grid needs integer counts >= 2");
        cfg.grid_q = static_cast<std::size_t>(nq);
        cfg.grid_delta = static_cast<std::size_t>(nd);
      }
      if (!(p > 0.0) || !(epsilon > 0.0)) throw ValidationError("region needs p > 0 and epsilon > 0");
      break;
    case Command::Bifurcation:
    case Command::Lyapunov:
      require({{"alpha", o_alpha}});
      require(model_flags);
      if (given(o_tau_min) || given(o_tau_max) || given(o_tau_steps)) {
        require({{"tau-min", o_tau_min}, {"tau-max", o_tau_max}, {"tau-steps", o_tau_steps}});
        if (tau_steps < 1) throw ValidationError("--tau-steps must be at least 1");
        if (!(tau_min > 0.0) || !(tau_max >= tau_min) || (tau_steps > 1 && !(tau_max > tau_min)))
          throw ValidationError("delay sweep needs 0 < tau-min < tau-max");
        cfg.tau_range = Range{tau_min, tau_max};
        cfg.tau_steps = static_cast<std::size_t>(tau_steps);
      } else if (cfg.command == Command::Lyapunov) {
        require({{"tau", o_tau}});
      } else {
        throw UsageError("bifurcation requires --tau-min, --tau-max and --tau-steps");
      }
      if (!(transient >= 0.0 && transient < 1.0)) throw ValidationError("--transient must lie in [0, 1)");
      break;
  }

  validate(cfg.params);
  if (!(cfg.solver.h > 0.0) || !std::isfinite(cfg.solver.h)) throw ValidationError("--h must be positive");
  if (!(cfg.solver.t_end > 0.0) || !std::isfinite(cfg.solver.t_end))
    throw ValidationError("--t-end must be positive");
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.help) {
    out << *config.help;
    return exit_code::kOk;
  }
  Outcome result;
  try {
    switch (config.command) {
      case Command::Simulate: result = do_simulate(config); break;
      case Command::Equilibria: result = do_equilibria(config); break;
      case Command::Classify: result = do_classify(config); break;
      case Command::CritDelay: result = do_crit_delay(config); break;
      case Command::Region: result = do_region(config); break;
      case Command::Bifurcation: result = do_bifurcation(config); break;
      case Command::Lyapunov: result = do_lyapunov(config); break;
    }
  } catch (const ValidationError& e) {
    err << diagnostic(e.kind(), e.what()) << '\n';
    return exit_code::kValidation;
  } catch (const Error& e) {
    err << diagnostic(e.kind(), e.what()) << '\n';
    return exit_code::kNumerical;
  }

  if (config.out_path.empty()) {
    write_table(result.table, config.format, out);
  } else {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) {
      err << diagnostic("IoError", "cannot open " + config.out_path) << '\n';
      return exit_code::kUsage;
    }
    write_table(result.table, config.format, file);
  }
  if (result.diverged) {
    err << diagnostic("Diverged", "trajectory exceeded the divergence threshold; output is truncated") << '\n';
    return exit_code::kDiverged;
  }
  return exit_code::kOk;
}

}  // namespace fdde::cli
