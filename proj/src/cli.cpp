#include "lcm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lcm/asymptotics.hpp"
#include "lcm/config.hpp"
#include "lcm/errors.hpp"
#include "lcm/parallel.hpp"
#include "lcm/sections.hpp"

namespace lcm {

namespace {

struct Output {
  std::string csv;
  nlohmann::json json;
  bool inconclusive = false;
};

struct Common {
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1 << 16;
  unsigned threads = 0;
  bool strict = false;
};

std::string csv_table(const std::vector<std::pair<std::string, double>>& kv) {
  std::string s = "quantity,value\n";
  for (const auto& [k, v] : kv) s += k + "," + format_double(v) + "\n";
  return s;
}

template <class F>
auto load(const std::string& file, F&& parse) {
  nlohmann::json j = strip_schema(load_json_file(file), file);
  try {
    return parse(j);
  } catch (const ConfigError& e) {
    throw ConfigError(file + ": " + e.what());
  }
}

ConvexBody load_body(const std::string& file) {
  return load(file, [](const nlohmann::json& j) { return parse_body(j, "body"); });
}
NormMeasure load_measure(const std::string& file) {
  return load(file, [](const nlohmann::json& j) { return parse_measure(j, "measure"); });
}
PhiFunction load_phi(const std::string& file) {
  return load(file, [](const nlohmann::json& j) { return parse_phi(j, "phi"); });
}

// Bodies for the xi net: Euclidean unit vectors from the sphere net.
std::vector<Vec> xi_net_for(int dim, std::size_t size) {
  std::vector<Vec> net = sphere_net(dim, size);
  std::vector<Vec> out;
  for (auto& v : net) {
    const double len = euclidean_norm(v);
    for (auto& c : v) c /= len;
    out.push_back(v);
  }
  return out;
}

void write_output(const Output& o, const Common& c) {
  std::string format = c.format;
  if (format.empty()) {
    const bool json_ext = c.out.size() >= 5 && c.out.compare(c.out.size() - 5, 5, ".json") == 0;
    format = json_ext ? "json" : (c.out.empty() ? "json" : "csv");
  }
  std::string text;
  if (format == "csv") {
    text = o.csv;
  } else {
    text = o.json.dump(2) + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Norm-density log-concave measures: masses, tails, sections and counterexample checks", "lcm"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "output file (.json for JSON, anything else CSV; stdout if omitted)");
    s->add_option("--format", c.format, "csv or json, overrides the extension")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--seed", c.seed, "Monte Carlo seed");
    s->add_option("--budget", c.budget, "Monte Carlo samples per estimate");
    s->add_option("--threads", c.threads, "worker threads (default LCM_THREADS or all cores)");
    s->add_flag("--strict", c.strict, "exit 3 on an inconclusive verdict");
  };

  std::string measure_file, body_file, other_file, phi_file, ref_file, grid_spec = "4:12:5", r_grid_spec = "0.25:2:8";
  bool log_grid = false;
  double t = 1.0, window = 2.0, delta = 0.15, R = 1.0, t0 = 1.0, t_max = 20.0, tmin = 0.01, tmax = 10.0;
  double alpha = 1.1, T = 10.0, step = 1e-3;
  int m_max = 3, kmax = 10, points = 200, validate_points = 10000;
  std::size_t net_size = 0;

  auto* mass = app.add_subcommand("mass", "normalizer, mu(tK) and mu((tK)^c)");
  mass->add_option("--measure", measure_file)->required();
  mass->add_option("--body", body_file)->required();
  mass->add_option("--t", t, "dilation")->check(CLI::NonNegativeNumber);

  auto* tail = app.add_subcommand("tail", "bracketed tail ln mu((tK)^c) and the plank lower bound");
  tail->add_option("--measure", measure_file)->required();
  tail->add_option("--body", body_file)->required();
  tail->add_option("--t", t)->check(CLI::NonNegativeNumber);

  auto* scan = app.add_subcommand("ldp-scan", "rho(t) = ln mu((tK)^c) / phi(r t) with window suprema");
  scan->add_option("--measure", measure_file)->required();
  scan->add_option("--body", body_file)->required();
  scan->add_option("--grid", grid_spec, "start:end:count");
  scan->add_flag("--log", log_grid, "log-spaced grid");
  scan->add_option("--window", window)->check(CLI::PositiveNumber);
  scan->add_option("--delta", delta)->check(CLI::PositiveNumber);

  auto* induct = app.add_subcommand("induction", "F_m ladder, X_m, Y and the by-parts check");
  induct->add_option("--phi", phi_file)->required();
  induct->add_option("--m-max", m_max)->check(CLI::Range(1, 64));
  induct->add_option("--grid", grid_spec);
  induct->add_flag("--log", log_grid);

  auto* patho = app.add_subcommand("pathological-phi", "knot report of the piecewise quadratic profile");
  patho->add_option("--kmax", kmax)->check(CLI::Range(0, 100000));
  patho->add_option("--validate-points", validate_points)->check(CLI::Range(2, 100000000));

  auto* witness = app.add_subcommand("witness", "search t with mu(t R ref) > mu(tK)");
  witness->add_option("--measure", measure_file)->required();
  witness->add_option("--body", body_file)->required();
  witness->add_option("--reference", ref_file, "reference body (default: the measure's L)");
  witness->add_option("--R", R)->check(CLI::PositiveNumber);
  witness->add_option("--t0", t0)->check(CLI::PositiveNumber);
  witness->add_option("--tmax", t_max)->check(CLI::PositiveNumber);

  auto* sections = app.add_subcommand("sections", "section measures of rK against rL");
  auto* bp = app.add_subcommand("bp-experiment", "section dominance, then mu(K) <= mu(L)");
  for (auto* s : {sections, bp}) {
    s->add_option("--measure", measure_file)->required();
    s->add_option("--body", body_file, "K")->required();
    s->add_option("--other", other_file, "L")->required();
    s->add_option("--r-grid", r_grid_spec, "start:end:count");
    s->add_flag("--log", log_grid);
    s->add_option("--net-size", net_size, "directions (default 64 n)");
  }

  auto* rect = app.add_subcommand("rectangle-demo", "|tB ∩ Omega| <= |tOmega ∩ Omega| with B not inside Omega");
  rect->add_option("--tmin", tmin)->check(CLI::PositiveNumber);
  rect->add_option("--tmax", tmax)->check(CLI::PositiveNumber);
  rect->add_option("--points", points)->check(CLI::Range(1, 10000000));

  auto* fact = app.add_subcommand("fact-check", "|K| <= |RL| implies mu(K) <= mu(RL)");
  fact->add_option("--phi", phi_file)->required();
  fact->add_option("--L", other_file)->required();
  fact->add_option("--K", body_file)->required();
  fact->add_option("--R", R)->check(CLI::PositiveNumber);

  auto* except = app.add_subcommand("exceptional-set", "|{t <= T : ln tail < -alpha phi(t)}|");
  except->add_option("--phi", phi_file)->required();
  except->add_option("--alpha", alpha)->check(CLI::PositiveNumber);
  except->add_option("--T", T)->check(CLI::PositiveNumber);
  except->add_option("--step", step)->check(CLI::PositiveNumber);

  for (auto* s : app.get_subcommands({})) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (c.threads > 0) set_thread_count(c.threads);
    Output o;
    if (*mass) {
      const NormMeasure mu = load_measure(measure_file);
      const ConvexBody K = load_body(body_file);
      const ConvexBody tK = ConvexBody::dilate(K, t == 0.0 ? 1.0 : t);
      if (mu.is_uniform()) {
        const double m = uniform_mass(mu, K, t);
        o.json = {{"measure", mu.describe()}, {"body", K.describe()}, {"t", json_number(t)}, {"mass", json_number(m)}};
        o.csv = csv_table({{"t", t}, {"mass", m}});
      } else {
        const Estimate in = t == 0.0 ? Estimate::exact(-INFINITY) : layered_mass(mu, tK, c.budget, c.seed);
        const TailBracket tb = tail_log_bracket(mu, K, t, c.budget, c.seed);
        o.json = {{"measure", mu.describe()}, {"body", K.describe()},  {"t", json_number(t)},
                  {"log_normalizer", to_json(mu.log_normalizer())}, {"log_mass", to_json(in)},
                  {"log_tail", to_json(tb.point)}};
        o.csv = csv_table({{"t", t},
                           {"log_normalizer", mu.log_normalizer().log_value},
                           {"log_mass", in.log_value},
                           {"log_mass_error", in.abs_log_error},
                           {"log_tail", tb.point.log_value},
                           {"log_tail_error", tb.point.abs_log_error}});
      }
    } else if (*tail) {
      const NormMeasure mu = load_measure(measure_file);
      const ConvexBody K = load_body(body_file);
      const TailBracket tb = tail_log_bracket(mu, K, t, c.budget, c.seed);
      const Estimate plank = plank_tail_lower_log(mu, K, t);
      o.json = {{"t", json_number(t)}, {"bracket", to_json(tb)}, {"plank_lower", to_json(plank)}};
      o.csv = csv_table({{"t", t},
                         {"lower", tb.lower.log_value},
                         {"point", tb.point.log_value},
                         {"point_error", tb.point.abs_log_error},
                         {"upper", tb.upper.log_value},
                         {"plank_lower", plank.log_value}});
    } else if (*scan) {
      const NormMeasure mu = load_measure(measure_file);
      const ConvexBody K = load_body(body_file);
      const LdpScanReport r = ldp_scan(mu, K, parse_grid(grid_spec, log_grid), window, delta, c.budget, c.seed);
      o.json = r.json();
      o.csv = r.csv();
      o.inconclusive = !r.consistent;
    } else if (*induct) {
      const InductionTable tab = induction_diagnostics(load_phi(phi_file), m_max, parse_grid(grid_spec, log_grid));
      o.json = tab.json();
      o.csv = tab.csv();
    } else if (*patho) {
      const PathologicalPhi p = build_pathological_phi(kmax);
      std::vector<double> grid(static_cast<std::size_t>(validate_points));
      const double hi = kmax + 1.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = hi * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
      const PhiDiagnostics d = validate_phi(p.phi, grid);
      nlohmann::json knots = nlohmann::json::array();
      o.csv = "k,exact,log2_alpha,t_k,phi_t,log_dphi_t,margin\n";
      for (const auto& k : p.knots) {
        knots.push_back(to_json(k));
        o.csv += std::to_string(k.k) + "," + (k.exact ? "1" : "0") + "," + (k.exact ? k.log2_alpha_text : std::string("nan")) + "," +
                 format_double(k.t_k) + "," + k.phi_t.str() + "," + k.log_dphi_t.str() + "," +
                 format_double(k.margin) + "\n";
      }
      o.json = {{"k_max", kmax}, {"knots", knots}, {"validation", to_json(d)}};
      o.inconclusive = !d.pass;
    } else if (*witness) {
      const NormMeasure mu = load_measure(measure_file);
      const ConvexBody K = load_body(body_file);
      const ConvexBody ref = ref_file.empty() ? mu.body() : load_body(ref_file);
      const WitnessResult w = witness_search(mu, K, R, ref, t0, t_max, c.budget, c.seed);
      o.json = w.json();
      o.csv = "t,k_tail_lower,k_tail_upper,ref_tail_lower,ref_tail_upper\n";
      for (const auto& s : w.steps)
        o.csv += format_double(s.t) + "," + format_double(s.k_tail_lower) + "," + format_double(s.k_tail_upper) +
                 "," + format_double(s.ref_tail_lower) + "," + format_double(s.ref_tail_upper) + "\n";
      o.inconclusive = w.status == WitnessStatus::inconclusive;
    } else if (*sections || *bp) {
      const NormMeasure mu = load_measure(measure_file);
      const ConvexBody K = load_body(body_file);
      const ConvexBody L = load_body(other_file);
      if (K.dim() != mu.dim() || L.dim() != mu.dim()) throw ConfigError("--body/--other: dimension differs from the measure");
      const std::vector<Vec> net = xi_net_for(mu.dim(), net_size ? net_size : 64 * static_cast<std::size_t>(mu.dim()));
      const std::vector<double> rg = parse_grid(r_grid_spec, log_grid);
      const DominanceReport r = *bp ? bp_experiment(mu, K, L, rg, net, c.budget, c.seed)
                                    : dominance_check(mu, K, L, rg, net, c.budget, c.seed);
      o.json = r.json();
      o.csv = r.csv();
      o.inconclusive = r.hypothesis == HypothesisVerdict::inconclusive ||
                       (*bp && r.hypothesis == HypothesisVerdict::holds && r.mass_comparison == Comparison::inconclusive);
    } else if (*rect) {
      if (!(tmax > tmin)) throw ConfigError("--tmax must exceed --tmin");
      const RectangleDemo d = rectangle_demo(
          parse_grid(format_double(tmin) + ":" + format_double(tmax) + ":" + std::to_string(points), true));
      o.json = d.json();
      o.csv = d.csv();
    } else if (*fact) {
      const FactReport f = fact_check(load_phi(phi_file), load_body(other_file), load_body(body_file), R, c.budget,
                                      c.seed);
      o.json = f.json();
      o.csv = csv_table({{"volume_k", f.volume_k},
                         {"volume_rl", f.volume_rl},
                         {"log_layered", f.layered.log_value},
                         {"log_layered_error", f.layered.abs_log_error},
                         {"log_dilate", f.dilate.log_value},
                         {"inner_failures", static_cast<double>(f.inner_failures)}});
      o.csv = "status," + to_string(f.status) + "\n" + o.csv;
      o.inconclusive = f.status == FactStatus::inconclusive;
    } else if (*except) {
      const ExceptionalSet e = exceptional_set_measure(load_phi(phi_file), alpha, T, step);
      o.json = e.json();
      o.csv = csv_table({{"measure", e.measure},
                         {"members", static_cast<double>(e.members)},
                         {"points", static_cast<double>(e.points)},
                         {"first", e.first.value_or(NAN)},
                         {"last", e.last.value_or(NAN)}});
    }
    write_output(o, c);
    if (c.strict && o.inconclusive) {
      std::cerr << "lcm: inconclusive verdict\n";
      return kExitInconclusive;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "lcm: invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "lcm: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace lcm
