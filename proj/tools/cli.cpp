#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bergman/analysis.hpp"
#include "bergman/density.hpp"
#include "bergman/products.hpp"
#include "bergman/schemes.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

#ifndef BERGMAN_VERSION
#define BERGMAN_VERSION "0.0.0"
#endif

namespace bergman::cli {
namespace {

using nlohmann::json;

// --help is not an error; run(args) turns this into stdout + exit 0
struct HelpRequest : std::exception {
  explicit HelpRequest(std::string t) : text(std::move(t)) {}
  const char* what() const noexcept override { return text.c_str(); }
  std::string text;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(sep, from);
    parts.push_back(s.substr(from, at - from));
    if (at == std::string::npos) return parts;
    from = at + 1;
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": not a number: '" + s + "'");
  }
}

int to_int(const std::string& s, const char* what) {
  const double v = to_double(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument(std::string(what) + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

json complex_list_json(const std::vector<Complex>& v) {
  json arr = json::array();
  for (const Complex& c : v) arr.push_back({c.real(), c.imag()});
  return arr;
}

std::vector<Complex> complex_list_from(const json& j, const std::string& key) {
  if (!j.is_array()) throw std::invalid_argument("'" + key + "' must be an array");
  std::vector<Complex> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw std::invalid_argument("'" + key + "' entries must be numbers or [re, im]");
    }
  }
  return out;
}

// inf (vacuous minima) has no JSON number; keep it null rather than a fake value
json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json manifest_json(const RunConfig& c) {
  json cfg;
  cfg["points"] = c.points;
  cfg["scheme"] = c.scheme;
  cfg["jets"] = c.jets;
  cfg["f_grid"] = c.f_grid;
  cfg["weight"] = c.weight;
  cfg["p"] = c.p;
  cfg["alpha"] = c.alpha;
  cfg["r_grid"] = c.r_grid;
  cfg["a_spacing"] = c.a_spacing;
  cfg["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  cfg["out"] = c.out;
  cfg["quad_res"] = c.quad_res;
  cfg["tol"] = c.tol;
  cfg["delta"] = c.delta;
  cfg["eps"] = c.eps;
  cfg["basis_dim"] = c.basis_dim;
  cfg["global_dim"] = c.global_dim;
  cfg["kernel_order"] = c.kernel_order;
  cfg["grid_n"] = c.grid_n;
  cfg["grid_r_max"] = c.grid_r_max;
  cfg["pou_spacing"] = c.pou_spacing;
  cfg["pou_rho"] = c.pou_rho;
  cfg["values"] = complex_list_json(c.values);
  cfg["poly"] = complex_list_json(c.poly);
  return json{{"command", c.command}, {"config", cfg}, {"version", BERGMAN_VERSION}};
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

PointSet resolve_points(const RunConfig& c) {
  const std::string& s = c.points;
  if (s.empty() || s == "none") return {};
  if (s.rfind("random:", 0) == 0) {
    const auto parts = split(s, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("point spec: random:<count>:<r_max>");
    const int count = to_int(parts[1], "random count");
    const double r_max = to_double(parts[2], "random r_max");
    if (count < 1) throw std::invalid_argument("random count must be positive");
    if (!(r_max > 0.0 && r_max < 1.0))
      throw std::invalid_argument("random r_max must lie in (0, 1)");
    if (!c.seed) throw std::invalid_argument("random points need an explicit --seed");
    std::mt19937_64 rng(*c.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<DiskPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double r = r_max * std::sqrt(unif(rng));  // uniform in area
      const double th = 2.0 * std::numbers::pi * unif(rng);
      pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    PointSet z = PointSet::of(pts);
    z.truncation = r_max;
    return z;
  }
  if (s.find(':') != std::string::npos) return parse_pointset_spec(s);
  return load_pointset(s);
}

std::vector<double> resolve_r_grid(const std::string& s) {
  if (s.empty()) return default_r_grid();
  const auto parts = split(s, ':');
  std::vector<double> grid;
  if (parts.size() == 1) {
    grid.push_back(to_double(parts[0], "r-grid"));
  } else if (parts.size() == 3) {
    const double a = to_double(parts[0], "r-grid start");
    const double b = to_double(parts[1], "r-grid end");
    const double step = to_double(parts[2], "r-grid step");
    if (!(step > 0.0)) throw std::invalid_argument("r-grid step must be positive");
    if (b < a) throw std::invalid_argument("r-grid end precedes its start");
    for (double r = a; r <= b + 1e-12; r += step) grid.push_back(r);
  } else {
    throw std::invalid_argument("r-grid wants a:b:step or a single radius");
  }
  for (double r : grid)
    if (!(r > 0.0 && r < 1.0))
      throw std::invalid_argument("r-grid radii must lie in (0, 1)");
  return grid;
}

std::string scheme_input(const RunConfig& c) {
  if (!c.scheme.empty()) return c.scheme;
  // --points doubles as the scheme path when no generator spec is meant
  if (!c.points.empty() && c.points != "none" && c.points.find(':') == std::string::npos)
    return c.points;
  throw std::invalid_argument(c.command + " needs --scheme <path>");
}

// jets[k][i][j]: Taylor coefficient j at cluster entry i of pair k
std::vector<Jet> resolve_jets(const RunConfig& c, const InterpolationScheme& s) {
  std::vector<Jet> jets;
  if (c.jets.empty()) {
    for (const auto& pair : s.pairs) {  // constant 1: value one, derivatives zero
      Jet jet;
      for (const auto& e : pair.cluster.entries()) {
        std::vector<Complex> row(static_cast<std::size_t>(e.mult), Complex(0.0, 0.0));
        row.front() = Complex(1.0, 0.0);
        jet.taylor.push_back(std::move(row));
      }
      jets.push_back(std::move(jet));
    }
    return jets;
  }
  json j;
  try {
    j = json::parse(read_file(c.jets));
  } catch (const json::parse_error&) {
    throw std::invalid_argument("jets file: malformed JSON: " + c.jets);
  }
  if (j.is_object() && j.contains("jets")) j = j.at("jets");
  if (!j.is_array()) throw std::invalid_argument("jets file: expected an array");
  for (const auto& jk : j) {
    if (!jk.is_array()) throw std::invalid_argument("jets file: pair entry must be an array");
    Jet jet;
    for (const auto& ji : jk) jet.taylor.push_back(complex_list_from(ji, "jets"));
    jets.push_back(std::move(jet));
  }
  if (jets.size() != s.pairs.size())
    throw std::invalid_argument("jets file: one jet per scheme pair required");
  return jets;
}

json admissibility_json(const AdmissibilityReport& rep) {
  auto witness = [](const AdmissibilityWitness& w) {
    return json{{"k", w.k}, {"j", w.j}, {"value", finite_or_null(w.value)}};
  };
  return json{{"pass", rep.pass()},
              {"p1", rep.p1},
              {"p2", rep.p2},
              {"p3", rep.p3},
              {"p4", rep.p4},
              {"r_star", rep.r_star},
              {"eps_star", rep.eps_star},
              {"delta_star", finite_or_null(rep.delta_star)},
              {"b_star", rep.b_star},
              {"overlap_bound", rep.overlap_bound},
              {"w1", witness(rep.w1)},
              {"w2", witness(rep.w2)},
              {"w3", witness(rep.w3)},
              {"w4", witness(rep.w4)}};
}

int cmd_density(const RunConfig& c) {
  const PointSet z = resolve_points(c);
  const Weight phi = parse_weight_spec(c.weight);
  const std::vector<double> r_grid = resolve_r_grid(c.r_grid);
  std::vector<DiskPoint> a_grid;
  const PointSet transports = hyperbolic_lattice(c.a_spacing, 0.95);
  for (const auto& e : transports.entries()) a_grid.push_back(e.point);
  // tail floor 0.9 when the grid reaches past it, else just under the top
  // so the last radius always counts
  const double r0 = std::min(0.9, 0.99 * r_grid.back());
  const DensityReport rep = s_uniform_estimate(z, phi, r_grid, a_grid, r0);

  const json man = manifest_json(c);
  write_file(c.out + ".csv", "# manifest: " + man.dump() + "\n" + rep.to_csv());
  json summary{{"estimate", rep.estimate},
               {"r0", rep.r0},
               {"converged", rep.converged},
               {"truncation_capped", rep.truncation_capped},
               {"r_grid", rep.r_grid},
               {"sup_per_r", rep.sup_per_r},
               {"transport_count", rep.a_grid.size()}};
  write_file(c.out + ".json", json_text({{"manifest", man}, {"summary", summary}}));
  return kOk;
}

int cmd_scheme_build(const RunConfig& c) {
  const PointSet z = resolve_points(c);
  const InterpolationScheme s = build_scheme(z, c.delta, c.eps);
  const AdmissibilityReport rep = check_admissible(s);
  json j = json::parse(scheme_to_json(s));  // stays loadable as a scheme file
  j["manifest"] = manifest_json(c);
  j["measured"] = admissibility_json(rep);
  write_file(c.out + ".json", json_text(j));
  return kOk;
}

int cmd_scheme_check(const RunConfig& c) {
  const InterpolationScheme s = load_scheme(scheme_input(c));
  const AdmissibilityReport rep = check_admissible(s);
  // an inadmissible scheme is a finding, not a failure
  write_file(c.out + ".json",
             json_text({{"manifest", manifest_json(c)}, {"report", admissibility_json(rep)}}));
  return kOk;
}

int cmd_coset_norm(const RunConfig& c) {
  const InterpolationScheme s = load_scheme(scheme_input(c));
  const std::vector<Jet> jets = resolve_jets(c, s);
  const Weight phi = parse_weight_spec(c.weight);
  json cosets = json::array();
  double sum_p = 0.0;
  bool all_converged = true;
  for (std::size_t k = 0; k < s.pairs.size(); ++k) {
    const CosetNormResult r = coset_norm(s.pairs[k].region, s.pairs[k].cluster, jets[k],
                                         phi, c.p, c.alpha, c.basis_dim, c.quad_res);
    sum_p += std::pow(r.norm, c.p);
    all_converged = all_converged && r.converged;
    cosets.push_back({{"norm", r.norm},
                      {"converged", r.converged},
                      {"iterations", r.iterations},
                      {"basis_dim", r.basis_dim},
                      {"quad_res", r.quad_res}});
  }
  write_file(c.out + ".json", json_text({{"manifest", manifest_json(c)},
                                         {"cosets", cosets},
                                         {"sum_norm_p", sum_p},
                                         {"total", std::pow(sum_p, 1.0 / c.p)},
                                         {"converged", all_converged}}));
  return all_converged ? kOk : kNoConvergence;
}

int cmd_interp_solve(const RunConfig& c) {
  const InterpolationScheme s = load_scheme(scheme_input(c));
  const std::vector<Jet> jets = resolve_jets(c, s);
  const Weight phi = parse_weight_spec(c.weight);
  const InterpolationSolution sol =
      solve_interpolation(s, jets, phi, c.p, c.alpha, c.global_dim, c.quad_res);
  double residual_max = 0.0;
  for (double r : sol.residuals) residual_max = std::max(residual_max, r);
  write_file(c.out + ".json", json_text({{"manifest", manifest_json(c)},
                                         {"achieved_norm", sol.achieved_norm},
                                         {"K_estimate", sol.K_estimate},
                                         {"converged", sol.converged},
                                         {"iterations", sol.iterations},
                                         {"residual_max", residual_max},
                                         {"residuals", sol.residuals},
                                         {"coefficients", complex_list_json(sol.coefficients)}}));
  return sol.converged ? kOk : kNoConvergence;
}

GridFunction dbar_default_data(const RunConfig& c) {
  if (c.grid_n < 9 || c.grid_n % 2 == 0)
    throw std::invalid_argument("grid_n must be odd and at least 9");
  if (!(c.grid_r_max > 0.0 && c.grid_r_max < 1.0))
    throw std::invalid_argument("grid_r_max must lie in (0, 1)");
  const double h = c.grid_r_max / ((c.grid_n - 1) / 2);
  const double support = 0.75 * c.grid_r_max;  // compactly supported, so dbar data vanish at the rim
  return sample_grid(
      [support](DiskPoint z) {
        const double t = z.abs2() / (support * support);
        if (t >= 1.0) return Complex(0.0, 0.0);
        const double bump = std::exp(1.0 - 1.0 / (1.0 - t));
        return Complex((1.0 - z.abs2()) * bump, 0.0);
      },
      h, c.grid_r_max);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_dbar_solve(const RunConfig& c) {
  const GridFunction f = c.f_grid.empty()          ? dbar_default_data(c)
                         : ends_with(c.f_grid, ".bin") ? load_grid_bin(c.f_grid)
                                                       : load_grid_csv(c.f_grid);
  const PointSet z = resolve_points(c);
  const Weight phi = parse_weight_spec(c.weight);
  const PartitionOfUnity pou = partition_of_unity(c.pou_spacing, c.pou_rho, f.r_max);
  const DbarSolution sol = solve_dbar(f, z, phi, c.p, c.alpha, c.kernel_order, pou);

  const json man = manifest_json(c);
  const std::string u_path = c.out + ".csv";
  save_grid_csv(sol.u, u_path);
  write_file(u_path, "# manifest: " + man.dump() + "\n" + read_file(u_path));

  const bool converged = !(c.tol > 0.0) || sol.residual_rel <= c.tol;
  write_file(c.out + ".json", json_text({{"manifest", man},
                                         {"residual_rel", sol.residual_rel},
                                         {"norm_ratio", sol.norm_ratio},
                                         {"kernel_order", sol.kernel_order},
                                         {"moment_terms", sol.moment_terms},
                                         {"grid_n", f.n},
                                         {"charts", pou.centers.size()},
                                         {"converged", converged},
                                         {"u_path", u_path}}));
  return converged ? kOk : kNoConvergence;
}

int cmd_zeroset_norm(const RunConfig& c) {
  const PointSet z = resolve_points(c);
  const Weight phi = parse_weight_spec(c.weight);
  const std::vector<Complex> coef = c.poly.empty() ? std::vector<Complex>{Complex(1.0, 0.0)}
                                                   : c.poly;
  const AnalyticFn big_f = [coef](DiskPoint zp) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = coef.size(); i-- > 0;) acc = acc * zp.c() + coef[i];
    return acc;
  };
  const ZeroSetNormResult r = zero_space_norm(big_f, z, phi, c.p, c.alpha, c.quad_res);
  write_file(c.out + ".json", json_text({{"manifest", manifest_json(c)},
                                         {"value", r.value},
                                         {"outer_share", r.outer_share},
                                         {"r_max", r.r_max}}));
  return kOk;
}

int cmd_oi_check(const RunConfig& c) {
  const PointSet z = resolve_points(c);
  const Weight phi = parse_weight_spec(c.weight);
  const std::vector<Complex> values =
      c.values.empty() ? std::vector<Complex>(static_cast<std::size_t>(z.distinct_count()),
                                              Complex(1.0, 0.0))
                       : c.values;
  const OInterpolationSetup s = o_interpolation_setup(z, values, phi, c.p);
  write_file(c.out + ".json", json_text({{"manifest", manifest_json(c)},
                                         {"delta", s.delta},
                                         {"local_count", s.local_count},
                                         {"finiteness_sum", s.finiteness_sum},
                                         {"cluster_bounds", s.cluster_bounds},
                                         {"coset_norms", s.coset_norms},
                                         {"c_measured", s.c_measured},
                                         {"pairs", s.scheme.pairs.size()}}));
  return kOk;
}

void apply_file(RunConfig& c, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "points") c.points = v.get<std::string>();
      else if (key == "scheme") c.scheme = v.get<std::string>();
      else if (key == "jets") c.jets = v.get<std::string>();
      else if (key == "f_grid") c.f_grid = v.get<std::string>();
      else if (key == "weight") c.weight = v.get<std::string>();
      else if (key == "p") c.p = v.get<double>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "r_grid") c.r_grid = v.get<std::string>();
      else if (key == "a_spacing") c.a_spacing = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "quad_res") c.quad_res = v.get<int>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "eps") c.eps = v.get<double>();
      else if (key == "basis_dim") c.basis_dim = v.get<int>();
      else if (key == "global_dim") c.global_dim = v.get<int>();
      else if (key == "kernel_order") c.kernel_order = v.get<int>();
      else if (key == "grid_n") c.grid_n = v.get<int>();
      else if (key == "grid_r_max") c.grid_r_max = v.get<double>();
      else if (key == "pou_spacing") c.pou_spacing = v.get<double>();
      else if (key == "pou_rho") c.pou_rho = v.get<double>();
      else if (key == "values") c.values = complex_list_from(v, "values");
      else if (key == "poly") c.poly = complex_list_from(v, "poly");
      else throw std::invalid_argument("config file: unknown key '" + key + "'");
    } catch (const json::exception&) {
      throw std::invalid_argument("config file: bad value for '" + key + "'");
    }
  }
}

}  // namespace

RunConfig make_config(const std::vector<std::string>& args) {
  CLI::App app{"weighted Bergman space toolbox: density sweeps, interpolation schemes, "
               "coset norms, dbar solves, zero-set norms"};
  app.name("bergman");

  RunConfig flags;
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  app.add_option("command", command,
                 "density | scheme-build | scheme-check | coset-norm | interp-solve | "
                 "dbar-solve | zeroset-norm | oi-check");
  app.add_option("--config", config_path, "JSON config file; flags take precedence");
  const auto* o_points = app.add_option("--points", flags.points,
                                        "point set: path, lattice:<s>:<r>, random:<n>:<r>, none");
  const auto* o_scheme = app.add_option("--scheme", flags.scheme, "scheme JSON path");
  const auto* o_jets = app.add_option("--jets", flags.jets, "jet data JSON path");
  const auto* o_fgrid = app.add_option("--f-grid", flags.f_grid, "dbar data grid (.csv or .bin)");
  const auto* o_weight = app.add_option("--weight", flags.weight,
                                        "standard:<alpha> | perturbed-standard:<alpha>:<amp>");
  const auto* o_p = app.add_option("--p", flags.p, "norm exponent");
  const auto* o_alpha = app.add_option("--alpha", flags.alpha, "boundary exponent");
  const auto* o_rgrid = app.add_option("--r-grid", flags.r_grid, "radii a:b:step");
  const auto* o_aspace = app.add_option("--a-spacing", flags.a_spacing, "transport lattice spacing");
  const auto* o_seed = app.add_option("--seed", seed, "RNG seed, required by random inputs");
  const auto* o_out = app.add_option("--out", flags.out, "output path prefix");
  const auto* o_quad = app.add_option("--quad-res", flags.quad_res, "quadrature resolution");
  const auto* o_tol = app.add_option("--tol", flags.tol, "dbar residual gate, 0 = off");
  const auto* o_delta = app.add_option("--delta", flags.delta, "scheme-build linkage scale");
  const auto* o_eps = app.add_option("--eps", flags.eps, "scheme-build clearance");
  const auto* o_basis = app.add_option("--basis-dim", flags.basis_dim, "coset basis dimension");
  const auto* o_global = app.add_option("--global-dim", flags.global_dim, "interpolant dimension");
  const auto* o_korder = app.add_option("--kernel-order", flags.kernel_order, "dbar kernel order");
  const auto* o_gridn = app.add_option("--grid-n", flags.grid_n, "dbar grid side (odd)");
  const auto* o_gridr = app.add_option("--grid-r-max", flags.grid_r_max, "dbar grid radius");
  const auto* o_pous = app.add_option("--pou-spacing", flags.pou_spacing, "chart lattice spacing");
  const auto* o_pour = app.add_option("--pou-rho", flags.pou_rho, "chart bump radius");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequest(app.help());
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  RunConfig out;
  if (!config_path.empty()) {
    json j;
    try {
      j = json::parse(read_file(config_path));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("config file: malformed JSON: ") + e.what());
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(e.what());  // a dangling --config is a config error
    }
    apply_file(out, j);
  }
  if (!command.empty()) out.command = command;
  if (o_points->count()) out.points = flags.points;
  if (o_scheme->count()) out.scheme = flags.scheme;
  if (o_jets->count()) out.jets = flags.jets;
  if (o_fgrid->count()) out.f_grid = flags.f_grid;
  if (o_weight->count()) out.weight = flags.weight;
  if (o_p->count()) out.p = flags.p;
  if (o_alpha->count()) out.alpha = flags.alpha;
  if (o_rgrid->count()) out.r_grid = flags.r_grid;
  if (o_aspace->count()) out.a_spacing = flags.a_spacing;
  if (o_seed->count()) out.seed = seed;
  if (o_out->count()) out.out = flags.out;
  if (o_quad->count()) out.quad_res = flags.quad_res;
  if (o_tol->count()) out.tol = flags.tol;
  if (o_delta->count()) out.delta = flags.delta;
  if (o_eps->count()) out.eps = flags.eps;
  if (o_basis->count()) out.basis_dim = flags.basis_dim;
  if (o_global->count()) out.global_dim = flags.global_dim;
  if (o_korder->count()) out.kernel_order = flags.kernel_order;
  if (o_gridn->count()) out.grid_n = flags.grid_n;
  if (o_gridr->count()) out.grid_r_max = flags.grid_r_max;
  if (o_pous->count()) out.pou_spacing = flags.pou_spacing;
  if (o_pour->count()) out.pou_rho = flags.pou_rho;
  return out;
}

int run(const RunConfig& config) {
  try {
    if (config.command == "density") return cmd_density(config);
    if (config.command == "scheme-build") return cmd_scheme_build(config);
    if (config.command == "scheme-check") return cmd_scheme_check(config);
    if (config.command == "coset-norm") return cmd_coset_norm(config);
    if (config.command == "interp-solve") return cmd_interp_solve(config);
    if (config.command == "dbar-solve") return cmd_dbar_solve(config);
    if (config.command == "zeroset-norm") return cmd_zeroset_norm(config);
    if (config.command == "oi-check") return cmd_oi_check(config);
    if (config.command.empty())
      throw std::invalid_argument("no command given; see --help");
    throw std::invalid_argument("unknown command: '" + config.command + "'");
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::logic_error& e) {  // invalid inputs and out-of-regime requests
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::runtime_error& e) {  // opens, reads, writes
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kIoError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
}

int run(const std::vector<std::string>& args) {
  try {
    return run(make_config(args));
  } catch (const HelpRequest& h) {
    std::fputs(h.text.c_str(), stdout);
    return kOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  }
}

}  // namespace bergman::cli
