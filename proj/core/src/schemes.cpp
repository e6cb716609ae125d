#include "bergman/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bergman/products.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

// signed clearance of z inside D(c, rho); negative when outside
double region_margin(const DiskRegion& g, DiskPoint z) {
  const double d = psh_distance(z, g.center);
  return (g.radius - d) / (1.0 - g.radius * d);
}

double region_diameter(const DiskRegion& g) {
  return 2.0 * g.radius / (1.0 + g.radius * g.radius);
}

DiskPoint chebyshev_center(const std::vector<DiskPoint>& pts) {
  if (pts.size() == 1) return pts[0];
  int best = 0;
  double best_ecc = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double ecc = 0.0;
    for (const DiskPoint& q : pts) ecc = std::max(ecc, psh_distance(pts[i], q));
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = static_cast<int>(i);
    }
  }
  // geodesic steps toward the current farthest point shrink the covering
  // radius; the caller verifies the final radius, so this only has to be good
  DiskPoint c = pts[best];
  for (int t = 1; t <= 64; ++t) {
    int far = 0;
    double dist = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = psh_distance(c, pts[i]);
      if (d > dist) {
        dist = d;
        far = static_cast<int>(i);
      }
    }
    if (dist == 0.0) break;
    c = geodesic_point(c, pts[far], dist / (t + 1));
  }
  return c;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / double(i);
  return v;
}

nlohmann::json cluster_json(const PointSet& cluster) {
  return nlohmann::json::parse(to_json_string(cluster));
}

}  // namespace

AdmissibilityReport check_admissible(const InterpolationScheme& scheme) {
  AdmissibilityReport rep;
  const int n = static_cast<int>(scheme.pairs.size());
  rep.eps_star = std::numeric_limits<double>::infinity();
  rep.delta_star = std::numeric_limits<double>::infinity();

  for (int k = 0; k < n; ++k) {
    const auto& pr = scheme.pairs[k];
    if (pr.cluster.distinct_count() == 0)
      throw std::invalid_argument("scheme: empty cluster");

    const double diam = region_diameter(pr.region);
    if (diam > rep.r_star) {
      rep.r_star = diam;
      rep.w1 = {k, -1, diam};
    }
    for (const auto& e : pr.cluster.entries()) {
      const double margin = region_margin(pr.region, e.point);
      if (margin < rep.eps_star) {
        rep.eps_star = margin;
        rep.w2 = {k, -1, margin};
      }
    }
    if (pr.cluster.total_count() > rep.b_star) {
      rep.b_star = pr.cluster.total_count();
      rep.w4 = {k, -1, double(pr.cluster.total_count())};
    }
    for (int j = k + 1; j < n; ++j)
      for (const auto& ea : pr.cluster.entries())
        for (const auto& eb : scheme.pairs[j].cluster.entries()) {
          const double d = psh_distance(ea.point, eb.point);
          if (d < rep.delta_star) {
            rep.delta_star = d;
            rep.w3 = {k, j, d};
          }
        }
  }

  // overlap sampled at centers, cluster points and rings just inside each
  // boundary; a certified lower bound for the true sup, reported as M
  std::vector<DiskPoint> probes;
  for (const auto& pr : scheme.pairs) {
    probes.push_back(pr.region.center);
    for (const auto& e : pr.cluster.entries()) probes.push_back(e.point);
    const EuclidDisk e = to_euclid(pr.region);
    for (int i = 0; i < 32; ++i) {
      const Complex w = e.center + 0.99 * e.radius * std::polar(1.0, 2.0 * kPi * i / 32);
      probes.push_back(DiskPoint(w.real(), w.imag()));
    }
  }
  for (const DiskPoint& z : probes) {
    int cover = 0;
    for (const auto& pr : scheme.pairs)
      if (region_contains(pr.region, z)) ++cover;
    rep.overlap_bound = std::max(rep.overlap_bound, cover);
  }

  const auto& c = scheme.constants;
  rep.p1 = rep.r_star <= c.R + 1e-12;
  rep.p2 = rep.eps_star >= c.eps - 1e-12;
  rep.p3 = rep.delta_star >= c.delta - 1e-12;
  rep.p4 = rep.b_star <= c.B;
  return rep;
}

InterpolationScheme build_scheme(const PointSet& z_set, double delta, double eps,
                                 double r_ceiling) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("build_scheme: delta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("build_scheme: eps must lie in (0, 1)");
  if (!(r_ceiling > 0.0 && r_ceiling < 1.0))
    throw std::invalid_argument("build_scheme: diameter ceiling must lie in (0, 1)");
  // largest region radius whose diameter 2 rho/(1+rho^2) fits under the ceiling
  const double rho_max = (1.0 - std::sqrt((1.0 - r_ceiling) * (1.0 + r_ceiling))) / r_ceiling;

  const auto& es = z_set.entries();
  const int n = static_cast<int>(es.size());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&parent](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (psh_distance(es[i].point, es[j].point) < delta) {
        const int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  // components keyed by their first member, so pair order is canonical
  std::vector<std::vector<int>> comps;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[slot[r]].push_back(i);
  }

  InterpolationScheme out;
  out.constants.R = r_ceiling;
  out.constants.eps = eps;
  out.constants.delta = delta;
  for (const auto& comp : comps) {
    std::vector<PointEntry> members;
    std::vector<DiskPoint> pts;
    for (int i : comp) {
      members.push_back(es[i]);
      pts.push_back(es[i].point);
    }
    PointSet cluster(std::move(members));
    const DiskPoint center = chebyshev_center(pts);
    double rad = 0.0;
    for (const DiskPoint& q : pts) rad = std::max(rad, psh_distance(center, q));
    const double rho = psh_add(rad, eps);
    if (rho > rho_max + 1e-12)
      throw std::domain_error(
          "build_scheme: a cluster plus clearance exceeds the diameter ceiling; "
          "the set is too dense for the requested delta");
    out.constants.B = std::max(out.constants.B, cluster.total_count());
    out.pairs.push_back({DiskRegion{center, rho}, std::move(cluster)});
  }
  return out;
}

InterpolationScheme subscheme(const InterpolationScheme& scheme,
                              const std::vector<std::optional<PointSet>>& keep) {
  if (keep.size() != scheme.pairs.size())
    throw std::invalid_argument("subscheme: keep list length must match the pairs");
  InterpolationScheme out;
  out.constants = scheme.constants;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (!keep[k]) continue;  // dropped pair
    const PointSet& sub = *keep[k];
    if (sub.distinct_count() == 0)
      throw std::domain_error("subscheme: kept cluster is empty; drop the pair instead");
    for (const auto& e : sub.entries()) {
      bool found = false;
      for (const auto& f : scheme.pairs[k].cluster.entries())
        if (f.point.re == e.point.re && f.point.im == e.point.im && e.mult <= f.mult)
          found = true;
      if (!found)
        throw std::domain_error("subscheme: kept cluster is not a sub-multiset");
    }
    out.pairs.push_back({scheme.pairs[k].region, sub});
  }
  return out;
}

PerturbedScheme perturb_scheme(const InterpolationScheme& scheme,
                               const std::vector<double>& factors) {
  if (factors.size() != scheme.pairs.size())
    throw std::invalid_argument("perturb_scheme: factor list length must match the pairs");
  for (double r : factors)
    if (!(r > 0.0 && r <= 1.0))
      throw std::invalid_argument("perturb_scheme: factors must lie in (0, 1]");

  PerturbedScheme out;
  out.scheme.constants = scheme.constants;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const double f = factors[k];
    const auto& pr = scheme.pairs[k];
    if (f == 1.0) {
      out.scheme.pairs.push_back(pr);
      continue;
    }
    const EuclidDisk e = to_euclid(pr.region);

    std::vector<PointEntry> moved;
    std::vector<DiskPoint> samples;
    samples.push_back(pr.region.center);
    for (const auto& en : pr.cluster.entries()) {
      moved.push_back({DiskPoint(f * en.point.re, f * en.point.im), en.mult});
      samples.push_back(en.point);
    }
    for (int i = 0; i < 64; ++i) {
      const Complex w = e.center + e.radius * std::polar(1.0, 2.0 * kPi * i / 64);
      samples.push_back(DiskPoint(w.real(), w.imag()));
    }
    for (const DiskPoint& z : samples)
      out.eta_star =
          std::max(out.eta_star, psh_distance(DiskPoint(f * z.re, f * z.im), z));

    out.scheme.pairs.push_back(
        {region_from_euclid(EuclidDisk{f * e.center, f * e.radius}),
         PointSet(std::move(moved))});
  }
  return out;
}

Jet jet_of(const AnalyticFn& f, const PointSet& cluster) {
  Jet jet;
  constexpr int n = 64;
  for (const auto& e : cluster.entries()) {
    const double rc = 0.1 * (1.0 - e.point.abs());
    std::vector<Complex> ring(n);
    for (int s = 0; s < n; ++s) {
      const Complex w = e.point.c() + rc * std::polar(1.0, 2.0 * kPi * s / n);
      ring[s] = f(DiskPoint(w.real(), w.imag()));
    }
    std::vector<Complex> coef(e.mult);
    for (int j = 0; j < e.mult; ++j) {
      Complex c = 0.0;
      for (int s = 0; s < n; ++s)
        c += ring[s] * std::polar(1.0, -2.0 * kPi * s * j / n);
      coef[j] = c / (double(n) * std::pow(rc, j));
    }
    jet.taylor.push_back(std::move(coef));
  }
  return jet;
}

CosetNormResult coset_norm(const DiskRegion& region, const PointSet& cluster,
                           const Jet& jet, const Weight& phi, double p,
                           double alpha, int basis_dim, int quad_res) {
  if (!(p > 0.0)) throw std::invalid_argument("coset_norm: p must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("coset_norm: alpha must be positive");
  if (quad_res < 8) throw std::invalid_argument("coset_norm: quad_res must be >= 8");
  if (jet.taylor.size() != static_cast<std::size_t>(cluster.distinct_count()))
    throw std::invalid_argument("coset_norm: jet length does not match the cluster");
  for (int i = 0; i < cluster.distinct_count(); ++i)
    if (jet.taylor[i].size() != static_cast<std::size_t>(cluster.entries()[i].mult))
      throw std::invalid_argument("coset_norm: jet depth does not match a multiplicity");
  const int m = cluster.total_count();
  if (basis_dim < m)
    throw std::invalid_argument("coset_norm: basis_dim must cover the jet");

  const EuclidDisk e = to_euclid(region);
  const DiskGrid grid = build_grid(region, quad_res, Measure::area);
  const int nq = static_cast<int>(grid.nodes.size());

  Eigen::VectorXd wbase(nq);
  Eigen::MatrixXcd vand(nq, basis_dim);
  for (int i = 0; i < nq; ++i) {
    const DiskPoint z = grid.nodes[i];
    wbase(i) = grid.weights[i] * std::exp(-p * phi.value_at(z) +
                                          (alpha * p - 1.0) * std::log1p(-z.abs2()));
    const Complex zeta = (z.c() - e.center) / e.radius;
    vand(i, 0) = 1.0;
    for (int k = 1; k < basis_dim; ++k) vand(i, k) = vand(i, k - 1) * zeta;
  }

  // jet constraints on the coefficients: the j-th Taylor coefficient at z_i is
  // sum_k a_k binom(k, j) zeta_i^{k-j} / rho^j
  Eigen::MatrixXcd cons = Eigen::MatrixXcd::Zero(m, basis_dim);
  Eigen::VectorXcd rhs(m);
  int row = 0;
  for (int i = 0; i < cluster.distinct_count(); ++i) {
    const Complex zeta_i = (cluster.entries()[i].point.c() - e.center) / e.radius;
    for (int j = 0; j < cluster.entries()[i].mult; ++j) {
      Complex zpow = 1.0;
      for (int k = j; k < basis_dim; ++k) {
        cons(row, k) = binom(k, j) * zpow / std::pow(e.radius, j);
        zpow *= zeta_i;
      }
      rhs(row) = jet.taylor[i][j];
      ++row;
    }
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(cons);
  Eigen::VectorXcd a0 = cod.solve(rhs);
  const double feas = (cons * a0 - rhs).cwiseAbs().maxCoeff();
  if (feas > 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
    throw std::domain_error("coset_norm: jet constraints are infeasible");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cons, Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-12 * std::max(1.0, smax)) ++rank;
  const int null_dim = basis_dim - rank;
  const Eigen::MatrixXcd null_basis = svd.matrixV().rightCols(null_dim);

  const auto weighted_solve = [&](const Eigen::VectorXd& w) -> Eigen::VectorXcd {
    if (null_dim == 0) return a0;
    const Eigen::VectorXd sq = w.cwiseSqrt();
    const Eigen::MatrixXcd lhs_m = sq.asDiagonal() * (vand * null_basis);
    const Eigen::VectorXcd rhs_v = -(sq.asDiagonal() * (vand * a0));
    const Eigen::VectorXcd y = lhs_m.colPivHouseholderQr().solve(rhs_v);
    return a0 + null_basis * y;
  };
  const auto p_norm = [&](const Eigen::VectorXcd& a) {
    const Eigen::VectorXd mod = (vand * a).cwiseAbs();
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) acc += wbase(i) * std::pow(mod(i), p);
    return std::pow(acc, 1.0 / p);
  };

  CosetNormResult out;
  out.quad_res = quad_res;
  out.basis_dim = basis_dim;

  Eigen::VectorXcd a = weighted_solve(wbase);
  double norm = p_norm(a);
  out.iterations = 1;
  if (p != 2.0) {
    // reweighting |g|^{p-2} turns the p-norm objective into successive
    // weighted least squares; moduli are floored so p < 2 cannot divide by 0
    bool settled = false;
    for (int it = 0; it < 60 && !settled; ++it) {
      const Eigen::VectorXd mod = (vand * a).cwiseAbs();
      const double floor_at = 1e-8 * std::max(mod.maxCoeff(), 1e-300);
      Eigen::VectorXd w(nq);
      for (int i = 0; i < nq; ++i)
        w(i) = wbase(i) * std::pow(std::max(mod(i), floor_at), p - 2.0);
      a = weighted_solve(w);
      const double next = p_norm(a);
      ++out.iterations;
      settled = std::abs(next - norm) <= 1e-8 * std::max(1.0, next);
      norm = next;
    }
    out.converged = settled;
  }

  out.norm = norm;
  out.representative.assign(a.data(), a.data() + basis_dim);
  return out;
}

Complex representative_at(const CosetNormResult& result, const DiskRegion& region,
                          DiskPoint z) {
  const EuclidDisk e = to_euclid(region);
  const Complex zeta = (z.c() - e.center) / e.radius;
  Complex acc = 0.0;
  for (int k = static_cast<int>(result.representative.size()) - 1; k >= 0; --k)
    acc = acc * zeta + result.representative[k];
  return acc;
}

OperatorNormCheck phi_operator_norm_check(const InterpolationScheme& scheme,
                                          const AnalyticFn& f, const Weight& phi,
                                          double p, double alpha, int basis_dim,
                                          int quad_res) {
  const AdmissibilityReport rep = check_admissible(scheme);
  if (!rep.pass())
    throw std::domain_error("phi_operator_norm_check: scheme is not admissible");

  OperatorNormCheck out;
  out.overlap = rep.overlap_bound;
  for (const auto& pr : scheme.pairs) {
    const auto r =
        coset_norm(pr.region, pr.cluster, jet_of(f, pr.cluster), phi, p, alpha,
                   basis_dim, quad_res);
    out.lhs += std::pow(r.norm, p);
  }
  out.rhs = out.overlap *
            zero_space_norm(f, PointSet(), phi, p, alpha, std::max(96, quad_res), 0.999)
                .value;
  out.ok = out.lhs <= out.rhs + 1e-6 * std::max(1.0, out.rhs);
  return out;
}

std::string scheme_to_json(const InterpolationScheme& scheme) {
  nlohmann::json j;
  j["constants"] = {{"R", scheme.constants.R},
                    {"eps", scheme.constants.eps},
                    {"delta", scheme.constants.delta},
                    {"B", scheme.constants.B}};
  j["pairs"] = nlohmann::json::array();
  for (const auto& pr : scheme.pairs) {
    nlohmann::json pj;
    pj["center"] = {{"re", pr.region.center.re}, {"im", pr.region.center.im}};
    pj["radius"] = pr.region.radius;
    pj["cluster"] = cluster_json(pr.cluster);
    j["pairs"].push_back(pj);
  }
  return j.dump(2);
}

InterpolationScheme scheme_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw std::invalid_argument("scheme_from_json: malformed JSON");
  }
  if (!j.is_object() || !j.contains("pairs") || !j.contains("constants"))
    throw std::invalid_argument("scheme_from_json: expected pairs and constants");
  InterpolationScheme out;
  const auto& c = j.at("constants");
  out.constants.R = c.at("R").get<double>();
  out.constants.eps = c.at("eps").get<double>();
  out.constants.delta = c.at("delta").get<double>();
  out.constants.B = c.at("B").get<int>();
  for (const auto& pj : j.at("pairs")) {
    const auto& ctr = pj.at("center");
    DiskRegion region(DiskPoint(ctr.at("re").get<double>(), ctr.at("im").get<double>()),
                      pj.at("radius").get<double>());
    out.pairs.push_back({region, pointset_from_json(pj.at("cluster").dump())});
  }
  return out;
}

void save_scheme(const InterpolationScheme& scheme, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_scheme: cannot open " + path);
  out << scheme_to_json(scheme) << '\n';
}

InterpolationScheme load_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_scheme: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return scheme_from_json(text);
}

}  // namespace bergman
