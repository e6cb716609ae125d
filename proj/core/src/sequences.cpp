#include "bergman/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

double canonical_arg(DiskPoint p) {
  const double t = std::atan2(p.im, p.re);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

bool canonical_less(const PointEntry& a, const PointEntry& b) {
  const double ra = a.point.abs2(), rb = b.point.abs2();
  if (ra != rb) return ra < rb;
  const double ta = canonical_arg(a.point), tb = canonical_arg(b.point);
  if (ta != tb) return ta < tb;
  if (a.point.re != b.point.re) return a.point.re < b.point.re;
  return a.point.im < b.point.im;
}

bool same_point(DiskPoint a, DiskPoint b) { return a.re == b.re && a.im == b.im; }

}  // namespace

PointSet::PointSet(std::vector<PointEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.mult < 1) throw std::invalid_argument("PointSet: multiplicities must be >= 1");
  }
  std::sort(entries_.begin(), entries_.end(), canonical_less);
  std::vector<PointEntry> merged;
  for (const auto& e : entries_) {
    if (!merged.empty() && same_point(merged.back().point, e.point))
      merged.back().mult += e.mult;
    else
      merged.push_back(e);
  }
  entries_ = std::move(merged);
}

PointSet PointSet::of(const std::vector<DiskPoint>& pts) {
  std::vector<PointEntry> es;
  es.reserve(pts.size());
  for (const auto& p : pts) es.push_back({p, 1});
  return PointSet(std::move(es));
}

int PointSet::total_count() const {
  int n = 0;
  for (const auto& e : entries_) n += e.mult;
  return n;
}

double k_function(const PointSet& z_set, DiskPoint z) {
  const Complex zc = z.c();
  const double z2 = z.abs2();
  double s = 0.0;
  for (const auto& e : z_set.entries()) {
    const double one_a = 1.0 - e.point.abs2();
    const double den = std::norm(1.0 - std::conj(e.point.c()) * zc);
    s += e.mult * one_a * one_a / den;
  }
  return s * z2 / 2.0;
}

double k_laplacian(const PointSet& z_set, DiskPoint z) {
  double s = 0.0;
  for (const auto& e : z_set.entries()) {
    const double psi = psh_distance(z, e.point);
    const double t = 1.0 - psi * psi;
    s += e.mult * t * t;
  }
  return s / 2.0;
}

double k_hat(const PointSet& z_set, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("k_hat: r must lie in [0, 1)");
  const double r2 = r * r;
  double s = 0.0;
  for (const auto& e : z_set.entries()) {
    const double one_a = 1.0 - e.point.abs2();
    s += e.mult * one_a * one_a / (1.0 - e.point.abs2() * r2);
  }
  return s * r2 / 2.0;
}

int density_count(const PointSet& z_set, double big_r) {
  if (!(big_r > 0.0 && big_r < 1.0)) throw std::invalid_argument("density_count: R must lie in (0, 1)");
  if (z_set.empty()) return 0;
  auto count_at = [&](DiskPoint a) {
    int n = 0;
    for (const auto& e : z_set.entries())
      if (psh_distance(a, e.point) < big_r) n += e.mult;
    return n;
  };
  int best = 0;
  double max_mod = 0.0;
  for (const auto& e : z_set.entries()) {
    best = std::max(best, count_at(e.point));
    max_mod = std::max(max_mod, e.point.abs());
  }
  const double cover = std::min(psh_add(max_mod, big_r), 0.995);
  const PointSet probes = hyperbolic_lattice(big_r / 2.0, cover);
  for (const auto& e : probes.entries()) best = std::max(best, count_at(e.point));
  return best;
}

double separation(const PointSet& z_set) {
  if (z_set.total_count() < 2) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  const auto& es = z_set.entries();
  for (const auto& e : es)
    if (e.mult > 1) return 0.0;
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j)
      d = std::min(d, psh_distance(es[i].point, es[j].point));
  return d;
}

PointSet transform(const PointSet& z_set, DiskPoint a) {
  std::vector<PointEntry> es;
  es.reserve(z_set.entries().size());
  for (const auto& e : z_set.entries()) es.push_back({mobius(a, e.point), e.mult});
  PointSet out(std::move(es));
  out.truncation = z_set.truncation;  // truncation stays a property of the source set
  return out;
}

double square_summability(const PointSet& z_set) {
  double s = 0.0;
  for (const auto& e : z_set.entries()) {
    const double t = 1.0 - e.point.abs2();
    s += e.mult * t * t;
  }
  return s;
}

PointSet hyperbolic_lattice(double spacing, double r_max) {
  if (!(spacing > 0.0 && spacing < 1.0))
    throw std::invalid_argument("hyperbolic_lattice: spacing must lie in (0, 1)");
  if (!(r_max > 0.0 && r_max < 1.0))
    throw std::invalid_argument("hyperbolic_lattice: r_max must lie in (0, 1)");
  std::vector<PointEntry> pts;
  pts.push_back({DiskPoint(0.0, 0.0), 1});
  double rho = 0.0;
  for (int ring = 1;; ++ring) {
    rho = psh_add(rho, spacing);
    if (rho > r_max) break;
    const int n = static_cast<int>(std::ceil(2.0 * kPi * rho / ((1.0 - rho * rho) * spacing)));
    const double offset = (ring % 2 == 1) ? 0.0 : kPi / n;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * kPi * k / n + offset;
      pts.push_back({DiskPoint(rho * std::cos(th), rho * std::sin(th)), 1});
    }
  }
  PointSet out(std::move(pts));
  out.truncation = r_max;
  return out;
}

PointSet parse_pointset_spec(const std::string& spec) {
  const std::string prefix = "lattice:";
  if (spec.rfind(prefix, 0) != 0)
    throw std::invalid_argument("unknown point set spec: " + spec);
  const size_t mid = spec.find(':', prefix.size());
  if (mid == std::string::npos)
    throw std::invalid_argument("point set spec: lattice:<spacing>:<r_max>");
  const double spacing = std::stod(spec.substr(prefix.size(), mid - prefix.size()));
  const double r_max = std::stod(spec.substr(mid + 1));
  return hyperbolic_lattice(spacing, r_max);
}

std::string to_json_string(const PointSet& z_set) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& e : z_set.entries())
    pts.push_back({{"re", e.point.re}, {"im", e.point.im}, {"mult", e.mult}});
  if (!z_set.truncation) return pts.dump();
  nlohmann::json root;
  root["points"] = pts;
  root["truncation"] = *z_set.truncation;
  return root.dump();
}

PointSet pointset_from_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("point set JSON: ") + e.what());
  }
  std::optional<double> truncation;
  const nlohmann::json* pts = &root;
  if (root.is_object()) {
    if (!root.contains("points")) throw std::invalid_argument("point set JSON: missing 'points'");
    pts = &root["points"];
    if (root.contains("truncation")) truncation = root["truncation"].get<double>();
  }
  if (!pts->is_array()) throw std::invalid_argument("point set JSON: expected an array of records");
  std::vector<PointEntry> es;
  for (const auto& rec : *pts) {
    if (!rec.contains("re") || !rec.contains("im"))
      throw std::invalid_argument("point set JSON: records need re and im");
    PointEntry e;
    e.point = DiskPoint(rec["re"].get<double>(), rec["im"].get<double>());
    e.mult = rec.value("mult", 1);
    es.push_back(e);
  }
  PointSet out(std::move(es));
  out.truncation = truncation;
  return out;
}

void save_pointset(const PointSet& z_set, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json_string(z_set) << "\n";
}

PointSet load_pointset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return pointset_from_json(text);
}

}  // namespace bergman
