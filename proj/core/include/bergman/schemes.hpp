#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct SchemeConstants {
  double R = 0.9;     // ceiling on region diameters
  double eps = 0.0;   // clearance of clusters inside their regions
  double delta = 0.0; // floor on inter-cluster distance
  int B = 0;          // ceiling on multiplicity-counted cluster size
};

struct SchemePair {
  DiskRegion region;
  PointSet cluster;
};

/** Regions with their point clusters and the constants claimed for them.
 * Clusters are pairwise disjoint multisets, each nonempty, each sitting
 * eps-deep inside its region; claims are audited by check_admissible. */
struct InterpolationScheme {
  std::vector<SchemePair> pairs;
  SchemeConstants constants;
};

struct AdmissibilityWitness {
  int k = -1, j = -1;  // offending pair indices, j = -1 when unary
  double value = 0.0;  // extremal measured quantity
};

struct AdmissibilityReport {
  bool p1 = false;  // region diameters below R
  bool p2 = false;  // clusters at least eps from the region complements
  bool p3 = false;  // distinct clusters at least delta apart
  bool p4 = false;  // cluster sizes at most B
  AdmissibilityWitness w1, w2, w3, w4;
  double r_star = 0.0;      // largest region diameter
  double eps_star = 0.0;    // smallest cluster-to-complement margin
  double delta_star = 0.0;  // smallest inter-cluster distance, inf when vacuous
  int b_star = 0;           // largest cluster size
  int overlap_bound = 0;    // regions covering the busiest probe point

  bool pass() const { return p1 && p2 && p3 && p4; }
};

/** Taylor data: taylor[i][j] prescribes g^(j)(z_i)/j! at cluster entry i for
 * j below the entry's multiplicity. */
struct Jet {
  std::vector<std::vector<Complex>> taylor;
};

/** Reduced norm of a coset with the achieved minimizer.  `representative`
 * holds coefficients in the recentered coordinate (z - c)/rho of the
 * region's Euclidean realization; `norm` is the p-th root of the minimized
 * integral and an upper bound for the true infimum. */
struct CosetNormResult {
  double norm = 0.0;
  std::vector<Complex> representative;
  int quad_res = 0;
  int basis_dim = 0;
  bool converged = true;  // reweighting reached tolerance (p != 2)
  int iterations = 0;
};

struct OperatorNormCheck {
  double lhs = 0.0;  // sum over clusters of norm^p
  double rhs = 0.0;  // overlap bound times the global weighted norm of f
  int overlap = 0;
  bool ok = false;
};

/** Audit the four scheme axioms against the claimed constants and measure
 * the tightest ones that would pass, plus the region overlap bound sampled
 * on centers, cluster points and rings just inside each boundary. */
AdmissibilityReport check_admissible(const InterpolationScheme& scheme);

/** Single-linkage clusters at scale delta (edges where psh < delta), each
 * covered by a pseudohyperbolic disk with clearance eps.  Throws when a
 * cluster plus clearance cannot fit under the diameter ceiling, which is how
 * overly dense input surfaces. */
InterpolationScheme build_scheme(const PointSet& z_set, double delta, double eps,
                                 double r_ceiling = 0.9);

/** Thin the clusters: keep[k] replaces cluster k (must be a nonempty
 * sub-multiset) and an empty slot in `keep` drops the pair.  Regions and
 * claimed constants are unchanged; the measured constants can only improve. */
InterpolationScheme subscheme(const InterpolationScheme& scheme,
                              const std::vector<std::optional<PointSet>>& keep);

struct PerturbedScheme {
  InterpolationScheme scheme;
  double eta_star = 0.0;  // largest sampled displacement psh(r_k z, z)
};

// radial scaling z -> r_k z applied to region k and its cluster
PerturbedScheme perturb_scheme(const InterpolationScheme& scheme,
                               const std::vector<double>& factors);

// Taylor data of f at the cluster points, depths given by multiplicities
Jet jet_of(const AnalyticFn& f, const PointSet& cluster);

/** Minimize Int_G |g e^{-phi}|^p (1-|z|^2)^{alpha p - 1} dA over polynomials
 * of degree < basis_dim matching the jet.  p = 2 is an exact constrained
 * least-squares solve; other p run iteratively reweighted least squares from
 * the p = 2 point until the norm moves less than 1e-8 relatively. */
CosetNormResult coset_norm(const DiskRegion& region, const PointSet& cluster,
                           const Jet& jet, const Weight& phi, double p,
                           double alpha, int basis_dim = 16, int quad_res = 24);

// evaluate a stored representative at a point of the original coordinates
Complex representative_at(const CosetNormResult& result, const DiskRegion& region,
                          DiskPoint z);

/** Sum of coset norms against the overlap bound times the global norm:
 * lhs = sum_k ||w_k||^p, rhs = M ||f||^p.  Valid as an inequality witness
 * when f is a polynomial representable within basis_dim. */
OperatorNormCheck phi_operator_norm_check(const InterpolationScheme& scheme,
                                          const AnalyticFn& f, const Weight& phi,
                                          double p, double alpha,
                                          int basis_dim = 16, int quad_res = 24);

std::string scheme_to_json(const InterpolationScheme& scheme);
InterpolationScheme scheme_from_json(const std::string& text);
void save_scheme(const InterpolationScheme& scheme, const std::string& path);
InterpolationScheme load_scheme(const std::string& path);

}  // namespace bergman
