#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

struct PointEntry {
  DiskPoint point;
  int mult = 1;
};

/** Finite multiset of disk points.  Canonical order: modulus, then argument
 * in [0, 2pi); bitwise-equal points merge their multiplicities.  `truncation`
 * is set when the set came from a generator cut off at |z| <= r_max. */
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<PointEntry> entries);
  static PointSet of(const std::vector<DiskPoint>& pts);

  const std::vector<PointEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int distinct_count() const { return static_cast<int>(entries_.size()); }
  int total_count() const;

  std::optional<double> truncation;

 private:
  std::vector<PointEntry> entries_;
};

// k_Z(z) = sum mult * (1-|a|^2)^2 / |1 - conj(a) z|^2 * |z|^2 / 2
double k_function(const PointSet& z_set, DiskPoint z);

// closed-form invariant Laplacian: sum mult * (1 - psh(z,a)^2)^2 / 2
double k_laplacian(const PointSet& z_set, DiskPoint z);

// circle mean of k_Z: (r^2/2) sum mult * (1-|a|^2)^2 / (1 - |a|^2 r^2)
double k_hat(const PointSet& z_set, double r);

// sup over probe centers of the multiplicity count of Z inside D(a, R);
// probes are the points of Z plus a covering lattice, so a certified lower
// bound of the true sup
int density_count(const PointSet& z_set, double big_r);

// min pairwise distance over distinct points; 0 when a multiplicity exceeds 1;
// +infinity for fewer than two points counted with multiplicity
double separation(const PointSet& z_set);

// image under the involution M_a, multiplicities kept
PointSet transform(const PointSet& z_set, DiskPoint a);

// sum mult * (1-|a|^2)^2
double square_summability(const PointSet& z_set);

/** Ring lattice: radii step by `spacing` in the metric, ring j holds enough
 * equispaced points to keep neighbor gaps about `spacing`.  Deterministic;
 * growing r_max only appends points. */
PointSet hyperbolic_lattice(double spacing, double r_max);

// "lattice:<spacing>:<r_max>"
PointSet parse_pointset_spec(const std::string& spec);

std::string to_json_string(const PointSet& z_set);
PointSet pointset_from_json(const std::string& text);
void save_pointset(const PointSet& z_set, const std::string& path);
PointSet load_pointset(const std::string& path);

}  // namespace bergman
