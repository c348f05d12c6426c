#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace opfunc {

/// Axis-aligned box [lo_i, hi_i) in R^n, used to window enumerations.
struct Box {
  Eigen::VectorXd lo, hi;
};

/// A dyadic cube Q x R in R^{2n}: sidelength 2^level, with Q and R given
/// by integer corners in units of the sidelength (half-open intervals
/// [q_i * 2^level, (q_i + 1) * 2^level)).
struct DyadicCube {
  int n = 0;
  int level = 0;  // sidelength = 2^level; level >= 0 by contract
  std::vector<std::int64_t> q, r;

  double sidelength() const;
  bool contains(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  DyadicCube parent() const;
  bool operator==(const DyadicCube& o) const = default;
};

/// The unique level-m dyadic cube containing (x, y); floor semantics.
DyadicCube cube_of(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m);

/// True iff level == 0, or level > 0 and some coordinate separates the
/// doubled cubes: exists j with |q_j - r_j| >= 2 in corner units
/// (equivalently, the open 2-dilate misses the diagonal).
/// Throws for level < 0: sub-unit cubes never arise.
bool is_admissible(const DyadicCube& c);

/// Walk up from the level-0 cube of (x, y) while the dyadic parent stays
/// admissible; returns the last admissible cube.
DyadicCube maximal_admissible(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

/// All dyadic cubes R of the same sidelength as Q inside the window such
/// that Q x R is a maximal admissible cube.
std::vector<DyadicCube> partners(int n, int level,
                                 const std::vector<std::int64_t>& q,
                                 const Box& window);

struct PartitionReport {
  int samples = 0;
  int containment_violations = 0;
  int disjointness_violations = 0;
  bool ok() const {
    return containment_violations == 0 && disjointness_violations == 0;
  }
};

/// Seeded sample check that maximal cubes contain their defining pair and
/// that any two returned cubes are identical or disjoint.
PartitionReport partition_check(const Box& window, int n, int samples,
                                std::uint64_t seed);

nlohmann::json cube_to_json(const DyadicCube& c);
DyadicCube cube_from_json(const nlohmann::json& j);

}  // namespace opfunc
