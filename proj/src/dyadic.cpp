#include "opfunc/dyadic.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "opfunc/rng.hpp"

namespace opfunc {

namespace {

std::int64_t floor_div2(std::int64_t v) {
  return v >= 0 ? v / 2 : (v - 1) / 2;
}

std::int64_t corner_of(double coord, int level) {
  return static_cast<std::int64_t>(std::floor(std::ldexp(coord, -level)));
}

// nested-or-equal test in the dyadic lattice; cubes at different levels
// are disjoint unless one is an ancestor of the other
bool nested(const DyadicCube& a, const DyadicCube& b) {
  const DyadicCube* lo = &a;
  const DyadicCube* hi = &b;
  if (lo->level > hi->level) std::swap(lo, hi);
  DyadicCube c = *lo;
  while (c.level < hi->level) c = c.parent();
  return c.q == hi->q && c.r == hi->r;
}

}  // namespace

double DyadicCube::sidelength() const { return std::ldexp(1.0, level); }

bool DyadicCube::contains(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) const {
  for (int i = 0; i < n; ++i) {
    if (corner_of(x(i), level) != q[i]) return false;
    if (corner_of(y(i), level) != r[i]) return false;
  }
  return true;
}

DyadicCube DyadicCube::parent() const {
  DyadicCube p;
  p.n = n;
  p.level = level + 1;
  p.q.resize(n);
  p.r.resize(n);
  for (int i = 0; i < n; ++i) {
    p.q[i] = floor_div2(q[i]);
    p.r[i] = floor_div2(r[i]);
  }
  return p;
}

DyadicCube cube_of(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int m) {
  if (x.size() != y.size() || x.size() == 0)
    throw std::invalid_argument("cube_of: x and y must share a positive dim");
  DyadicCube c;
  c.n = static_cast<int>(x.size());
  c.level = m;
  c.q.resize(c.n);
  c.r.resize(c.n);
  for (int i = 0; i < c.n; ++i) {
    c.q[i] = corner_of(x(i), m);
    c.r[i] = corner_of(y(i), m);
  }
  return c;
}

bool is_admissible(const DyadicCube& c) {
  if (c.level < 0)
    throw std::invalid_argument(
        "is_admissible: sub-unit cubes are outside the decomposition");
  if (c.level == 0) return true;
  // |center(Q)_j - center(R)_j| >= 2l  <=>  |q_j - r_j| >= 2 in corner units
  for (int i = 0; i < c.n; ++i)
    if (std::llabs(c.q[i] - c.r[i]) >= 2) return true;
  return false;
}

DyadicCube maximal_admissible(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  DyadicCube cur = cube_of(x, y, 0);
  while (cur.level < 62) {
    DyadicCube up = cur.parent();
    if (!is_admissible(up)) break;
    cur = up;
  }
  return cur;
}

std::vector<DyadicCube> partners(int n, int level,
                                 const std::vector<std::int64_t>& q,
                                 const Box& window) {
  if (static_cast<int>(q.size()) != n || window.lo.size() != n)
    throw std::invalid_argument("partners: dimension mismatch");
  std::vector<std::int64_t> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = corner_of(window.lo(i), level);
    hi[i] = corner_of(window.hi(i) - 1e-12, level);
    if (hi[i] < lo[i])
      throw std::invalid_argument("partners: empty window");
  }
  std::vector<DyadicCube> out;
  std::vector<std::int64_t> r = lo;
  for (;;) {
    DyadicCube c;
    c.n = n;
    c.level = level;
    c.q = q;
    c.r = r;
    if (is_admissible(c) && !is_admissible(c.parent())) out.push_back(c);
    int d = n - 1;
    while (d >= 0 && r[d] == hi[d]) { r[d] = lo[d]; --d; }
    if (d < 0) break;
    ++r[d];
  }
  return out;
}

PartitionReport partition_check(const Box& window, int n, int samples,
                                std::uint64_t seed) {
  PartitionReport rep;
  rep.samples = samples;
  Rng rng(seed);
  std::map<std::pair<int, std::pair<std::vector<std::int64_t>,
                                    std::vector<std::int64_t>>>,
           int>
      seen;
  std::vector<DyadicCube> cubes;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = rng.uniform(window.lo(i % window.lo.size()),
                         window.hi(i % window.hi.size()));
      y(i) = rng.uniform(window.lo(i % window.lo.size()),
                         window.hi(i % window.hi.size()));
    }
    const DyadicCube c = maximal_admissible(x, y);
    if (!c.contains(x, y)) ++rep.containment_violations;
    auto key = std::make_pair(c.level, std::make_pair(c.q, c.r));
    if (seen.emplace(key, 1).second) cubes.push_back(c);
  }
  for (std::size_t i = 0; i < cubes.size(); ++i)
    for (std::size_t j = i + 1; j < cubes.size(); ++j)
      if (nested(cubes[i], cubes[j])) ++rep.disjointness_violations;
  return rep;
}

nlohmann::json cube_to_json(const DyadicCube& c) {
  return {{"n", c.n}, {"m", c.level}, {"q", c.q}, {"r", c.r}};
}

DyadicCube cube_from_json(const nlohmann::json& j) {
  DyadicCube c;
  c.n = j.at("n").get<int>();
  c.level = j.at("m").get<int>();
  c.q = j.at("q").get<std::vector<std::int64_t>>();
  c.r = j.at("r").get<std::vector<std::int64_t>>();
  return c;
}

}  // namespace opfunc
