#pragma once
// Rate-region geometry: polytopes from linear rate constraints, unions over
// candidate distributions, convex hulls, membership and inclusion tests.
// Regions live in R_+^d (d = 2 or 3) and are downward closed; nonnegative
// constraint coefficients make that automatic.
//
// Support functions are sampled on a fixed deterministic direction set
// (64 uniform angles for d=2, a folded Fibonacci sphere plus the canonical
// constraint normals for d=3) so inclusion tests are reproducible.

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "statecap/prob.hpp"

namespace statecap {

// Coordinates are (R1,R2) for d=2 and (R0,R1,R2) for d=3; unused slots stay 0.
using RatePoint = std::array<double, 3>;

struct LinearRateConstraint {
  std::array<double, 3> coeff{0.0, 0.0, 0.0}; // nonnegative, typically 0/1/2
  double rhs = 0.0;                           // bits; may be negative
};

struct SupportSample {
  std::array<double, 3> dir{0.0, 0.0, 0.0}; // unit length, nonnegative
  double value = 0.0;
};

struct RateRegion {
  int dim = 2;
  bool feasible = true; // false when constraints cut R_+^d to nothing
  std::vector<RatePoint> corners;
  std::vector<SupportSample> support;
  std::vector<SupportSample> facets;    // exact bounding half-spaces
  std::vector<RatePoint> raw_cloud;     // pre-hull corner cloud (unions only)
};

inline double dot3(const std::array<double, 3>& a, const RatePoint& p) {
  return a[0] * p[0] + a[1] * p[1] + a[2] * p[2];
}

inline RatePoint origin_point() { return {0.0, 0.0, 0.0}; }

// ---------------------------------------------------------------------------
// Fixed support directions
// ---------------------------------------------------------------------------
inline const std::vector<std::array<double, 3>>& support_directions(int dim) {
  static const std::vector<std::array<double, 3>> dirs2 = [] {
    std::vector<std::array<double, 3>> d;
    for (int j = 0; j < 64; ++j) {
      double th = (M_PI / 2.0) * j / 63.0;
      d.push_back({std::cos(th), std::sin(th), 0.0});
    }
    return d;
  }();
  static const std::vector<std::array<double, 3>> dirs3 = [] {
    std::vector<std::array<double, 3>> d;
    const int n = 192;
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = ga * i;
      d.push_back({std::abs(r * std::cos(phi)), std::abs(r * std::sin(phi)), std::abs(z)});
    }
    const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0), s6 = 1.0 / std::sqrt(6.0);
    std::vector<std::array<double, 3>> canon = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
        {s2, s2, 0}, {s2, 0, s2}, {0, s2, s2}, {s3, s3, s3},
        {2 * s6, s6, s6}, {s6, 2 * s6, s6}, {s6, s6, 2 * s6}};
    d.insert(d.end(), canon.begin(), canon.end());
    return d;
  }();
  return dim == 2 ? dirs2 : dirs3;
}

inline double support_of(const RateRegion& r, const std::array<double, 3>& dir) {
  double best = 0.0;
  for (const auto& c : r.corners) best = std::max(best, dot3(dir, c));
  return best;
}

// ---------------------------------------------------------------------------
// Pareto archive: running non-dominated corner cloud with provenance.
// ---------------------------------------------------------------------------
template <typename Payload>
class ParetoArchive {
 public:
  struct Entry {
    RatePoint p;
    Payload tag;
  };

  explicit ParetoArchive(int dim) : dim_(dim) {}

  static bool dominates(const RatePoint& a, const RatePoint& b, int dim) {
    for (int i = 0; i < dim; ++i)
      if (a[i] < b[i] - 1e-12) return false;
    return true;
  }

  void push(const RatePoint& p, const Payload& tag) {
    for (const auto& e : entries_)
      if (dominates(e.p, p, dim_)) return;
    std::size_t w = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (!dominates(p, entries_[i].p, dim_)) {
        if (w != i) entries_[w] = std::move(entries_[i]);
        ++w;
      }
    entries_.resize(w);
    entries_.push_back({p, tag});
  }

  const std::vector<Entry>& entries() const { return entries_; }

  std::vector<RatePoint> points() const {
    std::vector<RatePoint> ps;
    ps.reserve(entries_.size());
    for (const auto& e : entries_) ps.push_back(e.p);
    return ps;
  }

 private:
  int dim_;
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Polytope from constraints (vertex enumeration)
// ---------------------------------------------------------------------------
namespace detail {

inline bool solve_active(const std::vector<std::array<double, 4>>& rows, int d, RatePoint& out) {
  // Gauss-Jordan on rows packed as (coeff[0..2], rhs); rhs lives at index 3.
  constexpr int kRhs = 3;
  std::array<std::array<double, 4>, 3> m{};
  for (int i = 0; i < d; ++i) m[i] = rows[i];
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-9) return false;
    std::swap(m[col], m[piv]);
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      for (int c = col; c < d; ++c) m[r][c] -= f * m[col][c];
      m[r][kRhs] -= f * m[col][kRhs];
    }
  }
  out = {0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) out[i] = m[i][kRhs] / m[i][i];
  return true;
}

} // namespace detail

/// All nonnegative vertices of {r >= 0 : constraints hold}. Dominated
/// vertices (including the origin) are kept: this is the raw polytope.
/// Infeasible systems come back as the origin-only region with
/// feasible = false.
inline RateRegion polytope_from_constraints(const std::vector<LinearRateConstraint>& cons, int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("polytope_from_constraints: dim must be 2 or 3");
  for (const auto& c : cons)
    for (int i = 0; i < dim; ++i)
      if (c.coeff[i] < 0.0) throw std::invalid_argument("polytope_from_constraints: negative coefficient");

  RateRegion reg;
  reg.dim = dim;

  bool infeasible = false;
  for (const auto& c : cons)
    if (c.rhs < -1e-12) infeasible = true;
  for (int i = 0; i < dim && !infeasible; ++i) {
    bool bounded = false;
    for (const auto& c : cons)
      if (c.coeff[i] > 1e-12) bounded = true;
    if (!bounded) throw std::invalid_argument("polytope_from_constraints: region unbounded in coordinate " +
                                              std::to_string(i));
  }
  if (infeasible) {
    reg.feasible = false;
    reg.corners = {origin_point()};
    for (const auto& d : support_directions(dim)) reg.support.push_back({d, 0.0});
    return reg;
  }

  // Hyperplanes: every constraint taken active, plus the coordinate planes.
  std::vector<std::array<double, 4>> planes;
  for (const auto& c : cons) planes.push_back({c.coeff[0], c.coeff[1], c.coeff[2], std::max(c.rhs, 0.0)});
  for (int i = 0; i < dim; ++i) {
    std::array<double, 4> ax{0, 0, 0, 0};
    ax[i] = 1.0;
    planes.push_back(ax);
  }

  const int np = static_cast<int>(planes.size());
  std::vector<RatePoint> verts;
  std::vector<int> idx(dim);
  auto try_combo = [&](const std::vector<int>& pick) {
    std::vector<std::array<double, 4>> rows;
    for (int i : pick) rows.push_back(planes[i]);
    RatePoint v;
    if (!detail::solve_active(rows, dim, v)) return;
    for (int i = 0; i < dim; ++i) {
      if (v[i] < -1e-9) return;
      if (v[i] < 0.0) v[i] = 0.0;
    }
    for (const auto& c : cons)
      if (dot3(c.coeff, v) > std::max(c.rhs, 0.0) + 1e-9) return;
    for (const auto& w : verts) {
      double dmax = 0.0;
      for (int i = 0; i < dim; ++i) dmax = std::max(dmax, std::abs(w[i] - v[i]));
      if (dmax < 1e-9) return;
    }
    verts.push_back(v);
  };
  if (dim == 2) {
    for (int a = 0; a < np; ++a)
      for (int b = a + 1; b < np; ++b) try_combo({a, b});
  } else {
    for (int a = 0; a < np; ++a)
      for (int b = a + 1; b < np; ++b)
        for (int c = b + 1; c < np; ++c) try_combo({a, b, c});
  }

  reg.corners = std::move(verts);
  if (reg.corners.empty()) reg.corners = {origin_point()};
  for (const auto& d : support_directions(dim)) reg.support.push_back({d, support_of(reg, d)});
  for (const auto& c : cons) {
    double n = std::sqrt(c.coeff[0] * c.coeff[0] + c.coeff[1] * c.coeff[1] + c.coeff[2] * c.coeff[2]);
    if (n < 1e-12) continue;
    reg.facets.push_back({{c.coeff[0] / n, c.coeff[1] / n, c.coeff[2] / n}, std::max(c.rhs, 0.0) / n});
  }
  return reg;
}

// ---------------------------------------------------------------------------
// Hulls and unions
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<RatePoint> pareto_filter(const std::vector<RatePoint>& pts, int dim) {
  ParetoArchive<int> a(dim);
  for (const auto& p : pts) a.push(p, 0);
  return a.points();
}

/// Upper concave chain of a non-dominated 2-D point set; returns the
/// Pareto-extreme vertices in order of increasing first coordinate.
inline std::vector<RatePoint> upper_chain_2d(std::vector<RatePoint> nd) {
  std::sort(nd.begin(), nd.end(), [](const RatePoint& a, const RatePoint& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] > b[1];
  });
  std::vector<RatePoint> chain;
  for (const auto& p : nd) {
    while (chain.size() >= 2) {
      const RatePoint& a = chain[chain.size() - 2];
      const RatePoint& b = chain[chain.size() - 1];
      double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
      if (cross >= -1e-12)
        chain.pop_back(); // b is on or below segment a-p
      else
        break;
    }
    chain.push_back(p);
  }
  return chain;
}

inline void add_facets_from_cloud(RateRegion& reg) {
  const auto& pts = reg.corners;
  if (reg.dim == 2) {
    std::vector<RatePoint> chain = upper_chain_2d(pts);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      double nx = chain[i][1] - chain[i + 1][1];
      double ny = chain[i + 1][0] - chain[i][0];
      double nn = std::sqrt(nx * nx + ny * ny);
      if (nn < 1e-12 || nx < -1e-9 || ny < -1e-9) continue;
      reg.facets.push_back({{nx / nn, ny / nn, 0.0}, (nx * chain[i][0] + ny * chain[i][1]) / nn});
    }
  } else if (pts.size() <= 120) {
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        for (std::size_t c = b + 1; c < pts.size(); ++c) {
          double ux = pts[b][0] - pts[a][0], uy = pts[b][1] - pts[a][1], uz = pts[b][2] - pts[a][2];
          double vx = pts[c][0] - pts[a][0], vy = pts[c][1] - pts[a][1], vz = pts[c][2] - pts[a][2];
          std::array<double, 3> n{uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
          double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
          if (nn < 1e-10) continue;
          for (double sign : {1.0, -1.0}) {
            std::array<double, 3> m{sign * n[0] / nn, sign * n[1] / nn, sign * n[2] / nn};
            if (m[0] < -1e-9 || m[1] < -1e-9 || m[2] < -1e-9) continue;
            double v = m[0] * pts[a][0] + m[1] * pts[a][1] + m[2] * pts[a][2];
            bool upper = true;
            for (const auto& q : pts)
              if (dot3(m, q) > v + 1e-9) {
                upper = false;
                break;
              }
            if (!upper) continue;
            bool dup = false;
            for (const auto& f : reg.facets)
              if (std::abs(f.dir[0] - m[0]) < 1e-9 && std::abs(f.dir[1] - m[1]) < 1e-9 &&
                  std::abs(f.dir[2] - m[2]) < 1e-9 && std::abs(f.value - v) < 1e-9) {
                dup = true;
                break;
              }
            if (!dup) reg.facets.push_back({m, v});
          }
        }
  }
  // Axis bounds always apply.
  RatePoint mx = origin_point();
  for (const auto& p : pts)
    for (int i = 0; i < reg.dim; ++i) mx[i] = std::max(mx[i], p[i]);
  for (int i = 0; i < reg.dim; ++i) {
    std::array<double, 3> e{0, 0, 0};
    e[i] = 1.0;
    reg.facets.push_back({e, mx[i]});
  }
}

} // namespace detail

/// Convex hull region of a corner cloud: non-dominated corners (extreme
/// vertices in 2-D), fresh support samples, and bounding facets.
inline RateRegion hull_from_cloud(int dim, const std::vector<RatePoint>& cloud) {
  RateRegion reg;
  reg.dim = dim;
  std::vector<RatePoint> nd = detail::pareto_filter(cloud, dim);
  if (nd.empty()) nd = {origin_point()};
  reg.raw_cloud = nd;
  reg.corners = dim == 2 ? detail::upper_chain_2d(nd) : nd;
  for (const auto& d : support_directions(dim)) reg.support.push_back({d, support_of(reg, d)});
  detail::add_facets_from_cloud(reg);
  return reg;
}

/// Convex hull of a union of regions. Corner clouds are merged and reduced
/// to the non-dominated frontier; the reduced cloud is retained in raw_cloud.
inline RateRegion union_hull(const std::vector<RateRegion>& regions) {
  if (regions.empty()) throw std::invalid_argument("union_hull: empty input");
  int dim = regions.front().dim;
  std::vector<RatePoint> cloud;
  for (const auto& r : regions) {
    if (r.dim != dim) throw std::invalid_argument("union_hull: dimension mismatch");
    cloud.insert(cloud.end(), r.corners.begin(), r.corners.end());
  }
  return hull_from_cloud(dim, cloud);
}

// ---------------------------------------------------------------------------
// Membership and inclusion
// ---------------------------------------------------------------------------
inline bool contains(const RateRegion& reg, const RatePoint& p, double tol = 1e-9) {
  for (int i = 0; i < reg.dim; ++i)
    if (p[i] < -tol) return false;
  if (!reg.feasible || reg.corners.empty()) {
    for (int i = 0; i < reg.dim; ++i)
      if (p[i] > tol) return false;
    return true;
  }
  for (const auto& s : reg.support)
    if (dot3(s.dir, p) > s.value + tol) return false;
  for (const auto& f : reg.facets)
    if (dot3(f.dir, p) > f.value + tol) return false;
  return true;
}

/// Every corner of b inside a (within tol).
inline bool includes(const RateRegion& a, const RateRegion& b, double tol = 1e-9) {
  if (a.dim != b.dim) throw std::invalid_argument("includes: dimension mismatch");
  for (const auto& c : b.corners)
    if (!contains(a, c, tol)) return false;
  return true;
}

inline bool region_equal(const RateRegion& a, const RateRegion& b, double tol = 1e-9) {
  return includes(a, b, tol) && includes(b, a, tol);
}

// ---------------------------------------------------------------------------
// CSV export. 2-D regions put their (R1,R2) in the R1,R2 columns with R0 = 0.
// ---------------------------------------------------------------------------
inline void write_corners_csv(std::ostream& os, const RateRegion& reg, bool raw = false) {
  os << "R0,R1,R2\n";
  char buf[96];
  const auto& pts = raw && !reg.raw_cloud.empty() ? reg.raw_cloud : reg.corners;
  for (const auto& c : pts) {
    double r0 = reg.dim == 3 ? c[0] : 0.0;
    double r1 = reg.dim == 3 ? c[1] : c[0];
    double r2 = reg.dim == 3 ? c[2] : c[1];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", r0, r1, r2);
    os << buf;
  }
}

inline void write_support_csv(std::ostream& os, const RateRegion& reg) {
  os << "dx,dy,dz,value\n";
  char buf[128];
  for (const auto& s : reg.support) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", s.dir[0], s.dir[1], s.dir[2], s.value);
    os << buf;
  }
}

}  // namespace statecap
