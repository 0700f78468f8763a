#pragma once
// Search over products of conditional-probability simplices: the machinery
// behind every union and supremum in the displayed rate expressions.
//
// Candidates are lists of conditional blocks. Each block carries its own
// coordinate sizes, so handcrafted seeds with different auxiliary
// cardinalities can join a sweep alongside the default-shaped randoms.
//
// Everything is deterministic given the budget seed: restarts draw from
// per-restart derived streams, reductions run in enumeration order, and
// ties keep the first candidate found.

#include <functional>
#include <limits>

#include "statecap/prob.hpp"
#include "statecap/regions.hpp"

namespace statecap {

struct SearchBudget {
  int grid_k = 4;           // simplex grid resolution for full enumeration
  int restarts = 64;        // random restarts when the grid is too large
  int refine_passes = 8;    // coordinate-refinement passes per start
  std::uint64_t seed = 1;
  unsigned long long grid_cap = 20000; // max candidates for full-grid mode
};

struct BlockSpec {
  std::vector<int> given; // conditioning coordinate sizes (row-major order)
  std::vector<int> out;   // produced coordinate sizes (row-major order)
  int rows() const {
    int r = 1;
    for (int g : given) r *= g;
    return r;
  }
  int cols() const {
    int c = 1;
    for (int o : out) c *= o;
    return c;
  }
};

struct CandidateShape {
  std::vector<BlockSpec> blocks;
};

struct CandBlock {
  std::vector<int> given;
  std::vector<int> out;
  CondPmf table; // rows() x cols()
};

struct CandidatePdf {
  std::vector<CandBlock> blocks;
};

inline CandidatePdf uniform_candidate(const CandidateShape& shape) {
  CandidatePdf c;
  for (const auto& b : shape.blocks)
    c.blocks.push_back({b.given, b.out, CondPmf::uniform(b.rows(), b.cols())});
  return c;
}

inline CandidatePdf random_candidate(const CandidateShape& shape, Rng& rng) {
  CandidatePdf c;
  for (const auto& b : shape.blocks) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(b.rows()) * b.cols());
    for (int r = 0; r < b.rows(); ++r) {
      Pmf row = Pmf::dirichlet(b.cols(), rng);
      t.insert(t.end(), row.probs().begin(), row.probs().end());
    }
    c.blocks.push_back({b.given, b.out, CondPmf(b.rows(), b.cols(), std::move(t))});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Simplex grid: all compositions of k into dim parts, scaled by 1/k.
// ---------------------------------------------------------------------------
template <typename Fn>
void simplex_grid(int dim, int k, Fn&& fn) {
  if (dim < 1 || k < 1) throw std::invalid_argument("simplex_grid: dim and k must be >= 1");
  for_each_composition(k, dim, [&](const std::vector<int>& comp) {
    std::vector<double> p(dim);
    for (int i = 0; i < dim; ++i) p[i] = static_cast<double>(comp[i]) / k;
    fn(Pmf(std::move(p)));
  });
}

inline unsigned long long simplex_grid_count(int dim, int k) { return composition_count(k, dim); }

/// Number of full-grid candidates for a shape (saturating).
inline unsigned long long grid_size(const CandidateShape& shape, int k) {
  unsigned long long total = 1;
  for (const auto& b : shape.blocks) {
    unsigned long long per_row = simplex_grid_count(b.cols(), k);
    for (int r = 0; r < b.rows(); ++r) {
      if (per_row != 0 && total > (1ULL << 62) / per_row) return 1ULL << 62;
      total *= per_row;
    }
  }
  return total;
}

template <typename Fn>
void for_each_grid_candidate(const CandidateShape& shape, int k, Fn&& fn) {
  // Distinct row dimensions share one materialized point list.
  std::vector<int> dims;
  for (const auto& b : shape.blocks)
    if (std::find(dims.begin(), dims.end(), b.cols()) == dims.end()) dims.push_back(b.cols());
  std::vector<std::vector<std::vector<double>>> pts(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i)
    simplex_grid(dims[i], k, [&](const Pmf& p) { pts[i].push_back(p.probs()); });

  struct RowRef {
    int block, row, dim_idx;
  };
  std::vector<RowRef> rows;
  for (std::size_t bi = 0; bi < shape.blocks.size(); ++bi) {
    int di = static_cast<int>(std::find(dims.begin(), dims.end(), shape.blocks[bi].cols()) - dims.begin());
    for (int r = 0; r < shape.blocks[bi].rows(); ++r) rows.push_back({static_cast<int>(bi), r, di});
  }
  std::vector<std::size_t> pick(rows.size(), 0);
  while (true) {
    CandidatePdf c;
    std::size_t ri = 0;
    for (const auto& b : shape.blocks) {
      std::vector<double> t;
      t.reserve(static_cast<std::size_t>(b.rows()) * b.cols());
      for (int r = 0; r < b.rows(); ++r, ++ri) {
        const auto& row = pts[rows[ri].dim_idx][pick[ri]];
        t.insert(t.end(), row.begin(), row.end());
      }
      c.blocks.push_back({b.given, b.out, CondPmf(b.rows(), b.cols(), std::move(t))});
    }
    fn(c);
    int i = static_cast<int>(rows.size()) - 1;
    while (i >= 0 && ++pick[i] == pts[rows[i].dim_idx].size()) pick[i--] = 0;
    if (i < 0) break;
  }
}

// ---------------------------------------------------------------------------
// Coordinate refinement: re-optimize one conditional row at a time over a
// local move set, repeating until a pass improves by < 1e-7.
// ---------------------------------------------------------------------------
using Objective = std::function<double(const CandidatePdf&)>;

namespace detail {

inline std::vector<std::vector<double>> row_moves(const std::vector<double>& row) {
  const int m = static_cast<int>(row.size());
  std::vector<std::vector<double>> mv;
  for (int j = 0; j < m; ++j) {
    std::vector<double> v(m, 0.0);
    v[j] = 1.0;
    mv.push_back(std::move(v));
  }
  for (double t : {0.5, 0.25, 0.1, 0.03, 0.01})
    for (int j = 0; j < m; ++j) {
      std::vector<double> v(m);
      for (int i = 0; i < m; ++i) v[i] = (1.0 - t) * row[i] + (i == j ? t : 0.0);
      mv.push_back(std::move(v));
    }
  if (m <= 12) {
    for (double d : {0.1, 0.02})
      for (int i = 0; i < m; ++i) {
        if (row[i] < 1e-15) continue;
        double step = std::min(d, row[i]);
        for (int j = 0; j < m; ++j) {
          if (j == i) continue;
          std::vector<double> v = row;
          v[i] -= step;
          v[j] += step;
          mv.push_back(std::move(v));
        }
      }
  }
  return mv;
}

} // namespace detail

struct EvalCounters {
  long evaluated = 0;
  long skipped = 0; // non-finite objective values
};

inline double eval_objective(const Objective& f, const CandidatePdf& c, EvalCounters& n) {
  double v = f(c);
  ++n.evaluated;
  if (!std::isfinite(v)) {
    ++n.skipped;
    return -std::numeric_limits<double>::infinity();
  }
  return v;
}

inline void refine_candidate(CandidatePdf& c, double& val, const Objective& f, int passes,
                             EvalCounters& n) {
  for (int pass = 0; pass < passes; ++pass) {
    double pass_start = val;
    for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
      const int rows = c.blocks[bi].table.n_in();
      for (int r = 0; r < rows; ++r) {
        std::vector<double> cur(c.blocks[bi].table.table().begin() + static_cast<std::ptrdiff_t>(r) * c.blocks[bi].table.n_out(),
                                c.blocks[bi].table.table().begin() + static_cast<std::ptrdiff_t>(r + 1) * c.blocks[bi].table.n_out());
        double best_v = val;
        std::vector<double> best_row;
        for (const auto& mvrow : detail::row_moves(cur)) {
          CandidatePdf trial = c;
          trial.blocks[bi].table = trial.blocks[bi].table.with_row(r, mvrow);
          double v = eval_objective(f, trial, n);
          if (v > best_v) {
            best_v = v;
            best_row = mvrow;
          }
        }
        if (!best_row.empty()) {
          c.blocks[bi].table = c.blocks[bi].table.with_row(r, best_row);
          val = best_v;
        }
      }
    }
    if (val - pass_start < 1e-7) break;
  }
}

// ---------------------------------------------------------------------------
// maximize
// ---------------------------------------------------------------------------
struct MaximizeResult {
  double value = -std::numeric_limits<double>::infinity();
  CandidatePdf argmax;
  EvalCounters counters;
  bool found = false;
  bool used_grid = false;
};

inline MaximizeResult maximize(const Objective& f, const CandidateShape& shape,
                               const SearchBudget& budget,
                               const std::vector<CandidatePdf>& seeds = {}) {
  MaximizeResult res;
  auto consider = [&](const CandidatePdf& c, double v) {
    if (v > res.value || !res.found) {
      if (std::isfinite(v) || !res.found) {
        res.value = v;
        res.argmax = c;
        res.found = std::isfinite(v) ? true : res.found;
      }
    }
  };

  // Seeds first: evaluate all, refine the best one.
  {
    double best_seed_v = -std::numeric_limits<double>::infinity();
    int best_seed = -1;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      double v = eval_objective(f, seeds[i], res.counters);
      if (v > best_seed_v) {
        best_seed_v = v;
        best_seed = static_cast<int>(i);
      }
      consider(seeds[i], v);
    }
    if (best_seed >= 0 && std::isfinite(best_seed_v)) {
      CandidatePdf c = seeds[best_seed];
      double v = best_seed_v;
      refine_candidate(c, v, f, budget.refine_passes, res.counters);
      consider(c, v);
    }
  }

  if (grid_size(shape, budget.grid_k) <= budget.grid_cap) {
    res.used_grid = true;
    CandidatePdf best_grid;
    double best_grid_v = -std::numeric_limits<double>::infinity();
    for_each_grid_candidate(shape, budget.grid_k, [&](const CandidatePdf& c) {
      double v = eval_objective(f, c, res.counters);
      if (v > best_grid_v) {
        best_grid_v = v;
        best_grid = c;
      }
      consider(c, v);
    });
    if (std::isfinite(best_grid_v)) {
      refine_candidate(best_grid, best_grid_v, f, budget.refine_passes, res.counters);
      consider(best_grid, best_grid_v);
    }
  } else {
    for (int r = 0; r < budget.restarts; ++r) {
      Rng rng(Rng::mix(budget.seed, static_cast<std::uint64_t>(r) + 1));
      CandidatePdf c = random_candidate(shape, rng);
      double v = eval_objective(f, c, res.counters);
      if (std::isfinite(v)) refine_candidate(c, v, f, budget.refine_passes, res.counters);
      consider(c, v);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// region_sweep
// ---------------------------------------------------------------------------
using ConstraintBuilder = std::function<std::vector<LinearRateConstraint>(const CandidatePdf&)>;

struct SweepResult {
  RateRegion region;                     // convex hull (raw cloud inside)
  std::vector<CandidatePdf> corner_args; // candidate achieving each hull corner
  EvalCounters counters;
  bool used_grid = false;
};

namespace detail {

inline const std::vector<std::array<double, 3>>& sweep_refine_directions(int dim) {
  static const std::vector<std::array<double, 3>> d2 = [] {
    const double s2 = 1.0 / std::sqrt(2.0), s5 = 1.0 / std::sqrt(5.0);
    return std::vector<std::array<double, 3>>{
        {1, 0, 0}, {0, 1, 0}, {s2, s2, 0}, {2 * s5, s5, 0}, {s5, 2 * s5, 0}};
  }();
  static const std::vector<std::array<double, 3>> d3 = [] {
    const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0), s6 = 1.0 / std::sqrt(6.0);
    return std::vector<std::array<double, 3>>{
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {s2, s2, 0}, {s2, 0, s2}, {0, s2, s2},
        {s3, s3, s3}, {2 * s6, s6, s6}};
  }();
  return dim == 2 ? d2 : d3;
}

} // namespace detail

inline SweepResult region_sweep(const ConstraintBuilder& builder, int dim,
                                const CandidateShape& shape, const SearchBudget& budget,
                                const std::vector<CandidatePdf>& seeds = {}) {
  SweepResult res;
  ParetoArchive<CandidatePdf> archive(dim);
  const auto& refine_dirs = detail::sweep_refine_directions(dim);
  std::vector<double> dir_best(refine_dirs.size(), -std::numeric_limits<double>::infinity());
  std::vector<CandidatePdf> dir_arg(refine_dirs.size());

  auto visit = [&](const CandidatePdf& c) -> bool {
    std::vector<LinearRateConstraint> cons;
    try {
      cons = builder(c);
    } catch (const std::exception&) {
      ++res.counters.evaluated;
      ++res.counters.skipped;
      return false;
    }
    ++res.counters.evaluated;
    for (const auto& con : cons)
      if (!std::isfinite(con.rhs)) {
        ++res.counters.skipped;
        return false;
      }
    RateRegion poly = polytope_from_constraints(cons, dim);
    for (const auto& corner : poly.corners) archive.push(corner, c);
    for (std::size_t di = 0; di < refine_dirs.size(); ++di) {
      double s = 0.0;
      for (const auto& corner : poly.corners) s = std::max(s, dot3(refine_dirs[di], corner));
      if (s > dir_best[di]) {
        dir_best[di] = s;
        dir_arg[di] = c;
      }
    }
    return true;
  };

  for (const auto& s : seeds) visit(s);
  if (grid_size(shape, budget.grid_k) <= budget.grid_cap) {
    res.used_grid = true;
    for_each_grid_candidate(shape, budget.grid_k, [&](const CandidatePdf& c) { visit(c); });
  } else {
    for (int r = 0; r < budget.restarts; ++r) {
      Rng rng(Rng::mix(budget.seed, static_cast<std::uint64_t>(r) + 1));
      visit(random_candidate(shape, rng));
    }
  }

  // Push the frontier outward along a fixed direction fan; every candidate
  // evaluated during refinement contributes its polytope to the union.
  for (std::size_t di = 0; di < refine_dirs.size(); ++di) {
    if (!std::isfinite(dir_best[di])) continue;
    Objective supp = [&](const CandidatePdf& c) -> double {
      std::vector<LinearRateConstraint> cons;
      try {
        cons = builder(c);
      } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
      for (const auto& con : cons)
        if (!std::isfinite(con.rhs)) return std::numeric_limits<double>::quiet_NaN();
      RateRegion poly = polytope_from_constraints(cons, dim);
      for (const auto& corner : poly.corners) archive.push(corner, c);
      double s = 0.0;
      for (const auto& corner : poly.corners) s = std::max(s, dot3(refine_dirs[di], corner));
      return s;
    };
    CandidatePdf c = dir_arg[di];
    double v = dir_best[di];
    refine_candidate(c, v, supp, budget.refine_passes, res.counters);
  }

  res.region = hull_from_cloud(dim, archive.points());
  for (const auto& corner : res.region.corners) {
    for (const auto& e : archive.entries())
      if (e.p == corner) {
        res.corner_args.push_back(e.tag);
        break;
      }
  }
  return res;
}

}  // namespace statecap
