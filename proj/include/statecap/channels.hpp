#pragma once
// Channel-with-state models for the four scenarios (single-user, MAC, BC,
// relay) plus the structural classifiers the capacity theorems key on:
// deterministic, orthogonal, degraded, more-capable, and the zero
// cross-output-information condition for deterministic BCs.
//
// Transition tensors are dense CondPmf tables. Row-major input order is
// fixed per type and documented next to each field; the innermost (column)
// index is always the output, with output pairs packed first-output-major.

#include <optional>
#include <utility>

#include "statecap/prob.hpp"

namespace statecap {

// ---------------------------------------------------------------------------
// Channel types
// ---------------------------------------------------------------------------

struct StateChannel {
  int nx = 0, ns = 0, ny = 0;
  Pmf state;     // P_S
  CondPmf trans; // rows (x,s) with x slowest; cols y

  StateChannel(int nx_, int ns_, int ny_, Pmf st, CondPmf tr)
      : nx(nx_), ns(ns_), ny(ny_), state(std::move(st)), trans(std::move(tr)) {
    if (state.size() != ns || trans.n_in() != nx * ns || trans.n_out() != ny)
      throw std::invalid_argument("StateChannel: inconsistent sizes");
  }

  double p(int y, int x, int s) const { return trans.at(x * ns + s, y); }
};

struct MacStateChannel {
  int nx1 = 0, nx2 = 0, ns1 = 0, ns2 = 0, ny = 0;
  // When the receiver alphabet is declared as a product Y1 x Y2, ny1,ny2 > 0
  // and ny == ny1*ny2 with y = y1*ny2 + y2. Zero means scalar output.
  int ny1 = 0, ny2 = 0;
  JointPmf state; // coords {S1,S2}
  CondPmf trans;  // rows (x1,x2,s1,s2) with x1 slowest; cols y

  MacStateChannel(int nx1_, int nx2_, int ns1_, int ns2_, int ny_, JointPmf st, CondPmf tr,
                  int ny1_ = 0, int ny2_ = 0)
      : nx1(nx1_), nx2(nx2_), ns1(ns1_), ns2(ns2_), ny(ny_), ny1(ny1_), ny2(ny2_),
        state(std::move(st)), trans(std::move(tr)) {
    if (trans.n_in() != nx1 * nx2 * ns1 * ns2 || trans.n_out() != ny)
      throw std::invalid_argument("MacStateChannel: inconsistent sizes");
    if (state.coords().size() != 2 || state.coord_size("S1") != ns1 || state.coord_size("S2") != ns2)
      throw std::invalid_argument("MacStateChannel: state pmf must have coords S1,S2");
    if ((ny1 > 0) != (ny2 > 0) || (ny1 > 0 && ny1 * ny2 != ny))
      throw std::invalid_argument("MacStateChannel: bad product-output declaration");
  }

  bool product_output() const { return ny1 > 0; }
  int row(int x1, int x2, int s1, int s2) const { return ((x1 * nx2 + x2) * ns1 + s1) * ns2 + s2; }
  double p(int y, int x1, int x2, int s1, int s2) const { return trans.at(row(x1, x2, s1, s2), y); }
};

struct BcStateChannel {
  int nx = 0, ns = 0, ny1 = 0, ny2 = 0;
  Pmf state;     // P_S
  CondPmf trans; // rows (x,s) with x slowest; cols (y1,y2) with y1 slowest

  BcStateChannel(int nx_, int ns_, int ny1_, int ny2_, Pmf st, CondPmf tr)
      : nx(nx_), ns(ns_), ny1(ny1_), ny2(ny2_), state(std::move(st)), trans(std::move(tr)) {
    if (state.size() != ns || trans.n_in() != nx * ns || trans.n_out() != ny1 * ny2)
      throw std::invalid_argument("BcStateChannel: inconsistent sizes");
  }

  double p(int y1, int y2, int x, int s) const { return trans.at(x * ns + s, y1 * ny2 + y2); }
};

struct RelayStateChannel {
  // State is the pair (S1,S2); single-state channels use ns2 == 1.
  int nx = 0, nxr = 0, ns1 = 0, ns2 = 1, nyr = 0, ny = 0;
  JointPmf state; // coords {S1,S2}
  CondPmf trans;  // rows (x,xr,s1,s2) with x slowest; cols (y,yr) with y slowest

  RelayStateChannel(int nx_, int nxr_, int ns1_, int ns2_, int nyr_, int ny_, JointPmf st, CondPmf tr)
      : nx(nx_), nxr(nxr_), ns1(ns1_), ns2(ns2_), nyr(nyr_), ny(ny_),
        state(std::move(st)), trans(std::move(tr)) {
    if (trans.n_in() != nx * nxr * ns1 * ns2 || trans.n_out() != ny * nyr)
      throw std::invalid_argument("RelayStateChannel: inconsistent sizes");
    if (state.coords().size() != 2 || state.coord_size("S1") != ns1 || state.coord_size("S2") != ns2)
      throw std::invalid_argument("RelayStateChannel: state pmf must have coords S1,S2");
  }

  bool single_state() const { return ns2 == 1; }
};

// ---------------------------------------------------------------------------
// Classifiers
// ---------------------------------------------------------------------------

struct DeterministicMap {
  bool deterministic = false;
  std::vector<int> f; // f[row] = output symbol, valid when deterministic
};

/// Every row a {0,1} point mass (within tol)?
inline DeterministicMap deterministic_map(const CondPmf& t, double tol = 1e-12) {
  DeterministicMap r;
  r.f.assign(t.n_in(), -1);
  for (int row = 0; row < t.n_in(); ++row) {
    for (int c = 0; c < t.n_out(); ++c) {
      double v = t.at(row, c);
      if (v > 1.0 - tol)
        r.f[row] = c;
      else if (v > tol)
        return {};
    }
    if (r.f[row] < 0) return {};
  }
  r.deterministic = true;
  return r;
}

inline DeterministicMap is_deterministic(const StateChannel& ch, double tol = 1e-12) {
  return deterministic_map(ch.trans, tol);
}

/// Per-output maps of a BC; `which` is 1 or 2. Marginalizes the other output
/// first, so "Y1 deterministic" is tested on its own.
inline DeterministicMap bc_output_map(const BcStateChannel& ch, int which, double tol = 1e-12) {
  const int rows = ch.nx * ch.ns;
  const int nout = which == 1 ? ch.ny1 : ch.ny2;
  std::vector<double> t(static_cast<std::size_t>(rows) * nout, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int y1 = 0; y1 < ch.ny1; ++y1)
      for (int y2 = 0; y2 < ch.ny2; ++y2)
        t[static_cast<std::size_t>(r) * nout + (which == 1 ? y1 : y2)] += ch.trans.at(r, y1 * ch.ny2 + y2);
  return deterministic_map(CondPmf(rows, nout, std::move(t)), tol);
}

struct OrthogonalFactors {
  bool orthogonal = false;
  std::optional<CondPmf> f1; // P(y1|x1,s1), rows (x1,s1) x1 slowest
  std::optional<CondPmf> f2; // P(y2|x2,s2)
};

/// Does P(y1,y2|x1,x2,s1,s2) factor as P(y1|x1,s1) P(y2|x2,s2)?
/// Requires a declared product output alphabet.
inline OrthogonalFactors orthogonal_factors(const MacStateChannel& ch, double tol = 1e-9) {
  if (!ch.product_output())
    throw std::invalid_argument("orthogonal_factors: receiver alphabet is not declared as a product");
  // Candidate factors from averaged marginals; exact when the channel factors.
  std::vector<double> t1(static_cast<std::size_t>(ch.nx1 * ch.ns1) * ch.ny1, 0.0);
  std::vector<double> t2(static_cast<std::size_t>(ch.nx2 * ch.ns2) * ch.ny2, 0.0);
  for (int x1 = 0; x1 < ch.nx1; ++x1)
    for (int x2 = 0; x2 < ch.nx2; ++x2)
      for (int s1 = 0; s1 < ch.ns1; ++s1)
        for (int s2 = 0; s2 < ch.ns2; ++s2)
          for (int y1 = 0; y1 < ch.ny1; ++y1)
            for (int y2 = 0; y2 < ch.ny2; ++y2) {
              double v = ch.p(y1 * ch.ny2 + y2, x1, x2, s1, s2);
              t1[static_cast<std::size_t>(x1 * ch.ns1 + s1) * ch.ny1 + y1] += v / (ch.nx2 * ch.ns2);
              t2[static_cast<std::size_t>(x2 * ch.ns2 + s2) * ch.ny2 + y2] += v / (ch.nx1 * ch.ns1);
            }
  CondPmf f1(ch.nx1 * ch.ns1, ch.ny1, std::move(t1));
  CondPmf f2(ch.nx2 * ch.ns2, ch.ny2, std::move(t2));
  for (int x1 = 0; x1 < ch.nx1; ++x1)
    for (int x2 = 0; x2 < ch.nx2; ++x2)
      for (int s1 = 0; s1 < ch.ns1; ++s1)
        for (int s2 = 0; s2 < ch.ns2; ++s2)
          for (int y1 = 0; y1 < ch.ny1; ++y1)
            for (int y2 = 0; y2 < ch.ny2; ++y2) {
              double lhs = ch.p(y1 * ch.ny2 + y2, x1, x2, s1, s2);
              double rhs = f1.at(x1 * ch.ns1 + s1, y1) * f2.at(x2 * ch.ns2 + s2, y2);
              if (std::abs(lhs - rhs) > tol) return {};
            }
  OrthogonalFactors r;
  r.orthogonal = true;
  r.f1 = std::move(f1);
  r.f2 = std::move(f2);
  return r;
}

/// Factor channels of an orthogonal MAC as two single-user StateChannels
/// (each with the marginal state law).
inline std::pair<StateChannel, StateChannel> orthogonal_links(const MacStateChannel& ch,
                                                              const OrthogonalFactors& f) {
  if (!f.orthogonal) throw std::invalid_argument("orthogonal_links: channel is not orthogonal");
  Pmf ps1{ch.state.marginal_table({"S1"})};
  Pmf ps2{ch.state.marginal_table({"S2"})};
  return {StateChannel(ch.nx1, ch.ns1, ch.ny1, ps1, *f.f1),
          StateChannel(ch.nx2, ch.ns2, ch.ny2, ps2, *f.f2)};
}

struct DegradedResult {
  bool degraded = false;
  std::optional<CondPmf> q; // P(y2|y1) when degraded
};

/// Linear-feasibility test of P(y1,y2|x,s) = P(y1|x,s) Q(y2|y1): the ratio
/// rows P(y1,.|x,s)/P(y1|x,s) must agree across all (x,s) where y1 has mass.
inline DegradedResult is_degraded(const BcStateChannel& ch, double tol = 1e-7) {
  std::vector<double> q(static_cast<std::size_t>(ch.ny1) * ch.ny2, 0.0);
  std::vector<bool> pinned(ch.ny1, false);
  for (int y1 = 0; y1 < ch.ny1; ++y1) {
    for (int x = 0; x < ch.nx; ++x)
      for (int s = 0; s < ch.ns; ++s) {
        double m = 0.0;
        for (int y2 = 0; y2 < ch.ny2; ++y2) m += ch.p(y1, y2, x, s);
        if (m <= tol) continue;
        if (!pinned[y1]) {
          for (int y2 = 0; y2 < ch.ny2; ++y2) q[static_cast<std::size_t>(y1) * ch.ny2 + y2] = ch.p(y1, y2, x, s) / m;
          pinned[y1] = true;
        } else {
          for (int y2 = 0; y2 < ch.ny2; ++y2)
            if (std::abs(ch.p(y1, y2, x, s) / m - q[static_cast<std::size_t>(y1) * ch.ny2 + y2]) > tol) return {};
        }
      }
    if (!pinned[y1]) q[static_cast<std::size_t>(y1) * ch.ny2 + y1 % ch.ny2] = 1.0; // unreached y1: any row
  }
  DegradedResult r;
  r.degraded = true;
  r.q = CondPmf(ch.ny1, ch.ny2, std::move(q));
  return r;
}

/// I(X;Y_k|S) for a given P_{X|S} (rows s), computed per state.
inline double bc_input_output_mi(const BcStateChannel& ch, const CondPmf& x_given_s, int which) {
  if (x_given_s.n_in() != ch.ns || x_given_s.n_out() != ch.nx)
    throw std::invalid_argument("bc_input_output_mi: P(x|s) dimensions mismatch");
  const int nyk = which == 1 ? ch.ny1 : ch.ny2;
  double mi = 0.0;
  for (int s = 0; s < ch.ns; ++s) {
    if (ch.state[s] == 0.0) continue;
    std::vector<double> py(nyk, 0.0);
    double h_y_given_x = 0.0;
    for (int x = 0; x < ch.nx; ++x) {
      double px = x_given_s.at(s, x);
      if (px == 0.0) continue;
      std::vector<double> row(nyk, 0.0);
      for (int y1 = 0; y1 < ch.ny1; ++y1)
        for (int y2 = 0; y2 < ch.ny2; ++y2) row[which == 1 ? y1 : y2] += ch.p(y1, y2, x, s);
      for (int y = 0; y < nyk; ++y) {
        py[y] += px * row[y];
        if (row[y] > 0.0) h_y_given_x -= px * row[y] * std::log2(row[y]);
      }
    }
    mi += ch.state[s] * (entropy_of_table(py) - h_y_given_x);
  }
  return mi;
}

enum class TriVerdict { CertifiedFalse, ProbablyTrue, Holds, Fails, SampledOnly };

struct MoreCapableResult {
  TriVerdict verdict = TriVerdict::ProbablyTrue;
  std::optional<CondPmf> witness; // P(x|s) violating the inequality
  double gap = 0.0;               // I(X;Y2|S) - I(X;Y1|S) at the witness
};

namespace detail {
/// Enumerate P(x|s) over a per-row simplex grid plus Dirichlet samples.
template <typename Fn>
void for_each_input_pdf(int ns, int nx, int grid_k, int n_random, std::uint64_t seed, Fn&& fn) {
  std::vector<std::vector<double>> pts;
  for_each_composition(grid_k, nx, [&](const std::vector<int>& comp) {
    std::vector<double> p(nx);
    for (int i = 0; i < nx; ++i) p[i] = static_cast<double>(comp[i]) / grid_k;
    pts.push_back(std::move(p));
  });
  std::vector<std::size_t> pick(ns, 0);
  while (true) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(ns) * nx);
    for (int s = 0; s < ns; ++s) t.insert(t.end(), pts[pick[s]].begin(), pts[pick[s]].end());
    fn(CondPmf(ns, nx, std::move(t)));
    int s = ns - 1;
    while (s >= 0 && ++pick[s] == pts.size()) pick[s--] = 0;
    if (s < 0) break;
  }
  Rng rng(seed);
  for (int i = 0; i < n_random; ++i) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(ns) * nx);
    for (int s = 0; s < ns; ++s) {
      Pmf row = Pmf::dirichlet(nx, rng);
      t.insert(t.end(), row.probs().begin(), row.probs().end());
    }
    fn(CondPmf(ns, nx, std::move(t)));
  }
}
} // namespace detail

/// Grid-plus-sampling refutation of I(X;Y2|S) <= I(X;Y1|S) for all P_{X|S}.
inline MoreCapableResult is_more_capable(const BcStateChannel& ch, int grid_k = 16,
                                         int n_random = 200, std::uint64_t seed = 1) {
  MoreCapableResult res;
  res.verdict = TriVerdict::ProbablyTrue;
  detail::for_each_input_pdf(ch.ns, ch.nx, grid_k, n_random, seed, [&](const CondPmf& pxs) {
    if (res.verdict == TriVerdict::CertifiedFalse) return;
    double gap = bc_input_output_mi(ch, pxs, 2) - bc_input_output_mi(ch, pxs, 1);
    if (gap > 1e-9) {
      res.verdict = TriVerdict::CertifiedFalse;
      res.witness = pxs;
      res.gap = gap;
    }
  });
  return res;
}

struct Condition12Result {
  TriVerdict verdict = TriVerdict::SampledOnly;
  // Witness for Fails: state s and inputs x,x' with f1 and f2 both differing
  // (deterministic case), or a violating P(x|s) (stochastic case).
  int s = -1, x = -1, x_alt = -1;
  std::optional<CondPmf> witness;
};

/// I(Y1;Y2|S) for a fixed P_{X|S}.
inline double bc_cross_output_mi(const BcStateChannel& ch, const CondPmf& pxs) {
  double mi = 0.0;
  for (int s = 0; s < ch.ns; ++s) {
    if (ch.state[s] == 0.0) continue;
    std::vector<double> joint(static_cast<std::size_t>(ch.ny1) * ch.ny2, 0.0);
    for (int x = 0; x < ch.nx; ++x) {
      double px = pxs.at(s, x);
      if (px == 0.0) continue;
      for (int y1 = 0; y1 < ch.ny1; ++y1)
        for (int y2 = 0; y2 < ch.ny2; ++y2) joint[static_cast<std::size_t>(y1) * ch.ny2 + y2] += px * ch.p(y1, y2, x, s);
    }
    std::vector<double> p1(ch.ny1, 0.0), p2(ch.ny2, 0.0);
    for (int y1 = 0; y1 < ch.ny1; ++y1)
      for (int y2 = 0; y2 < ch.ny2; ++y2) {
        p1[y1] += joint[static_cast<std::size_t>(y1) * ch.ny2 + y2];
        p2[y2] += joint[static_cast<std::size_t>(y1) * ch.ny2 + y2];
      }
    mi += ch.state[s] * (entropy_of_table(p1) + entropy_of_table(p2) - entropy_of_table(joint));
  }
  return mi;
}

/// Does I(Y1;Y2|S) = 0 hold for every P_{X|S}? Exact two-point-mass
/// combinatorics when both outputs are deterministic, sampled refutation
/// otherwise.
inline Condition12Result check_condition_12(const BcStateChannel& ch, int grid_k = 8,
                                            int n_random = 100, std::uint64_t seed = 1) {
  Condition12Result res;
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  if (f1.deterministic && f2.deterministic) {
    // Condition fails iff some state has inputs x,x' with f1(x,s) != f1(x',s)
    // and f2(x,s) != f2(x',s): put half mass on each and both outputs move.
    for (int s = 0; s < ch.ns; ++s) {
      if (ch.state[s] == 0.0) continue;
      for (int x = 0; x < ch.nx; ++x)
        for (int x2 = x + 1; x2 < ch.nx; ++x2)
          if (f1.f[x * ch.ns + s] != f1.f[x2 * ch.ns + s] && f2.f[x * ch.ns + s] != f2.f[x2 * ch.ns + s]) {
            res.verdict = TriVerdict::Fails;
            res.s = s;
            res.x = x;
            res.x_alt = x2;
            return res;
          }
    }
    res.verdict = TriVerdict::Holds;
    return res;
  }
  res.verdict = TriVerdict::SampledOnly;
  detail::for_each_input_pdf(ch.ns, ch.nx, grid_k, n_random, seed, [&](const CondPmf& pxs) {
    if (res.verdict == TriVerdict::Fails) return;
    if (bc_cross_output_mi(ch, pxs) > 1e-9) {
      res.verdict = TriVerdict::Fails;
      res.witness = pxs;
    }
  });
  return res;
}

}  // namespace statecap
