#pragma once
// Shared channel constructions for the test suites.

#include "statecap/channels.hpp"

namespace statecap::testing {

/// Y = X xor S, S ~ Bern(0.5).
inline StateChannel xor_channel() {
  return StateChannel(2, 2, 2, Pmf::uniform(2), CondPmf(4, 2, {1, 0, 0, 1, 0, 1, 1, 0}));
}

/// Y = X xor S xor Z, Z ~ Bern(p).
inline StateChannel dirty_bsc(double p) {
  double q = 1 - p;
  return StateChannel(2, 2, 2, Pmf::uniform(2), CondPmf(4, 2, {q, p, p, q, p, q, q, p}));
}

/// Channel whose output ignores X entirely: Y = S through a BSC(p).
inline StateChannel ignore_input_channel(double p) {
  double q = 1 - p;
  return StateChannel(2, 2, 2, Pmf::uniform(2), CondPmf(4, 2, {q, p, p, q, q, p, p, q}));
}

/// Deterministic single-user channel from an explicit map f[(x,s)] -> y.
inline StateChannel det_channel(int nx, int ns, int ny, const std::vector<int>& f,
                                const Pmf& ps) {
  return StateChannel(nx, ns, ny, ps, CondPmf::from_map(nx * ns, ny, f));
}

/// BC from two deterministic output maps f1,f2 indexed (x,s) x-major.
inline BcStateChannel det_bc(int nx, int ns, int ny1, int ny2, const std::vector<int>& f1,
                             const std::vector<int>& f2, const Pmf& ps) {
  std::vector<double> t(static_cast<std::size_t>(nx) * ns * ny1 * ny2, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int s = 0; s < ns; ++s)
      t[(static_cast<std::size_t>(x) * ns + s) * ny1 * ny2 + f1[x * ns + s] * ny2 + f2[x * ns + s]] = 1.0;
  return BcStateChannel(nx, ns, ny1, ny2, ps, CondPmf(nx * ns, ny1 * ny2, std::move(t)));
}

/// Blackwell channel: x=0 -> (0,0), x=1 -> (0,1), x=2 -> (1,1); no state.
inline BcStateChannel blackwell() {
  return det_bc(3, 1, 2, 2, {0, 0, 1}, {0, 1, 1}, Pmf::uniform(1));
}

/// Y1 = X, Y2 = erasure(Y1) with probability e (Y2 alphabet {0,1,erased}).
inline BcStateChannel erasure_bc(double e, int ns = 1) {
  int nx = 2;
  std::vector<double> t(static_cast<std::size_t>(nx) * ns * 2 * 3, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int s = 0; s < ns; ++s) {
      double* row = t.data() + (static_cast<std::size_t>(x) * ns + s) * 6;
      row[x * 3 + x] = 1 - e;
      row[x * 3 + 2] = e;
    }
  return BcStateChannel(nx, ns, 2, 3, ns == 1 ? Pmf::uniform(1) : Pmf::uniform(ns),
                        CondPmf(nx * ns, 6, std::move(t)));
}

/// Random joint-state MAC with the given alphabet sizes.
inline MacStateChannel random_mac(int nx1, int nx2, int ns1, int ns2, int ny, Rng& rng) {
  JointPmf st = JointPmf::random({{"S1", ns1}, {"S2", ns2}}, rng);
  int rows = nx1 * nx2 * ns1 * ns2;
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(rows) * ny);
  for (int r = 0; r < rows; ++r) {
    Pmf row = Pmf::dirichlet(ny, rng);
    t.insert(t.end(), row.probs().begin(), row.probs().end());
  }
  return MacStateChannel(nx1, nx2, ns1, ns2, ny, std::move(st), CondPmf(rows, ny, std::move(t)));
}

/// Random BC with the given alphabet sizes.
inline BcStateChannel random_bc(int nx, int ns, int ny1, int ny2, Rng& rng) {
  Pmf ps = Pmf::dirichlet(ns, rng);
  int rows = nx * ns;
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(rows) * ny1 * ny2);
  for (int r = 0; r < rows; ++r) {
    Pmf row = Pmf::dirichlet(ny1 * ny2, rng);
    t.insert(t.end(), row.probs().begin(), row.probs().end());
  }
  return BcStateChannel(nx, ns, ny1, ny2, std::move(ps), CondPmf(rows, ny1 * ny2, std::move(t)));
}

/// Random single-user channel.
inline StateChannel random_single(int nx, int ns, int ny, Rng& rng) {
  Pmf ps = Pmf::dirichlet(ns, rng);
  int rows = nx * ns;
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(rows) * ny);
  for (int r = 0; r < rows; ++r) {
    Pmf row = Pmf::dirichlet(ny, rng);
    t.insert(t.end(), row.probs().begin(), row.probs().end());
  }
  return StateChannel(nx, ns, ny, std::move(ps), CondPmf(rows, ny, std::move(t)));
}

/// Random deterministic single-user channel.
inline StateChannel random_det_single(int nx, int ns, int ny, Rng& rng) {
  std::vector<int> f(static_cast<std::size_t>(nx) * ns);
  for (auto& v : f) v = rng.uniform_int(ny);
  return det_channel(nx, ns, ny, f, Pmf::dirichlet(ns, rng));
}

/// Orthogonal MAC assembled from two single-user factors and a joint state law.
inline MacStateChannel orth_mac(const StateChannel& l1, const StateChannel& l2,
                                const JointPmf& state) {
  int rows = l1.nx * l2.nx * l1.ns * l2.ns;
  int ny = l1.ny * l2.ny;
  std::vector<double> t(static_cast<std::size_t>(rows) * ny, 0.0);
  for (int x1 = 0; x1 < l1.nx; ++x1)
    for (int x2 = 0; x2 < l2.nx; ++x2)
      for (int s1 = 0; s1 < l1.ns; ++s1)
        for (int s2 = 0; s2 < l2.ns; ++s2) {
          int row = ((x1 * l2.nx + x2) * l1.ns + s1) * l2.ns + s2;
          for (int y1 = 0; y1 < l1.ny; ++y1)
            for (int y2 = 0; y2 < l2.ny; ++y2)
              t[static_cast<std::size_t>(row) * ny + y1 * l2.ny + y2] = l1.p(y1, x1, s1) * l2.p(y2, x2, s2);
        }
  return MacStateChannel(l1.nx, l2.nx, l1.ns, l2.ns, ny, state, CondPmf(rows, ny, std::move(t)),
                         l1.ny, l2.ny);
}

/// Correlated pair state for two binary state coordinates.
inline JointPmf correlated_states(double p_same) {
  double a = p_same / 2, b = (1 - p_same) / 2;
  return JointPmf({{"S1", 2}, {"S2", 2}}, {a, b, b, a});
}

}  // namespace statecap::testing
