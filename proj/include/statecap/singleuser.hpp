#pragma once
// Single-user capacities with non-causal transmitter CSI:
//   gp_capacity    max over P_{U,X|S} of I(U;Y) - I(U;S)
//   csirt_capacity max over P_{X|S}  of I(X;Y|S)   (CSI at both ends)
//   det_capacity   sum_s P(s) log2 |image f(.,s)|  (deterministic channels)
// The deterministic case ties the three together: csirt = det exactly, and
// the gp search reaches them because its seed family contains U = Y.

#include "statecap/channels.hpp"
#include "statecap/optimizer.hpp"

namespace statecap {

inline int default_card_u(const StateChannel& ch) { return ch.nx * ch.ns + 1; }

// ---------------------------------------------------------------------------
// Blahut-Arimoto for a fixed discrete channel W[x][y], capacity in bits.
// Iterates until the standard upper/lower capacity bounds pinch to tol.
// ---------------------------------------------------------------------------
struct BlahutArimotoResult {
  double capacity_bits = 0.0;
  std::vector<double> input; // capacity-achieving input distribution
  int iterations = 0;
};

inline BlahutArimotoResult blahut_arimoto(const std::vector<std::vector<double>>& W,
                                          double tol_bits = 1e-9, int max_iter = 50000) {
  const int nx = static_cast<int>(W.size());
  const int ny = static_cast<int>(W[0].size());
  std::vector<double> r(nx, 1.0 / nx), d(nx);
  BlahutArimotoResult res;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> p(ny, 0.0);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) p[y] += r[x] * W[x][y];
    double dmax = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (int y = 0; y < ny; ++y)
        if (W[x][y] > 0.0) acc += W[x][y] * std::log(W[x][y] / p[y]);
      d[x] = acc;
      dmax = std::max(dmax, acc);
    }
    double z = 0.0;
    for (int x = 0; x < nx; ++x) z += r[x] * std::exp(d[x] - dmax);
    double lower = dmax + std::log(z); // nats
    res.iterations = it + 1;
    if (dmax - lower <= tol_bits * std::log(2.0)) {
      res.capacity_bits = lower / std::log(2.0);
      res.input = r;
      return res;
    }
    double s = 0.0;
    for (int x = 0; x < nx; ++x) s += (r[x] *= std::exp(d[x] - dmax));
    for (int x = 0; x < nx; ++x) r[x] /= s;
  }
  // Converged as far as it will; report the lower bound.
  std::vector<double> p(ny, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) p[y] += r[x] * W[x][y];
  double acc = 0.0;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      if (W[x][y] > 0.0 && r[x] > 0.0) acc += r[x] * W[x][y] * std::log(W[x][y] / p[y]);
  res.capacity_bits = acc / std::log(2.0);
  res.input = r;
  return res;
}

// ---------------------------------------------------------------------------
// csirt_capacity: separable over states, one Blahut-Arimoto run per state.
// ---------------------------------------------------------------------------
struct CsirtResult {
  double bits = 0.0;
  CondPmf x_given_s; // argmax P_{X|S}, rows s
};

inline CsirtResult csirt_capacity(const StateChannel& ch, double tol_bits = 1e-9) {
  std::vector<double> table(static_cast<std::size_t>(ch.ns) * ch.nx, 1.0 / ch.nx);
  double bits = 0.0;
  for (int s = 0; s < ch.ns; ++s) {
    if (ch.state[s] == 0.0) continue;
    std::vector<std::vector<double>> W(ch.nx, std::vector<double>(ch.ny));
    for (int x = 0; x < ch.nx; ++x)
      for (int y = 0; y < ch.ny; ++y) W[x][y] = ch.p(y, x, s);
    BlahutArimotoResult ba = blahut_arimoto(W, tol_bits);
    bits += ch.state[s] * ba.capacity_bits;
    for (int x = 0; x < ch.nx; ++x) table[static_cast<std::size_t>(s) * ch.nx + x] = ba.input[x];
  }
  return {bits, CondPmf(ch.ns, ch.nx, std::move(table))};
}

// ---------------------------------------------------------------------------
// det_capacity: exact maximum of H(Y|S), uniformizing over each state image.
// ---------------------------------------------------------------------------
inline double det_capacity(const StateChannel& ch) {
  DeterministicMap f = is_deterministic(ch);
  if (!f.deterministic) throw std::invalid_argument("det_capacity: channel is not deterministic");
  double bits = 0.0;
  for (int s = 0; s < ch.ns; ++s) {
    if (ch.state[s] == 0.0) continue;
    std::vector<bool> hit(ch.ny, false);
    int img = 0;
    for (int x = 0; x < ch.nx; ++x) {
      int y = f.f[x * ch.ns + s];
      if (!hit[y]) {
        hit[y] = true;
        ++img;
      }
    }
    bits += ch.state[s] * std::log2(static_cast<double>(img));
  }
  return bits;
}

/// P_{X|S} that uniformizes Y over each state's image (the det_capacity
/// argmax); uniform rows when the channel is not deterministic.
inline CondPmf image_uniformizer(const StateChannel& ch) {
  DeterministicMap f = is_deterministic(ch);
  if (!f.deterministic) return CondPmf::uniform(ch.ns, ch.nx);
  std::vector<double> t(static_cast<std::size_t>(ch.ns) * ch.nx, 0.0);
  for (int s = 0; s < ch.ns; ++s) {
    std::vector<int> preimages(ch.ny, 0);
    int img = 0;
    for (int x = 0; x < ch.nx; ++x)
      if (preimages[f.f[x * ch.ns + s]]++ == 0) ++img;
    for (int x = 0; x < ch.nx; ++x)
      t[static_cast<std::size_t>(s) * ch.nx + x] = 1.0 / (static_cast<double>(img) * preimages[f.f[x * ch.ns + s]]);
  }
  return CondPmf(ch.ns, ch.nx, std::move(t));
}

// ---------------------------------------------------------------------------
// gp_capacity
// ---------------------------------------------------------------------------

/// Joint law (S,U,X,Y) of a Gel'fand-Pinsker candidate P_{U,X|S}
/// (block columns packed (u,x) with u slowest).
inline JointPmf gp_joint(const StateChannel& ch, const CandidatePdf& cand) {
  const int nu = cand.blocks[0].out[0];
  return JointPmf::from_pmf("S", ch.state)
      .extend({"S"}, {{"U", nu}, {"X", ch.nx}}, cand.blocks[0].table)
      .extend({"X", "S"}, {{"Y", ch.ny}}, ch.trans);
}

inline double gp_objective(const StateChannel& ch, const CandidatePdf& cand) {
  JointPmf j = gp_joint(ch, cand);
  return j.mutual({"U"}, {"Y"}) - j.mutual({"U"}, {"S"});
}

/// Handcrafted starting points: deterministic auxiliaries U = g(X,S) over a
/// few input laws. Always contains U = Y (deterministic channels), U = X and
/// the constant auxiliary, which pins the search's floor at 0.
inline std::vector<CandidatePdf> gp_seeds(const StateChannel& ch, int nu) {
  std::vector<CondPmf> bases{CondPmf::uniform(ch.ns, ch.nx), image_uniformizer(ch),
                             csirt_capacity(ch).x_given_s};
  const int cells = ch.nx * ch.ns;
  std::vector<std::vector<int>> maps;
  double total = std::pow(static_cast<double>(nu), cells);
  if (total <= 4096.0) {
    int count = static_cast<int>(total);
    for (int m = 0; m < count; ++m) {
      std::vector<int> g(cells);
      int v = m;
      for (int i = 0; i < cells; ++i) {
        g[i] = v % nu;
        v /= nu;
      }
      maps.push_back(std::move(g));
    }
  } else {
    std::vector<int> gx(cells), gxs(cells), gc(cells, 0);
    for (int x = 0; x < ch.nx; ++x)
      for (int s = 0; s < ch.ns; ++s) {
        gx[x * ch.ns + s] = x % nu;
        gxs[x * ch.ns + s] = (x + s) % nu;
      }
    maps = {gx, gxs, gc};
    DeterministicMap f = is_deterministic(ch);
    if (f.deterministic && ch.ny <= nu) maps.push_back(f.f); // U = Y
  }

  std::vector<CandidatePdf> seeds;
  for (const auto& base : bases)
    for (const auto& g : maps) {
      std::vector<double> t(static_cast<std::size_t>(ch.ns) * nu * ch.nx, 0.0);
      for (int s = 0; s < ch.ns; ++s)
        for (int x = 0; x < ch.nx; ++x)
          t[(static_cast<std::size_t>(s) * nu + g[x * ch.ns + s]) * ch.nx + x] = base.at(s, x);
      CandidatePdf c;
      c.blocks.push_back({{ch.ns}, {nu, ch.nx}, CondPmf(ch.ns, nu * ch.nx, std::move(t))});
      seeds.push_back(std::move(c));
    }
  return seeds;
}

struct GpResult {
  double bits = 0.0;
  CandidatePdf argmax;
  EvalCounters counters;
};

inline GpResult gp_capacity(const StateChannel& ch, const SearchBudget& budget, int card_u = 0) {
  const int nu = card_u > 0 ? card_u : default_card_u(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nu, ch.nx}}}};
  Objective f = [&](const CandidatePdf& c) { return gp_objective(ch, c); };
  MaximizeResult m = maximize(f, shape, budget, gp_seeds(ch, nu));
  GpResult r;
  r.bits = std::max(0.0, m.value);
  r.argmax = m.argmax;
  r.counters = m.counters;
  return r;
}

}  // namespace statecap
