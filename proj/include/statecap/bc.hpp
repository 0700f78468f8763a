#pragma once
// Broadcast-channel regions and capacities with non-causal transmitter CSI:
// the binning inner bound over P_{W,V,U,X|S}, the outer bound over
// P_{V,U,X|S}, four capacity specializations (deterministic with and without
// common message, semi-deterministic, more-capable, degraded with a
// deterministic strong receiver), and the common-rate comparison suite
// against the earlier superposition and compound-channel bounds.
//
// The no-state reductions (Marton and Nair-El Gamal shapes) are exposed as
// standalone formula paths so reductions can be checked term by term.

#include "statecap/channels.hpp"
#include "statecap/optimizer.hpp"
#include "statecap/singleuser.hpp"

namespace statecap {

struct BcCards {
  int w = 0, v = 0, u = 0; // 0 = default |.| = |X||S| + 2
};

inline int bc_default_card(const BcStateChannel& ch) { return ch.nx * ch.ns + 2; }

// ---------------------------------------------------------------------------
// Joint laws. Block columns pack the out coordinates with the first listed
// varying slowest, matching JointPmf::extend.
// ---------------------------------------------------------------------------

inline JointPmf bc_joint_wvux(const BcStateChannel& ch, const CandidatePdf& cand) {
  const auto& out = cand.blocks[0].out; // {W,V,U,X}
  return JointPmf::from_pmf("S", ch.state)
      .extend({"S"}, {{"W", out[0]}, {"V", out[1]}, {"U", out[2]}, {"X", ch.nx}}, cand.blocks[0].table)
      .extend({"X", "S"}, {{"Y1", ch.ny1}, {"Y2", ch.ny2}}, ch.trans);
}

inline JointPmf bc_joint_vux(const BcStateChannel& ch, const CandidatePdf& cand) {
  const auto& out = cand.blocks[0].out; // {V,U,X}
  return JointPmf::from_pmf("S", ch.state)
      .extend({"S"}, {{"V", out[0]}, {"U", out[1]}, {"X", ch.nx}}, cand.blocks[0].table)
      .extend({"X", "S"}, {{"Y1", ch.ny1}, {"Y2", ch.ny2}}, ch.trans);
}

inline JointPmf bc_joint_ux(const BcStateChannel& ch, const CandidatePdf& cand) {
  const auto& out = cand.blocks[0].out; // {U,X}
  return JointPmf::from_pmf("S", ch.state)
      .extend({"S"}, {{"U", out[0]}, {"X", ch.nx}}, cand.blocks[0].table)
      .extend({"X", "S"}, {{"Y1", ch.ny1}, {"Y2", ch.ny2}}, ch.trans);
}

inline JointPmf bc_joint_x(const BcStateChannel& ch, const CandidatePdf& cand) {
  return JointPmf::from_pmf("S", ch.state)
      .extend({"S"}, {{"X", ch.nx}}, cand.blocks[0].table)
      .extend({"X", "S"}, {{"Y1", ch.ny1}, {"Y2", ch.ny2}}, ch.trans);
}

// ---------------------------------------------------------------------------
// Constraint families
// ---------------------------------------------------------------------------

/// Inner bound over P_{W,V,U,X|S}: five constraints, rhs order
/// (R0+R1, R0+R2, sum, sum, 2R0+R1+R2).
inline std::array<double, 5> bc_inner_rhs(const JointPmf& j) {
  const double b1 = j.mutual({"W", "V"}, {"Y1"}) - j.mutual({"W", "V"}, {"S"});
  const double b2 = j.mutual({"W", "U"}, {"Y2"}) - j.mutual({"W", "U"}, {"S"});
  const double glue = j.mutual({"V"}, {"U"}, {"W"}) + j.mutual({"V", "U", "W"}, {"S"});
  const double s1 = j.mutual({"W", "V"}, {"Y1"}) + j.mutual({"U"}, {"Y2"}, {"W"}) - glue;
  const double s2 = j.mutual({"V"}, {"Y1"}, {"W"}) + j.mutual({"W", "U"}, {"Y2"}) - glue;
  const double s3 = j.mutual({"W", "V"}, {"Y1"}) + j.mutual({"W", "U"}, {"Y2"}) - glue - j.mutual({"W"}, {"S"});
  return {b1, b2, s1, s2, s3};
}

inline std::vector<LinearRateConstraint> bc_inner_constraints(const JointPmf& j) {
  auto r = bc_inner_rhs(j);
  return {{{1, 1, 0}, r[0]}, {{1, 0, 1}, r[1]}, {{1, 1, 1}, r[2]}, {{1, 1, 1}, r[3]}, {{2, 1, 1}, r[4]}};
}

/// Outer bound over P_{V,U,X|S}: rhs order (R0+R1, R0+R2, sum, sum).
inline std::array<double, 4> bc_outer_rhs(const JointPmf& j) {
  const double b1 = j.mutual({"V"}, {"Y1"}, {"S"});
  const double b2 = j.mutual({"U"}, {"Y2"}, {"S"});
  return {b1, b2, j.mutual({"X"}, {"Y1"}, {"U", "S"}) + b2, j.mutual({"X"}, {"Y2"}, {"V", "S"}) + b1};
}

inline std::vector<LinearRateConstraint> bc_outer_constraints(const JointPmf& j) {
  auto r = bc_outer_rhs(j);
  return {{{1, 1, 0}, r[0]}, {{1, 0, 1}, r[1]}, {{1, 1, 1}, r[2]}, {{1, 1, 1}, r[3]}};
}

/// Marton region rhs for a no-state joint over (W,V,U,X,Y1,Y2); the inner
/// bound must reduce to these term by term when |S| = 1.
inline std::array<double, 5> marton_rhs(const JointPmf& j) {
  const double glue = j.mutual({"V"}, {"U"}, {"W"});
  return {j.mutual({"W", "V"}, {"Y1"}),
          j.mutual({"W", "U"}, {"Y2"}),
          j.mutual({"W", "V"}, {"Y1"}) + j.mutual({"U"}, {"Y2"}, {"W"}) - glue,
          j.mutual({"V"}, {"Y1"}, {"W"}) + j.mutual({"W", "U"}, {"Y2"}) - glue,
          j.mutual({"W", "V"}, {"Y1"}) + j.mutual({"W", "U"}, {"Y2"}) - glue};
}

/// Nair-El Gamal outer-bound rhs for a no-state joint over (V,U,X,Y1,Y2).
inline std::array<double, 4> nair_el_gamal_rhs(const JointPmf& j) {
  const double b1 = j.mutual({"V"}, {"Y1"});
  const double b2 = j.mutual({"U"}, {"Y2"});
  return {b1, b2, j.mutual({"X"}, {"Y1"}, {"U"}) + b2, j.mutual({"X"}, {"Y2"}, {"V"}) + b1};
}

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

namespace detail {

/// Canonical deterministic auxiliary maps g : X x S -> {0..n-1}.
inline std::vector<std::vector<int>> bc_aux_maps(const BcStateChannel& ch, int n) {
  const int cells = ch.nx * ch.ns;
  std::vector<std::vector<int>> maps;
  auto push_unique = [&](std::vector<int> g) {
    for (const auto& m : maps)
      if (m == g) return;
    maps.push_back(std::move(g));
  };
  push_unique(std::vector<int>(cells, 0));
  std::vector<int> gx(cells), gxs(cells);
  for (int x = 0; x < ch.nx; ++x)
    for (int s = 0; s < ch.ns; ++s) {
      gx[x * ch.ns + s] = x % n;
      gxs[x * ch.ns + s] = (x + s) % n;
    }
  push_unique(gx);
  push_unique(gxs);
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  if (f1.deterministic && ch.ny1 <= n) push_unique(f1.f);
  if (f2.deterministic && ch.ny2 <= n) push_unique(f2.f);
  return maps;
}

inline std::vector<CondPmf> bc_input_bases(const BcStateChannel& ch) {
  std::vector<CondPmf> bases{CondPmf::uniform(ch.ns, ch.nx)};
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  if (f1.deterministic && f2.deterministic) {
    // Uniformize over distinct output pairs per state.
    std::vector<double> t(static_cast<std::size_t>(ch.ns) * ch.nx, 0.0);
    for (int s = 0; s < ch.ns; ++s) {
      std::vector<int> pre(ch.ny1 * ch.ny2, 0);
      int img = 0;
      for (int x = 0; x < ch.nx; ++x) {
        int pair = f1.f[x * ch.ns + s] * ch.ny2 + f2.f[x * ch.ns + s];
        if (pre[pair]++ == 0) ++img;
      }
      for (int x = 0; x < ch.nx; ++x) {
        int pair = f1.f[x * ch.ns + s] * ch.ny2 + f2.f[x * ch.ns + s];
        t[static_cast<std::size_t>(s) * ch.nx + x] = 1.0 / (static_cast<double>(img) * pre[pair]);
      }
    }
    bases.emplace_back(ch.ns, ch.nx, std::move(t));
  }
  return bases;
}

/// Seeds with each auxiliary a deterministic function of (X,S); aux_sizes
/// lists the block's auxiliary coordinate sizes (X is appended last).
inline std::vector<CandidatePdf> bc_aux_seeds(const BcStateChannel& ch,
                                              const std::vector<int>& aux_sizes) {
  std::vector<std::vector<std::vector<int>>> per_aux;
  for (int n : aux_sizes) per_aux.push_back(bc_aux_maps(ch, n));
  std::vector<CandidatePdf> seeds;
  std::vector<std::size_t> pick(per_aux.size(), 0);
  const std::vector<CondPmf> bases = bc_input_bases(ch);
  while (true) {
    for (const auto& base : bases) {
      int cols = ch.nx;
      for (int n : aux_sizes) cols *= n;
      std::vector<double> t(static_cast<std::size_t>(ch.ns) * cols, 0.0);
      for (int s = 0; s < ch.ns; ++s)
        for (int x = 0; x < ch.nx; ++x) {
          int col = 0;
          for (std::size_t a = 0; a < per_aux.size(); ++a)
            col = col * aux_sizes[a] + per_aux[a][pick[a]][x * ch.ns + s];
          col = col * ch.nx + x;
          t[static_cast<std::size_t>(s) * cols + col] = base.at(s, x);
        }
      CandidatePdf c;
      std::vector<int> out = aux_sizes;
      out.push_back(ch.nx);
      c.blocks.push_back({{ch.ns}, out, CondPmf(ch.ns, cols, std::move(t))});
      seeds.push_back(std::move(c));
    }
    int i = static_cast<int>(per_aux.size()) - 1;
    while (i >= 0 && ++pick[i] == per_aux[i].size()) pick[i--] = 0;
    if (i < 0) break;
  }
  return seeds;
}

} // namespace detail

/// Embed an inner candidate P_{W,V,U,X|S} into the outer family with
/// V' = (W,V) and U' = (W,U); the per-candidate inner polytope is contained
/// in the embedded outer polytope.
inline CandidatePdf bc_embed_outer(const BcStateChannel& ch, const CandidatePdf& inner) {
  const auto& out = inner.blocks[0].out; // {W,V,U,X}
  const int nw = out[0], nv = out[1], nu = out[2];
  const int nvp = nw * nv, nup = nw * nu;
  const int cols = nvp * nup * ch.nx;
  std::vector<double> t(static_cast<std::size_t>(ch.ns) * cols, 0.0);
  for (int s = 0; s < ch.ns; ++s)
    for (int w = 0; w < nw; ++w)
      for (int v = 0; v < nv; ++v)
        for (int u = 0; u < nu; ++u)
          for (int x = 0; x < ch.nx; ++x) {
            int icol = (((w * nv + v) * nu + u) * ch.nx) + x;
            int ocol = (((w * nv + v) * nup + (w * nu + u)) * ch.nx) + x;
            t[static_cast<std::size_t>(s) * cols + ocol] += inner.blocks[0].table.at(s, icol);
          }
  CandidatePdf c;
  c.blocks.push_back({{ch.ns}, {nvp, nup, ch.nx}, CondPmf(ch.ns, cols, std::move(t))});
  return c;
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

inline SweepResult det_bc_capacity(const BcStateChannel& ch, const SearchBudget& budget);

namespace detail {

/// Lift a P_{X|S} candidate to the (W,V,U,X) family with constant W,
/// V = f1(X,S), U = f2(X,S) (Theorem 3's substitution); with_w = false
/// drops the W coordinate for the outer family.
inline CandidatePdf bc_lift_det(const BcStateChannel& ch, const CandidatePdf& px, bool with_w) {
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  const int nv = ch.ny1, nu = ch.ny2;
  const int cols = nv * nu * ch.nx; // a size-1 W coordinate adds no columns
  std::vector<double> t(static_cast<std::size_t>(ch.ns) * cols, 0.0);
  for (int s = 0; s < ch.ns; ++s)
    for (int x = 0; x < ch.nx; ++x) {
      int v = f1.f[x * ch.ns + s], u = f2.f[x * ch.ns + s];
      t[static_cast<std::size_t>(s) * cols + (v * nu + u) * ch.nx + x] = px.blocks[0].table.at(s, x);
    }
  CandidatePdf c;
  std::vector<int> out = with_w ? std::vector<int>{1, nv, nu, ch.nx} : std::vector<int>{nv, nu, ch.nx};
  c.blocks.push_back({{ch.ns}, out, CondPmf(ch.ns, cols, std::move(t))});
  return c;
}

/// Corner candidates of the deterministic 2-D capacity sweep, lifted into a
/// 3-D family; empty when an output is not deterministic.
inline std::vector<CandidatePdf> bc_det_harvest(const BcStateChannel& ch, const SearchBudget& budget,
                                                bool with_w) {
  std::vector<CandidatePdf> out;
  if (!bc_output_map(ch, 1).deterministic || !bc_output_map(ch, 2).deterministic) return out;
  SweepResult det = det_bc_capacity(ch, budget);
  for (const auto& arg : det.corner_args) out.push_back(bc_lift_det(ch, arg, with_w));
  return out;
}

} // namespace detail

inline SweepResult bc_inner_region(const BcStateChannel& ch, const SearchBudget& budget,
                                   BcCards cards = {}) {
  const int nw = cards.w > 0 ? cards.w : bc_default_card(ch);
  const int nv = cards.v > 0 ? cards.v : bc_default_card(ch);
  const int nu = cards.u > 0 ? cards.u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nw, nv, nu, ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) { return bc_inner_constraints(bc_joint_wvux(ch, c)); };
  std::vector<CandidatePdf> seeds = detail::bc_aux_seeds(ch, {nw, nv, nu});
  for (auto& c : detail::bc_det_harvest(ch, budget, true)) seeds.push_back(std::move(c));
  return region_sweep(b, 3, shape, budget, seeds);
}

inline SweepResult bc_outer_region(const BcStateChannel& ch, const SearchBudget& budget,
                                   BcCards cards = {}) {
  const int nv = cards.v > 0 ? cards.v : bc_default_card(ch);
  const int nu = cards.u > 0 ? cards.u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nv, nu, ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) { return bc_outer_constraints(bc_joint_vux(ch, c)); };
  // Aux-map seeds for (V,U), plus the inner sweep's corner candidates
  // embedded as (W,V),(W,U).
  std::vector<CandidatePdf> seeds = detail::bc_aux_seeds(ch, {nv, nu});
  SweepResult inner = bc_inner_region(ch, budget, BcCards{cards.w, cards.v, cards.u});
  for (const auto& arg : inner.corner_args) seeds.push_back(bc_embed_outer(ch, arg));
  for (auto& c : detail::bc_det_harvest(ch, budget, false)) seeds.push_back(std::move(c));
  return region_sweep(b, 3, shape, budget, seeds);
}

/// Deterministic BC without common message (2-D).
inline SweepResult det_bc_capacity(const BcStateChannel& ch, const SearchBudget& budget) {
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  if (!f1.deterministic || !f2.deterministic)
    throw std::invalid_argument("det_bc_capacity: both outputs must be deterministic");
  CandidateShape shape{{BlockSpec{{ch.ns}, {ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_x(ch, c);
    return std::vector<LinearRateConstraint>{
        {{1, 0, 0}, j.conditional_entropy({"Y1"}, {"S"})},
        {{0, 1, 0}, j.conditional_entropy({"Y2"}, {"S"})},
        {{1, 1, 0}, j.conditional_entropy({"Y1", "Y2"}, {"S"})}};
  };
  return region_sweep(b, 2, shape, budget);
}

/// Deterministic BC with common message under the zero cross-output
/// information condition (3-D).
inline SweepResult det_bc_common_capacity(const BcStateChannel& ch, const SearchBudget& budget) {
  DeterministicMap f1 = bc_output_map(ch, 1), f2 = bc_output_map(ch, 2);
  if (!f1.deterministic || !f2.deterministic)
    throw std::invalid_argument("det_bc_common_capacity: both outputs must be deterministic");
  if (check_condition_12(ch).verdict != TriVerdict::Holds)
    throw std::invalid_argument("det_bc_common_capacity: I(Y1;Y2|S) = 0 condition fails");
  CandidateShape shape{{BlockSpec{{ch.ns}, {ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_x(ch, c);
    return std::vector<LinearRateConstraint>{
        {{1, 1, 0}, j.conditional_entropy({"Y1"}, {"S"})},
        {{1, 0, 1}, j.conditional_entropy({"Y2"}, {"S"})}};
  };
  return region_sweep(b, 3, shape, budget);
}

/// Semi-deterministic BC (Y1 deterministic, CSI also at receiver 2), 2-D.
inline SweepResult semidet_bc_capacity(const BcStateChannel& ch, const SearchBudget& budget,
                                       int card_u = 0) {
  if (!bc_output_map(ch, 1).deterministic)
    throw std::invalid_argument("semidet_bc_capacity: Y1 must be deterministic");
  const int nu = card_u > 0 ? card_u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nu, ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_ux(ch, c);
    const double r2 = j.mutual({"U"}, {"Y2"}, {"S"});
    return std::vector<LinearRateConstraint>{
        {{1, 0, 0}, j.conditional_entropy({"Y1"}, {"S"})},
        {{0, 1, 0}, r2},
        {{1, 1, 0}, j.conditional_entropy({"Y1"}, {"U", "S"}) + r2}};
  };
  return region_sweep(b, 2, shape, budget, detail::bc_aux_seeds(ch, {nu}));
}

/// More-capable BC with common message, CSI at both receivers (3-D).
inline SweepResult more_capable_capacity(const BcStateChannel& ch, const SearchBudget& budget,
                                         int card_u = 0) {
  if (is_more_capable(ch).verdict == TriVerdict::CertifiedFalse)
    throw std::invalid_argument("more_capable_capacity: channel is certified not more-capable");
  const int nu = card_u > 0 ? card_u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nu, ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_ux(ch, c);
    const double r2 = j.mutual({"U"}, {"Y2"}, {"S"});
    return std::vector<LinearRateConstraint>{
        {{1, 0, 1}, r2},
        {{1, 1, 1}, j.mutual({"X"}, {"Y1"}, {"U", "S"}) + r2},
        {{1, 1, 1}, j.mutual({"X"}, {"Y1"}, {"S"})}};
  };
  return region_sweep(b, 3, shape, budget, detail::bc_aux_seeds(ch, {nu}));
}

/// Degraded BC with deterministic Y1 and common message (3-D). The second
/// rhs is truncated at zero (constant-U fallback keeps the region in R_+^3).
inline SweepResult degraded_det_capacity(const BcStateChannel& ch, const SearchBudget& budget,
                                         int card_u = 0) {
  if (!is_degraded(ch).degraded)
    throw std::invalid_argument("degraded_det_capacity: channel is not degraded");
  if (!bc_output_map(ch, 1).deterministic)
    throw std::invalid_argument("degraded_det_capacity: Y1 must be deterministic");
  const int nu = card_u > 0 ? card_u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nu, ch.nx}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_ux(ch, c);
    return std::vector<LinearRateConstraint>{
        {{0, 1, 0}, j.conditional_entropy({"Y1"}, {"U", "S"})},
        {{1, 0, 1}, std::max(0.0, j.mutual({"U"}, {"Y2"}) - j.mutual({"U"}, {"S"}))}};
  };
  return region_sweep(b, 3, shape, budget, detail::bc_aux_seeds(ch, {nu}));
}

// ---------------------------------------------------------------------------
// Appendix comparison suite: the superposition-coding region and the maximum
// common rates of the three schemes, plus the deterministic closed form.
// ---------------------------------------------------------------------------

inline double positive_part(double a) { return a > 0.0 ? a : 0.0; }

/// Rhs values of the superposition-coding region for one PDF, order
/// (R0 ; R0+R1 ; R0+R2 ; R0+R1+R2).
inline std::array<double, 4> ss_rhs(const JointPmf& j) {
  const double iw1 = j.mutual({"W"}, {"Y1"});
  const double iw2 = j.mutual({"W"}, {"Y2"});
  const double iws = j.mutual({"W"}, {"S"});
  const double b = j.mutual({"W", "V"}, {"Y1"}) - j.mutual({"W", "V"}, {"S"});
  const double c = j.mutual({"W", "U"}, {"Y2"}) - j.mutual({"W", "U"}, {"S"});
  const double d = -positive_part(std::max(iw1, iw2) - iws) + b + c - j.mutual({"U"}, {"V"}, {"W", "S"});
  return {positive_part(std::min(iw1, iw2) - iws), b, c, d};
}

inline std::vector<LinearRateConstraint> ss_constraints(const JointPmf& j) {
  auto r = ss_rhs(j);
  return {{{1, 0, 0}, r[0]}, {{1, 1, 0}, r[1]}, {{1, 0, 1}, r[2]}, {{1, 1, 1}, r[3]}};
}

/// Per-PDF polytope of the superposition-coding region.
inline RateRegion ss_region(const BcStateChannel& ch, const CandidatePdf& cand) {
  return polytope_from_constraints(ss_constraints(bc_joint_wvux(ch, cand)), 3);
}

/// Maximum common rate of the inner bound (R1 = R2 = 0) for one PDF.
inline double common_rate_ours_objective(const JointPmf& j) {
  auto r = bc_inner_rhs(j);
  return std::min({r[0], r[1], r[2], r[3], r[4] / 2.0});
}

/// Common-rate objective of the compound-channel scheme for one PDF.
inline double common_rate_negc_objective(const JointPmf& j) {
  const double b = j.mutual({"W", "V"}, {"Y1"}) - j.mutual({"W", "V"}, {"S"});
  const double c = j.mutual({"W", "U"}, {"Y2"}) - j.mutual({"W", "U"}, {"S"});
  return std::min({b, c, 0.5 * (b + c - j.mutual({"U"}, {"V"}, {"W", "S"}))});
}

/// Superposition common-rate objective for one PDF; `clamped` keeps the
/// displayed outer positive part.
inline double common_rate_ss_objective(const JointPmf& j, bool clamped = true) {
  const double raw = std::min(j.mutual({"W"}, {"Y1"}), j.mutual({"W"}, {"Y2"})) - j.mutual({"W"}, {"S"});
  return clamped ? positive_part(raw) : raw;
}

struct CommonRateResult {
  double bits = 0.0;
  CandidatePdf argmax;
};

inline CommonRateResult common_rate_ss(const BcStateChannel& ch, const SearchBudget& budget,
                                       int card_w = 0) {
  const int nw = card_w > 0 ? card_w : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nw, ch.nx}}}};
  Objective f = [&](const CandidatePdf& c) { return common_rate_ss_objective(bc_joint_ux(ch, c).renamed("U", "W")); };
  MaximizeResult m = maximize(f, shape, budget, detail::bc_aux_seeds(ch, {nw}));
  return {m.value, m.argmax};
}

/// Lift a (W,X|S) candidate to (W,V,U,X|S) with constant V and U.
inline CandidatePdf bc_lift_wx(const CandidatePdf& wx, int nv, int nu, int nx) {
  const int nw = wx.blocks[0].out[0];
  const int ns = wx.blocks[0].given[0];
  const int cols = nw * nv * nu * nx;
  std::vector<double> t(static_cast<std::size_t>(ns) * cols, 0.0);
  for (int s = 0; s < ns; ++s)
    for (int w = 0; w < nw; ++w)
      for (int x = 0; x < nx; ++x)
        t[static_cast<std::size_t>(s) * cols + ((w * nv + 0) * nu + 0) * nx + x] =
            wx.blocks[0].table.at(s, w * nx + x);
  CandidatePdf c;
  c.blocks.push_back({{ns}, {nw, nv, nu, nx}, CondPmf(ns, cols, std::move(t))});
  return c;
}

inline CommonRateResult common_rate_ours(const BcStateChannel& ch, const SearchBudget& budget,
                                         BcCards cards = {}) {
  const int nw = cards.w > 0 ? cards.w : bc_default_card(ch);
  const int nv = cards.v > 0 ? cards.v : bc_default_card(ch);
  const int nu = cards.u > 0 ? cards.u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nw, nv, nu, ch.nx}}}};
  std::vector<CandidatePdf> seeds = detail::bc_aux_seeds(ch, {nw, nv, nu});
  seeds.push_back(bc_lift_wx(common_rate_ss(ch, budget, nw).argmax, nv, nu, ch.nx));
  Objective f = [&](const CandidatePdf& c) { return common_rate_ours_objective(bc_joint_wvux(ch, c)); };
  MaximizeResult m = maximize(f, shape, budget, seeds);
  return {m.value, m.argmax};
}

inline CommonRateResult common_rate_negc(const BcStateChannel& ch, const SearchBudget& budget,
                                         BcCards cards = {}) {
  const int nw = cards.w > 0 ? cards.w : bc_default_card(ch);
  const int nv = cards.v > 0 ? cards.v : bc_default_card(ch);
  const int nu = cards.u > 0 ? cards.u : bc_default_card(ch);
  CandidateShape shape{{BlockSpec{{ch.ns}, {nw, nv, nu, ch.nx}}}};
  std::vector<CandidatePdf> seeds = detail::bc_aux_seeds(ch, {nw, nv, nu});
  seeds.push_back(common_rate_ours(ch, budget, cards).argmax);
  Objective f = [&](const CandidatePdf& c) { return common_rate_negc_objective(bc_joint_wvux(ch, c)); };
  MaximizeResult m = maximize(f, shape, budget, seeds);
  return {m.value, m.argmax};
}

/// Closed-form deterministic common rate:
/// max over P_{X|S} of min{H(Y1|S), H(Y2|S), H(Y1,Y2|S)/2}.
inline CommonRateResult common_rate_det(const BcStateChannel& ch, const SearchBudget& budget) {
  CandidateShape shape{{BlockSpec{{ch.ns}, {ch.nx}}}};
  Objective f = [&](const CandidatePdf& c) {
    JointPmf j = bc_joint_x(ch, c);
    return std::min({j.conditional_entropy({"Y1"}, {"S"}), j.conditional_entropy({"Y2"}, {"S"}),
                     0.5 * j.conditional_entropy({"Y1", "Y2"}, {"S"})});
  };
  MaximizeResult m = maximize(f, shape, budget);
  return {m.value, m.argmax};
}

}  // namespace statecap
