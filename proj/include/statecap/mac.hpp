#pragma once
// MAC-with-states rate regions: the achievable region (independent encoder
// blocks), the orthogonal and deterministic-orthogonal capacity rectangles,
// and the outer bounds swept over one joint auxiliary block. The outer
// sweeps re-evaluate the inner sweep's corner candidates embedded into the
// joint family, so the inner/outer sandwich holds at matched budgets.

#include "statecap/channels.hpp"
#include "statecap/optimizer.hpp"
#include "statecap/singleuser.hpp"

namespace statecap {

struct MacCards {
  int v1 = 0, v2 = 0; // 0 = default |Vi| = |Xi||Si| + 1
};

inline int mac_default_card(int nx, int ns) { return nx * ns + 1; }

// ---------------------------------------------------------------------------
// Joint laws
// ---------------------------------------------------------------------------

/// Inner family: independent blocks P_{X1,V1|S1} and P_{X2,V2|S2}
/// (block columns (x_i, v_i) with x_i slowest).
inline JointPmf mac_joint_inner(const MacStateChannel& ch, const CandidatePdf& cand) {
  const int nv1 = cand.blocks[0].out[1], nv2 = cand.blocks[1].out[1];
  return ch.state
      .extend({"S1"}, {{"X1", ch.nx1}, {"V1", nv1}}, cand.blocks[0].table)
      .extend({"S2"}, {{"X2", ch.nx2}, {"V2", nv2}}, cand.blocks[1].table)
      .extend({"X1", "X2", "S1", "S2"}, {{"Y", ch.ny}}, ch.trans);
}

/// Outer family: one joint block P_{X1,X2,V1,V2|S1,S2}
/// (columns (x1,x2,v1,v2) with x1 slowest).
inline JointPmf mac_joint_outer(const MacStateChannel& ch, const CandidatePdf& cand) {
  const int nv1 = cand.blocks[0].out[2], nv2 = cand.blocks[0].out[3];
  return ch.state
      .extend({"S1", "S2"}, {{"X1", ch.nx1}, {"X2", ch.nx2}, {"V1", nv1}, {"V2", nv2}},
              cand.blocks[0].table)
      .extend({"X1", "X2", "S1", "S2"}, {{"Y", ch.ny}}, ch.trans);
}

/// The three rhs values of the achievable region (same shapes reused by the
/// weak outer bound, which quantifies them over the joint family).
inline std::array<double, 3> mac_rhs_achievable(const JointPmf& j) {
  return {j.mutual({"V1"}, {"Y"}, {"V2"}) - j.mutual({"V1"}, {"S1"}, {"V2"}),
          j.mutual({"V2"}, {"Y"}, {"V1"}) - j.mutual({"V2"}, {"S2"}, {"V1"}),
          j.mutual({"V1", "V2"}, {"Y"}) - j.mutual({"V1", "V2"}, {"S1", "S2"})};
}

/// The three rhs values of the outer bound.
inline std::array<double, 3> mac_rhs_outer(const JointPmf& j) {
  const double joint_state = j.mutual({"V1", "V2"}, {"S1", "S2"});
  return {j.mutual({"V1"}, {"Y"}, {"V2"}) + j.mutual({"V2"}, {"S2"}) - joint_state,
          j.mutual({"V2"}, {"Y"}, {"V1"}) + j.mutual({"V1"}, {"S1"}) - joint_state,
          j.mutual({"V1", "V2"}, {"Y"}) - joint_state};
}

inline std::vector<LinearRateConstraint> mac_constraints(const std::array<double, 3>& rhs) {
  return {{{1, 0, 0}, rhs[0]}, {{0, 1, 0}, rhs[1]}, {{1, 1, 0}, rhs[2]}};
}

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

/// Independent-block seeds; for deterministic orthogonal factors this
/// includes V_i = Y_i over uniform and image-uniformizing inputs, otherwise
/// V_i = X_i.
inline std::vector<CandidatePdf> mac_inner_seeds(const MacStateChannel& ch, int nv1, int nv2) {
  struct Side {
    int nx, ns, nv;
    std::vector<std::vector<int>> maps; // v = g(x,s)
    std::vector<CondPmf> bases;
  };
  auto make_side = [&](int nx, int ns, int nv, const StateChannel* link) {
    Side side{nx, ns, nv, {}, {}};
    std::vector<int> ident(static_cast<std::size_t>(nx) * ns);
    for (int x = 0; x < nx; ++x)
      for (int s = 0; s < ns; ++s) ident[x * ns + s] = x % nv;
    side.maps.push_back(ident);
    side.maps.push_back(std::vector<int>(static_cast<std::size_t>(nx) * ns, 0));
    side.bases.push_back(CondPmf::uniform(ns, nx));
    if (link) {
      DeterministicMap f = deterministic_map(link->trans);
      if (f.deterministic && link->ny <= nv) side.maps.push_back(f.f); // V = Y
      side.bases.push_back(image_uniformizer(*link));
    }
    return side;
  };

  const StateChannel* l1 = nullptr;
  const StateChannel* l2 = nullptr;
  std::optional<std::pair<StateChannel, StateChannel>> links;
  if (ch.product_output()) {
    OrthogonalFactors of = orthogonal_factors(ch);
    if (of.orthogonal) {
      links = orthogonal_links(ch, of);
      l1 = &links->first;
      l2 = &links->second;
    }
  }
  Side s1 = make_side(ch.nx1, ch.ns1, nv1, l1);
  Side s2 = make_side(ch.nx2, ch.ns2, nv2, l2);

  auto block_of = [](const Side& sd, const CondPmf& base, const std::vector<int>& g) {
    std::vector<double> t(static_cast<std::size_t>(sd.ns) * sd.nx * sd.nv, 0.0);
    for (int s = 0; s < sd.ns; ++s)
      for (int x = 0; x < sd.nx; ++x)
        t[(static_cast<std::size_t>(s) * sd.nx + x) * sd.nv + g[x * sd.ns + s]] = base.at(s, x);
    return CondPmf(sd.ns, sd.nx * sd.nv, std::move(t));
  };

  std::vector<CandidatePdf> seeds;
  for (std::size_t b1 = 0; b1 < s1.bases.size(); ++b1)
    for (std::size_t m1 = 0; m1 < s1.maps.size(); ++m1)
      for (std::size_t b2 = 0; b2 < s2.bases.size(); ++b2)
        for (std::size_t m2 = 0; m2 < s2.maps.size(); ++m2) {
          CandidatePdf c;
          c.blocks.push_back({{ch.ns1}, {ch.nx1, nv1}, block_of(s1, s1.bases[b1], s1.maps[m1])});
          c.blocks.push_back({{ch.ns2}, {ch.nx2, nv2}, block_of(s2, s2.bases[b2], s2.maps[m2])});
          seeds.push_back(std::move(c));
        }
  return seeds;
}

/// Embed an independent-block candidate into the joint outer family; the
/// per-candidate constraint values of (8) and (4) coincide on products.
inline CandidatePdf mac_embed_joint(const MacStateChannel& ch, const CandidatePdf& inner) {
  const int nv1 = inner.blocks[0].out[1], nv2 = inner.blocks[1].out[1];
  const int cols = ch.nx1 * ch.nx2 * nv1 * nv2;
  std::vector<double> t(static_cast<std::size_t>(ch.ns1) * ch.ns2 * cols, 0.0);
  for (int s1 = 0; s1 < ch.ns1; ++s1)
    for (int s2 = 0; s2 < ch.ns2; ++s2)
      for (int x1 = 0; x1 < ch.nx1; ++x1)
        for (int x2 = 0; x2 < ch.nx2; ++x2)
          for (int v1 = 0; v1 < nv1; ++v1)
            for (int v2 = 0; v2 < nv2; ++v2) {
              int col = ((x1 * ch.nx2 + x2) * nv1 + v1) * nv2 + v2;
              t[static_cast<std::size_t>(s1 * ch.ns2 + s2) * cols + col] =
                  inner.blocks[0].table.at(s1, x1 * nv1 + v1) * inner.blocks[1].table.at(s2, x2 * nv2 + v2);
            }
  CandidatePdf c;
  c.blocks.push_back({{ch.ns1, ch.ns2}, {ch.nx1, ch.nx2, nv1, nv2}, CondPmf(ch.ns1 * ch.ns2, cols, std::move(t))});
  return c;
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

inline SweepResult mac_inner_region(const MacStateChannel& ch, const SearchBudget& budget,
                                    MacCards cards = {}) {
  const int nv1 = cards.v1 > 0 ? cards.v1 : mac_default_card(ch.nx1, ch.ns1);
  const int nv2 = cards.v2 > 0 ? cards.v2 : mac_default_card(ch.nx2, ch.ns2);
  CandidateShape shape{{BlockSpec{{ch.ns1}, {ch.nx1, nv1}}, BlockSpec{{ch.ns2}, {ch.nx2, nv2}}}};
  ConstraintBuilder b = [&](const CandidatePdf& c) {
    return mac_constraints(mac_rhs_achievable(mac_joint_inner(ch, c)));
  };
  return region_sweep(b, 2, shape, budget, mac_inner_seeds(ch, nv1, nv2));
}

inline SweepResult mac_outer_region_impl(const MacStateChannel& ch, const SearchBudget& budget,
                                         MacCards cards, bool weak) {
  const int nv1 = cards.v1 > 0 ? cards.v1 : mac_default_card(ch.nx1, ch.ns1);
  const int nv2 = cards.v2 > 0 ? cards.v2 : mac_default_card(ch.nx2, ch.ns2);
  CandidateShape shape{{BlockSpec{{ch.ns1, ch.ns2}, {ch.nx1, ch.nx2, nv1, nv2}}}};
  ConstraintBuilder b = [&, weak](const CandidatePdf& c) {
    JointPmf j = mac_joint_outer(ch, c);
    return mac_constraints(weak ? mac_rhs_achievable(j) : mac_rhs_outer(j));
  };
  // Harvest the inner sweep's corner candidates: the joint family contains
  // every product candidate.
  std::vector<CandidatePdf> seeds;
  for (const auto& s : mac_inner_seeds(ch, nv1, nv2)) seeds.push_back(mac_embed_joint(ch, s));
  SweepResult inner = mac_inner_region(ch, budget, cards);
  for (const auto& arg : inner.corner_args) seeds.push_back(mac_embed_joint(ch, arg));
  return region_sweep(b, 2, shape, budget, seeds);
}

inline SweepResult mac_outer_region(const MacStateChannel& ch, const SearchBudget& budget,
                                    MacCards cards = {}) {
  return mac_outer_region_impl(ch, budget, cards, false);
}

inline SweepResult mac_outer_weak_region(const MacStateChannel& ch, const SearchBudget& budget,
                                         MacCards cards = {}) {
  return mac_outer_region_impl(ch, budget, cards, true);
}

struct OrthMacResult {
  RateRegion region;
  double r1 = 0.0, r2 = 0.0; // per-link Gel'fand-Pinsker capacities
};

/// Orthogonal MAC with independent states: capacity rectangle from the two
/// single-user problems.
inline OrthMacResult orth_mac_capacity(const MacStateChannel& ch, const SearchBudget& budget,
                                       int card_v1 = 0, int card_v2 = 0) {
  OrthogonalFactors of = orthogonal_factors(ch);
  if (!of.orthogonal) throw std::invalid_argument("orth_mac_capacity: channel is not orthogonal");
  std::vector<double> joint = ch.state.table();
  std::vector<double> p1 = ch.state.marginal_table({"S1"});
  std::vector<double> p2 = ch.state.marginal_table({"S2"});
  for (int s1 = 0; s1 < ch.ns1; ++s1)
    for (int s2 = 0; s2 < ch.ns2; ++s2)
      if (std::abs(joint[static_cast<std::size_t>(s1) * ch.ns2 + s2] - p1[s1] * p2[s2]) > 1e-9)
        throw std::invalid_argument("orth_mac_capacity: states are not independent");
  auto links = orthogonal_links(ch, of);
  OrthMacResult r;
  r.r1 = gp_capacity(links.first, budget, card_v1).bits;
  r.r2 = gp_capacity(links.second, budget, card_v2).bits;
  r.region = polytope_from_constraints({{{1, 0, 0}, r.r1}, {{0, 1, 0}, r.r2}}, 2);
  return r;
}

/// Deterministic orthogonal MAC, correlated states allowed: exact rectangle
/// with sides sum_{s_i} P(s_i) log2 |image f_i(.,s_i)|.
inline OrthMacResult det_orth_mac_capacity(const MacStateChannel& ch) {
  OrthogonalFactors of = orthogonal_factors(ch);
  if (!of.orthogonal) throw std::invalid_argument("det_orth_mac_capacity: channel is not orthogonal");
  auto links = orthogonal_links(ch, of);
  OrthMacResult r;
  r.r1 = det_capacity(links.first); // throws when a factor is not deterministic
  r.r2 = det_capacity(links.second);
  r.region = polytope_from_constraints({{{1, 0, 0}, r.r1}, {{0, 1, 0}, r.r2}}, 2);
  return r;
}

}  // namespace statecap
