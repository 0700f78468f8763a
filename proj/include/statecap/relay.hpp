#pragma once
// Relay-channel achievable rates on finite alphabets (partial
// decode-and-forward with full CSI, decode-and-forward with degraded CSI)
// and the exact Gaussian algebra for the degraded relay channel with
// additive interferences.
//
// Gaussian side: the published construction carries a systematic typo where
// the coherent-split coefficient appears as sqrt(alpha ...) although only
// sqrt(1-alpha ...) keeps E[X^2] = P and reproduces the closed-form rate;
// this file uses the consistent version (verified to ~1e-15 in the tests).
// The second min-term of the discrete partial-DF rate is printed in a
// corrupted form in its source; both the verbatim reading and a plausible
// repair are provided, selected by RelayTerm2.

#include "statecap/channels.hpp"
#include "statecap/gaussian.hpp"
#include "statecap/optimizer.hpp"

namespace statecap {

// ---------------------------------------------------------------------------
// Gaussian degraded relay channel with additive interferences
// ---------------------------------------------------------------------------

struct GaussianRelayParams {
  double P = 1.0, Pr = 1.0;   // transmit powers
  double Nr = 1.0, Nd = 1.0;  // noise variances (relay hop, extra hop)
  double Psr = 0.0, Psd = 0.0; // interference variances
  double rho = 0.0;            // correlation of (S_r, S_d)

  void validate() const {
    if (P < 0 || Pr < 0 || Psr < 0 || Psd < 0) throw std::invalid_argument("powers must be >= 0");
    if (Nr <= 0 || Nd <= 0) throw std::invalid_argument("noise variances must be > 0");
    if (std::abs(rho) > 1.0) throw std::invalid_argument("|rho| must be <= 1");
  }
};

struct DpcCoefficients {
  double alpha = 1.0;
  double beta_r = 0.0, beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;

  static DpcCoefficients derive(const GaussianRelayParams& g, double alpha) {
    const double ab = 1.0 - alpha;
    const double cross = std::sqrt(ab * g.P * g.Pr);
    const double a = g.Pr > 0.0 ? std::sqrt(ab * g.P / g.Pr) : 0.0;
    DpcCoefficients d;
    d.alpha = alpha;
    d.beta_r = (g.Pr + cross) / (g.P + g.Pr + 2.0 * cross + g.Nr + g.Nd);
    d.beta1 = alpha * g.P / (alpha * g.P + g.Nr);
    d.beta2 = alpha * g.P / (alpha * g.P + g.Nr + g.Nd);
    d.beta3 = d.beta2 * (a + 1.0) - a;
    return d;
  }
};

inline double c_gauss(double x) { return 0.5 * std::log2(1.0 + x); }

/// min{ C((P+Pr+2 sqrt((1-alpha) P Pr))/(Nr+Nd)), C(alpha P / Nr) }.
inline double eq28_integrand(const GaussianRelayParams& g, double alpha) {
  const double cross = std::sqrt((1.0 - alpha) * g.P * g.Pr);
  return std::min(c_gauss((g.P + g.Pr + 2.0 * cross) / (g.Nr + g.Nd)), c_gauss(alpha * g.P / g.Nr));
}

struct Theorem8Rate {
  double bits = 0.0, term1 = 0.0, term2 = 0.0;
  bool rank_flagged = false;
  DpcCoefficients coeffs;
};

/// Evaluate the dirty-paper construction exactly from the joint Gaussian
/// covariance of (X0, Xr, Sr, Sd, Zr, Zd):
///   term1 = I(U,Ur; Y,Sr) - I(U,Ur; Sr,Sd)
///   term2 = I(U; Yr | Ur,Sd) - I(U; Sr | Ur,Sd)
inline Theorem8Rate theorem8_rate(const GaussianRelayParams& g, double alpha) {
  g.validate();
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  DpcCoefficients d = DpcCoefficients::derive(g, alpha);
  const double a = g.Pr > 0.0 ? std::sqrt((1.0 - alpha) * g.P / g.Pr) : 0.0;

  // Base covariance, order (X0, Xr, Sr, Sd, Zr, Zd).
  Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(6, 6);
  sz(0, 0) = alpha * g.P;
  sz(1, 1) = g.Pr;
  sz(2, 2) = g.Psr;
  sz(3, 3) = g.Psd;
  sz(2, 3) = sz(3, 2) = g.rho * std::sqrt(g.Psr * g.Psd);
  sz(4, 4) = g.Nr;
  sz(5, 5) = g.Nd;

  // Derived rows (U, Ur, Y, Yr, Sr, Sd):
  //   X  = a Xr + X0
  //   Ur = beta_r Sd + Xr
  //   U  = beta1 Sr + beta2 Sd + beta3 Xr + X
  //   Yr = X + Sr + Zr
  //   Y  = X + Xr + Sd + Zr + Zd   (the relay noise reappears downstream)
  Eigen::MatrixXd L(6, 6);
  //      X0      Xr            Sr       Sd        Zr   Zd
  L << 1.0, d.beta3 + a, d.beta1, d.beta2, 0.0, 0.0, // U
      0.0, 1.0, 0.0, d.beta_r, 0.0, 0.0,             // Ur
      1.0, 1.0 + a, 0.0, 1.0, 1.0, 1.0,              // Y
      1.0, a, 1.0, 0.0, 1.0, 0.0,                    // Yr
      0.0, 0.0, 1.0, 0.0, 0.0, 0.0,                  // Sr
      0.0, 0.0, 0.0, 1.0, 0.0, 0.0;                  // Sd
  Eigen::MatrixXd cov = L * sz * L.transpose();

  enum { U = 0, UR = 1, Y = 2, YR = 3, SR = 4, SD = 5 };
  Theorem8Rate r;
  r.coeffs = d;
  bool flag = false;
  r.term1 = gaussian_mi_bits(cov, {U, UR}, {Y, SR}, &flag) - gaussian_mi_bits(cov, {U, UR}, {SR, SD}, &flag);
  r.term2 = gaussian_cmi_bits(cov, {U}, {YR}, {UR, SD}, &flag) - gaussian_cmi_bits(cov, {U}, {SR}, {UR, SD}, &flag);
  r.rank_flagged = flag;
  r.bits = std::min(r.term1, r.term2);
  return r;
}

struct GaussianRcCapacity {
  double bits = 0.0;
  double alpha = 0.0;
};

/// Dense alpha grid (step 1e-4) plus local ternary refinement to 1e-8.
inline GaussianRcCapacity gaussian_rc_capacity(const GaussianRelayParams& g) {
  g.validate();
  auto f = [&](double a) { return eq28_integrand(g, a); };
  double best_a = 0.0, best = f(0.0);
  const int steps = 10000;
  for (int i = 1; i <= steps; ++i) {
    double a = static_cast<double>(i) / steps;
    double v = f(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  double lo = std::max(0.0, best_a - 1.0 / steps), hi = std::min(1.0, best_a + 1.0 / steps);
  while (hi - lo > 1e-8) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      lo = m1;
    else
      hi = m2;
  }
  double a = 0.5 * (lo + hi);
  double v = f(a);
  if (v >= best) return {v, a};
  return {best, best_a};
}

/// Relay knows both interferences, transmitter only the downstream part:
/// same capacity expression (the reduction is bookkeeping, not computation).
inline GaussianRcCapacity prop5_note(const GaussianRelayParams& g) { return gaussian_rc_capacity(g); }

// ---------------------------------------------------------------------------
// Discrete relay rates
// ---------------------------------------------------------------------------

struct RelayCards {
  int ur = 0, v = 0, u = 0; // 0 = defaults |Ur|=|Xr||S1|+1, |V|=|U|=|X||S|+1
};

enum class RelayTerm2 {
  Verbatim, // I(U,Y; Y|Ur,S) + I(U;Yr|Ur,S) - I(V,U;S|Ur), first term = H(Y|Ur,S)
  Variant   // I(V,U; Y|Ur)   + I(U;Yr|Ur,S) - I(V,U;S|Ur)
};

/// Joint law of the partial-DF family P_{Xr,Ur|S} P_{X,V,U|Ur,S} pushed
/// through the channel; block columns pack (xr,ur) and (x,v,u).
inline JointPmf relay_joint_pdf(const RelayStateChannel& ch, const CandidatePdf& cand) {
  const int nur = cand.blocks[0].out[1];
  const int nv = cand.blocks[1].out[1], nu = cand.blocks[1].out[2];
  Pmf ps{ch.state.marginal_table({"S1"})};
  return JointPmf::from_pmf("S", ps)
      .extend({"S"}, {{"XR", ch.nxr}, {"UR", nur}}, cand.blocks[0].table)
      .extend({"UR", "S"}, {{"X", ch.nx}, {"V", nv}, {"U", nu}}, cand.blocks[1].table)
      .extend({"X", "XR", "S"}, {{"Y", ch.ny}, {"YR", ch.nyr}}, ch.trans);
}

struct RelayRateResult {
  double bits = 0.0;
  CandidatePdf argmax;
  bool feasible_found = false; // some candidate met the strict constraints
  EvalCounters counters;
  RelayTerm2 term2 = RelayTerm2::Verbatim;
};

/// Partial decode-and-forward with CSI at transmitter and relay, three-term
/// min subject to the strict feasibility inequalities (margin 1e-9).
inline RelayRateResult pdf_relay_rate(const RelayStateChannel& ch, const SearchBudget& budget,
                                      RelayCards cards = {}, RelayTerm2 mode = RelayTerm2::Verbatim) {
  if (!ch.single_state())
    throw std::invalid_argument("pdf_relay_rate: needs a single state known at transmitter and relay");
  const int ns = ch.ns1;
  const int nur = cards.ur > 0 ? cards.ur : ch.nxr * ns + 1;
  const int nv = cards.v > 0 ? cards.v : ch.nx * ns + 1;
  const int nu = cards.u > 0 ? cards.u : ch.nx * ns + 1;

  CandidateShape shape{{BlockSpec{{ns}, {ch.nxr, nur}}, BlockSpec{{nur, ns}, {ch.nx, nv, nu}}}};
  Objective f = [&, mode](const CandidatePdf& c) -> double {
    JointPmf j = relay_joint_pdf(ch, c);
    const double feas1 = j.mutual({"V", "U"}, {"Y"}, {"UR"}) - j.mutual({"V", "U"}, {"S"}, {"UR"});
    const double feas2 = j.mutual({"V"}, {"Y"}, {"U", "UR"}) - j.mutual({"V"}, {"S"}, {"U", "UR"});
    if (feas1 <= 1e-9 || feas2 <= 1e-9) return std::numeric_limits<double>::quiet_NaN();
    const double relay_pipe = j.mutual({"U"}, {"YR"}, {"UR", "S"});
    const double t1 = j.mutual({"V", "U", "UR"}, {"Y"}) - j.mutual({"V", "U", "UR"}, {"S"});
    const double t2 = (mode == RelayTerm2::Verbatim
                           ? j.conditional_entropy({"Y"}, {"UR", "S"})
                           : j.mutual({"V", "U"}, {"Y"}, {"UR"})) +
                      relay_pipe - j.mutual({"V", "U"}, {"S"}, {"UR"});
    const double t3 = j.mutual({"V"}, {"Y"}, {"U", "UR"}) + relay_pipe - j.mutual({"V"}, {"S"}, {"U", "UR"});
    return std::min({t1, t2, t3});
  };

  // Direct-transmission style starts: Ur = Xr, V carries X, U constant or a
  // state-shifted copy.
  std::vector<CandidatePdf> seeds;
  {
    std::vector<double> b0(static_cast<std::size_t>(ns) * ch.nxr * nur, 0.0);
    for (int s = 0; s < ns; ++s)
      for (int xr = 0; xr < ch.nxr; ++xr)
        b0[(static_cast<std::size_t>(s) * ch.nxr + xr) * nur + xr % nur] = 1.0 / ch.nxr;
    for (int variant = 0; variant < 2; ++variant) {
      std::vector<double> b1(static_cast<std::size_t>(nur) * ns * ch.nx * nv * nu, 0.0);
      for (int ur = 0; ur < nur; ++ur)
        for (int s = 0; s < ns; ++s)
          for (int x = 0; x < ch.nx; ++x) {
            int v = x % nv;
            int u = variant == 0 ? 0 : (x + s) % nu;
            b1[((static_cast<std::size_t>(ur) * ns + s) * ch.nx + x) * nv * nu +
               static_cast<std::size_t>(v) * nu + u] = 1.0 / ch.nx;
          }
      CandidatePdf c;
      c.blocks.push_back({{ns}, {ch.nxr, nur}, CondPmf(ns, ch.nxr * nur, b0)});
      c.blocks.push_back({{nur, ns}, {ch.nx, nv, nu}, CondPmf(nur * ns, ch.nx * nv * nu, std::move(b1))});
      seeds.push_back(std::move(c));
    }
  }

  MaximizeResult m = maximize(f, shape, budget, seeds);
  RelayRateResult r;
  r.term2 = mode;
  r.counters = m.counters;
  if (m.found && std::isfinite(m.value)) {
    r.bits = std::max(0.0, m.value);
    r.argmax = m.argmax;
    r.feasible_found = true;
  }
  return r;
}

/// Joint law of the DF family P_{Xr,Ur|S1} P_{X,U|Ur,S1,S2}.
inline JointPmf relay_joint_df(const RelayStateChannel& ch, const CandidatePdf& cand) {
  const int nur = cand.blocks[0].out[1];
  const int nu = cand.blocks[1].out[1];
  return ch.state
      .extend({"S1"}, {{"XR", ch.nxr}, {"UR", nur}}, cand.blocks[0].table)
      .extend({"UR", "S1", "S2"}, {{"X", ch.nx}, {"U", nu}}, cand.blocks[1].table)
      .extend({"X", "XR", "S1", "S2"}, {{"Y", ch.ny}, {"YR", ch.nyr}}, ch.trans);
}

inline std::array<double, 2> df_terms(const JointPmf& j) {
  return {j.mutual({"U", "UR"}, {"Y"}) - j.mutual({"U", "UR"}, {"S1", "S2"}),
          j.mutual({"U"}, {"YR"}, {"UR", "S1"}) - j.mutual({"U"}, {"S2"}, {"UR", "S1"})};
}

/// Decode-and-forward with the transmitter seeing (S1,S2) and the relay S1.
inline RelayRateResult df_relay_rate(const RelayStateChannel& ch, const SearchBudget& budget,
                                     RelayCards cards = {}) {
  const int nur = cards.ur > 0 ? cards.ur : ch.nxr * ch.ns1 + 1;
  const int nu = cards.u > 0 ? cards.u : ch.nx * ch.ns1 * ch.ns2 + 1;
  CandidateShape shape{{BlockSpec{{ch.ns1}, {ch.nxr, nur}},
                        BlockSpec{{nur, ch.ns1, ch.ns2}, {ch.nx, nu}}}};
  Objective f = [&](const CandidatePdf& c) {
    auto t = df_terms(relay_joint_df(ch, c));
    return std::min(t[0], t[1]);
  };
  // Classical DF embedding U = X, Ur = Xr plus a state-shifted variant.
  std::vector<CandidatePdf> seeds;
  for (int variant = 0; variant < 2; ++variant) {
    std::vector<double> b0(static_cast<std::size_t>(ch.ns1) * ch.nxr * nur, 0.0);
    for (int s = 0; s < ch.ns1; ++s)
      for (int xr = 0; xr < ch.nxr; ++xr)
        b0[(static_cast<std::size_t>(s) * ch.nxr + xr) * nur + xr % nur] = 1.0 / ch.nxr;
    std::vector<double> b1(static_cast<std::size_t>(nur) * ch.ns1 * ch.ns2 * ch.nx * nu, 0.0);
    for (int ur = 0; ur < nur; ++ur)
      for (int s1 = 0; s1 < ch.ns1; ++s1)
        for (int s2 = 0; s2 < ch.ns2; ++s2)
          for (int x = 0; x < ch.nx; ++x) {
            int u = variant == 0 ? x % nu : (x + s1 + s2) % nu;
            b1[(((static_cast<std::size_t>(ur) * ch.ns1 + s1) * ch.ns2 + s2) * ch.nx + x) * nu + u] = 1.0 / ch.nx;
          }
    CandidatePdf c;
    c.blocks.push_back({{ch.ns1}, {ch.nxr, nur}, CondPmf(ch.ns1, ch.nxr * nur, std::move(b0))});
    c.blocks.push_back({{nur, ch.ns1, ch.ns2}, {ch.nx, nu}, CondPmf(nur * ch.ns1 * ch.ns2, ch.nx * nu, std::move(b1))});
    seeds.push_back(std::move(c));
  }
  MaximizeResult m = maximize(f, shape, budget, seeds);
  RelayRateResult r;
  r.counters = m.counters;
  if (m.found && std::isfinite(m.value)) {
    r.bits = std::max(0.0, m.value);
    r.argmax = m.argmax;
    r.feasible_found = true;
  }
  return r;
}

}  // namespace statecap
