#pragma once
// Monte Carlo random-binning encoder/decoder for the single-user channel
// with non-causal transmitter CSI.
//
// Two evaluation paths share one design and one typicality notion
// (total-variation ball around the design joint type, zero design cells
// forced to stay empty):
//
//  * BinningCode holds an explicit codebook; encode scans the message's bin
//    for a state-typical sequence, decode scans the whole codebook for a
//    unique output-typical one. Only viable for desk-scale codebooks.
//
//  * simulate() samples the random-code ensemble exactly without ever
//    materializing a codebook: the number of typical sequences among
//    2^{n(R+R')} i.i.d. draws is Binomial with a per-draw probability that
//    is a sum over joint types, computed by enumerating the types inside
//    the ball. At block lengths in the thousands the Binomial is
//    indistinguishable from its Poisson limit (the gap is exp-hundreds).
//    Every trial draws fresh code randomness, which matches the error
//    statistics of per-trial regenerated codebooks.

#include <optional>

#include "statecap/channels.hpp"
#include "statecap/optimizer.hpp"

namespace statecap {

// ---------------------------------------------------------------------------
// Design distributions derived from the channel and a P_{U,X|S} block
// (columns (u,x) with u slowest, e.g. a gp_capacity argmax).
// ---------------------------------------------------------------------------
struct BinningDesign {
  int nu = 0, nx = 0, ns = 0, ny = 0;
  std::vector<double> ps;         // P_S
  std::vector<double> pu;         // P_U
  std::vector<double> pus;        // P_{U,S}, [u*ns + s]
  std::vector<double> puy;        // P_{U,Y}, [u*ny + y]
  std::vector<double> x_given_us; // [(u*ns + s)*nx + x]
  std::vector<double> channel;    // P(y|x,s), [(x*ns + s)*ny + y]
  double i_us_bits = 0.0;         // I(U;S) of the design
};

/// Drop auxiliary symbols that the design never uses: dead U symbols would
/// otherwise inflate the alphabet-scaled typicality slack for nothing.
inline CondPmf compact_design_block(const CondPmf& block, int nx) {
  const int ns = block.n_in();
  const int nu = block.n_out() / nx;
  std::vector<int> keep;
  for (int u = 0; u < nu; ++u) {
    double mass = 0.0;
    for (int s = 0; s < ns; ++s)
      for (int x = 0; x < nx; ++x) mass += block.at(s, u * nx + x);
    if (mass > 1e-12) keep.push_back(u);
  }
  if (static_cast<int>(keep.size()) == nu) return block;
  std::vector<double> t(static_cast<std::size_t>(ns) * keep.size() * nx, 0.0);
  for (int s = 0; s < ns; ++s) {
    double row_mass = 0.0;
    for (std::size_t k = 0; k < keep.size(); ++k)
      for (int x = 0; x < nx; ++x) {
        double v = block.at(s, keep[k] * nx + x);
        t[(static_cast<std::size_t>(s) * keep.size() + k) * nx + x] = v;
        row_mass += v;
      }
    for (std::size_t k = 0; k < keep.size(); ++k)
      for (int x = 0; x < nx; ++x) t[(static_cast<std::size_t>(s) * keep.size() + k) * nx + x] /= row_mass;
  }
  return CondPmf(ns, static_cast<int>(keep.size()) * nx, std::move(t));
}

inline BinningDesign make_design(const StateChannel& ch, const CondPmf& raw_block) {
  if (raw_block.n_in() != ch.ns || raw_block.n_out() % ch.nx != 0)
    throw std::invalid_argument("make_design: design block must be P_{U,X|S} with rows S");
  CondPmf p_ux_given_s = compact_design_block(raw_block, ch.nx);
  BinningDesign d;
  d.nu = p_ux_given_s.n_out() / ch.nx;
  d.nx = ch.nx;
  d.ns = ch.ns;
  d.ny = ch.ny;
  d.ps = ch.state.probs();
  d.pu.assign(d.nu, 0.0);
  d.pus.assign(static_cast<std::size_t>(d.nu) * d.ns, 0.0);
  d.puy.assign(static_cast<std::size_t>(d.nu) * d.ny, 0.0);
  d.x_given_us.assign(static_cast<std::size_t>(d.nu) * d.ns * d.nx, 0.0);
  d.channel.assign(static_cast<std::size_t>(d.nx) * d.ns * d.ny, 0.0);
  for (int x = 0; x < d.nx; ++x)
    for (int s = 0; s < d.ns; ++s)
      for (int y = 0; y < d.ny; ++y) d.channel[(static_cast<std::size_t>(x) * d.ns + s) * d.ny + y] = ch.p(y, x, s);

  for (int s = 0; s < d.ns; ++s)
    for (int u = 0; u < d.nu; ++u) {
      double pu_s = 0.0;
      for (int x = 0; x < d.nx; ++x) pu_s += p_ux_given_s.at(s, u * d.nx + x);
      const double joint = d.ps[s] * pu_s;
      d.pus[static_cast<std::size_t>(u) * d.ns + s] = joint;
      d.pu[u] += joint;
      for (int x = 0; x < d.nx; ++x) {
        double px = pu_s > 0.0 ? p_ux_given_s.at(s, u * d.nx + x) / pu_s : (x == 0 ? 1.0 : 0.0);
        d.x_given_us[(static_cast<std::size_t>(u) * d.ns + s) * d.nx + x] = px;
        for (int y = 0; y < d.ny; ++y)
          d.puy[static_cast<std::size_t>(u) * d.ny + y] += joint * px * ch.p(y, x, s);
      }
    }
  for (int u = 0; u < d.nu; ++u)
    for (int s = 0; s < d.ns; ++s) {
      double j = d.pus[static_cast<std::size_t>(u) * d.ns + s];
      if (j > 0.0) d.i_us_bits += j * std::log2(j / (d.pu[u] * d.ps[s]));
    }
  return d;
}

/// Default slack scaled by the pair alphabet: eps_base * sqrt(|A||B|) / 2.
inline double pair_epsilon(double eps_base, int na, int nb) {
  return eps_base * std::sqrt(static_cast<double>(na) * nb) / 2.0;
}

/// TV ball membership with zero design cells forced empty.
inline bool typical_counts(const std::vector<long>& counts, const std::vector<double>& design,
                           long n, double eps) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (design[i] == 0.0 && counts[i] > 0) return false;
    l1 += std::abs(static_cast<double>(counts[i]) - n * design[i]);
  }
  return l1 <= 2.0 * eps * n + 1e-9;
}

// ---------------------------------------------------------------------------
// Explicit codebook (desk scale)
// ---------------------------------------------------------------------------
struct BinningCode {
  int n = 0;
  double rate = 0.0, excess = 0.0, eps_base = 0.05;
  long n_messages = 0, bin_size = 0;
  std::vector<std::vector<std::uint8_t>> codebook; // bins contiguous, message-major
  std::uint64_t seed = 0;
};

inline BinningCode make_code(const BinningDesign& d, int n, double rate, double excess,
                             double eps_base, std::uint64_t seed) {
  BinningCode code;
  code.n = n;
  code.rate = rate;
  code.excess = excess;
  code.eps_base = eps_base;
  code.seed = seed;
  const double msgs = std::ceil(std::exp2(n * rate) - 1e-9);
  const double bins = std::ceil(std::exp2(n * excess) - 1e-9);
  if (!(msgs * bins <= (1 << 22)) || !(msgs * bins * n <= 5e8))
    throw std::invalid_argument("make_code: codebook too large to materialize; use simulate()");
  code.n_messages = static_cast<long>(msgs);
  code.bin_size = static_cast<long>(bins);
  Rng rng(seed);
  code.codebook.resize(static_cast<std::size_t>(code.n_messages * code.bin_size));
  for (auto& seq : code.codebook) {
    seq.resize(n);
    for (int t = 0; t < n; ++t) seq[t] = static_cast<std::uint8_t>(rng.categorical(d.pu));
  }
  return code;
}

struct EncodeResult {
  bool ok = false;
  std::vector<std::uint8_t> x, u;
};

/// Scan the message's bin for a sequence whose joint type with s_seq sits in
/// the design ball; emit X symbol-wise from P_{X|U,S}.
inline EncodeResult encode(const BinningCode& code, const BinningDesign& d,
                           const std::vector<std::uint8_t>& s_seq, long message, Rng& rng) {
  if (static_cast<int>(s_seq.size()) != code.n) throw std::invalid_argument("encode: bad state length");
  if (message < 0 || message >= code.n_messages) throw std::invalid_argument("encode: bad message");
  const double eps = pair_epsilon(code.eps_base, d.nu, d.ns);
  EncodeResult res;
  for (long j = 0; j < code.bin_size; ++j) {
    const auto& u = code.codebook[static_cast<std::size_t>(message * code.bin_size + j)];
    std::vector<long> counts(static_cast<std::size_t>(d.nu) * d.ns, 0);
    for (int t = 0; t < code.n; ++t) ++counts[static_cast<std::size_t>(u[t]) * d.ns + s_seq[t]];
    if (!typical_counts(counts, d.pus, code.n, eps)) continue;
    res.ok = true;
    res.u = u;
    res.x.resize(code.n);
    for (int t = 0; t < code.n; ++t) {
      const double* row = d.x_given_us.data() + (static_cast<std::size_t>(u[t]) * d.ns + s_seq[t]) * d.nx;
      double cum = 0.0, r = rng.uniform();
      int x = d.nx - 1;
      for (int xx = 0; xx < d.nx; ++xx) {
        cum += row[xx];
        if (r < cum) {
          x = xx;
          break;
        }
      }
      res.x[t] = static_cast<std::uint8_t>(x);
    }
    return res;
  }
  return res; // encoding error: no bin member matched the state type
}

struct DecodeResult {
  bool ok = false;
  long message = -1;
};

/// Unique codeword jointly typical with y_seq; zero or several is a failure.
inline DecodeResult decode(const BinningCode& code, const BinningDesign& d,
                           const std::vector<std::uint8_t>& y_seq) {
  if (static_cast<int>(y_seq.size()) != code.n) throw std::invalid_argument("decode: bad output length");
  const double eps = pair_epsilon(code.eps_base, d.nu, d.ny);
  DecodeResult res;
  long hit = -1;
  for (long i = 0; i < static_cast<long>(code.codebook.size()); ++i) {
    const auto& u = code.codebook[static_cast<std::size_t>(i)];
    std::vector<long> counts(static_cast<std::size_t>(d.nu) * d.ny, 0);
    for (int t = 0; t < code.n; ++t) ++counts[static_cast<std::size_t>(u[t]) * d.ny + y_seq[t]];
    if (!typical_counts(counts, d.puy, code.n, eps)) continue;
    if (hit >= 0) return res; // zero or multiple candidates fail, duplicates included
    hit = i;
  }
  if (hit < 0) return res;
  res.ok = true;
  res.message = hit / code.bin_size;
  return res;
}

// ---------------------------------------------------------------------------
// Joint-type enumeration over a TV ball with fixed column sums
// ---------------------------------------------------------------------------
namespace detail {

struct TypeBall {
  int na = 0, nb = 0;
  const std::vector<double>* design; // [a*nb + b], joint law
  std::vector<long> colsum;          // observed counts per b
  long n = 0;
  double l1cap = 0.0;

  double bound() const {
    double total = 1.0;
    for (int b = 0; b < nb; ++b) {
      int free_cells = 0;
      for (int a = 0; a < na; ++a)
        if ((*design)[static_cast<std::size_t>(a) * nb + b] > 0.0) ++free_cells;
      double width = std::min<double>(2.0 * l1cap + 1.0, static_cast<double>(colsum[b]) + 1.0);
      for (int i = 0; i + 1 < free_cells; ++i) total *= width;
      if (total > 1e18) return total;
    }
    return total;
  }

  /// Visit each type in the ball; leaf(counts) with counts[a*nb+b].
  template <typename Fn>
  void enumerate(Fn&& leaf) const {
    if (bound() > 5e7)
      throw std::invalid_argument("binning: joint-type enumeration too large; shrink alphabets or epsilon");
    std::vector<long> counts(static_cast<std::size_t>(na) * nb, 0);
    walk_column(0, 0.0, counts, leaf);
  }

 private:
  template <typename Fn>
  void walk_column(int b, double l1, std::vector<long>& counts, Fn&& leaf) const {
    if (b == nb) {
      leaf(static_cast<const std::vector<long>&>(counts));
      return;
    }
    walk_cell(b, 0, colsum[b], l1, counts, leaf);
  }

  template <typename Fn>
  void walk_cell(int b, int a, long remaining, double l1, std::vector<long>& counts, Fn&& leaf) const {
    const std::size_t cell = static_cast<std::size_t>(a) * nb + b;
    const double target = n * (*design)[cell];
    if (a == na - 1) {
      if ((*design)[cell] == 0.0 && remaining > 0) return;
      double nl1 = l1 + std::abs(static_cast<double>(remaining) - target);
      if (nl1 > l1cap + 1e-9) return;
      counts[cell] = remaining;
      walk_column(b + 1, nl1, counts, leaf);
      counts[cell] = 0;
      return;
    }
    if ((*design)[cell] == 0.0) {
      counts[cell] = 0;
      walk_cell(b, a + 1, remaining, l1, counts, leaf);
      return;
    }
    const double budget = l1cap + 1e-9 - l1;
    long lo = std::max<long>(0, static_cast<long>(std::ceil(target - budget)));
    long hi = std::min<long>(remaining, static_cast<long>(std::floor(target + budget)));
    for (long t = lo; t <= hi; ++t) {
      double nl1 = l1 + std::abs(static_cast<double>(t) - target);
      if (nl1 > l1cap + 1e-9) continue;
      counts[cell] = t;
      walk_cell(b, a + 1, remaining - t, nl1, counts, leaf);
    }
    counts[cell] = 0;
  }
};

/// Streaming log-sum-exp.
struct LogSum {
  double mx = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  void add(double lw) {
    if (lw == -std::numeric_limits<double>::infinity()) return;
    if (lw > mx) {
      acc = acc * std::exp(mx - lw) + 1.0;
      mx = lw;
    } else {
      acc += std::exp(lw - mx);
    }
  }
  double value() const { return acc == 0.0 ? -std::numeric_limits<double>::infinity() : mx + std::log(acc); }
};

struct LgammaTable {
  std::vector<double> t;
  explicit LgammaTable(long n) : t(static_cast<std::size_t>(n) + 2) {
    for (long i = 0; i <= n + 1; ++i) t[static_cast<std::size_t>(i)] = std::lgamma(static_cast<double>(i) + 1.0);
  }
  double fact(long k) const { return t[static_cast<std::size_t>(k)]; } // log k!
};

/// log P(one iid-marginal draw lands on counts T | fixed column sequence):
/// sum_b [ log colsum_b! - sum_a log T_ab! ] + sum_ab T_ab log marg_a.
inline double type_log_weight(const std::vector<long>& counts, int na, int nb,
                              const std::vector<double>& marg, const std::vector<long>& colsum,
                              const LgammaTable& lg, const std::vector<double>& log_marg) {
  double w = 0.0;
  for (int b = 0; b < nb; ++b) w += lg.fact(colsum[b]);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      long c = counts[static_cast<std::size_t>(a) * nb + b];
      if (c == 0) continue;
      if (marg[a] == 0.0) return -std::numeric_limits<double>::infinity();
      w += -lg.fact(c) + c * log_marg[a];
    }
  return w;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Ensemble-statistical simulation
// ---------------------------------------------------------------------------
struct SimulateStats {
  long trials = 0;
  long block_errors = 0;
  long encode_failures = 0;
  double block_error_rate = 0.0;
  double encode_failure_rate = 0.0;
};

/// Simulate `trials` transmissions of a random binning code with message
/// rate R and binning excess R' (excess < 0 selects the default
/// I(U;S) + 3 eps). Exact in distribution for the i.i.d. random-code
/// ensemble with a fresh code every trial.
inline SimulateStats simulate(const StateChannel& ch, const CondPmf& design_block, double rate,
                              double excess, int n, long trials, std::uint64_t seed,
                              double eps_base = 0.05) {
  if (ch.nx > 4 || ch.ns > 4 || ch.ny > 4)
    throw std::invalid_argument("simulate: alphabets must be <= 4");
  if (n < 1 || n > 10000) throw std::invalid_argument("simulate: n must be in [1, 10000]");
  BinningDesign d = make_design(ch, design_block);
  const double eps_us = pair_epsilon(eps_base, d.nu, d.ns);
  const double eps_uy = pair_epsilon(eps_base, d.nu, d.ny);
  if (excess < 0.0) excess = d.i_us_bits + 3.0 * eps_us;
  detail::LgammaTable lg(n);
  std::vector<double> log_pu(d.nu, -std::numeric_limits<double>::infinity());
  for (int u = 0; u < d.nu; ++u)
    if (d.pu[u] > 0.0) log_pu[u] = std::log(d.pu[u]);

  SimulateStats st;
  st.trials = trials;
  const double ln2 = std::log(2.0);

  for (long trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(trial) + 1));

    // State sequence -> per-state counts.
    std::vector<long> s_count(d.ns, 0);
    for (int t = 0; t < n; ++t) ++s_count[rng.categorical(d.ps)];

    // Encoder: probability one random sequence is state-typical, then the
    // chance the message's bin of 2^{nR'} draws has at least one.
    detail::TypeBall ball_us{d.nu, d.ns, &d.pus, s_count, n, 2.0 * eps_us * n};
    detail::LogSum zs;
    ball_us.enumerate([&](const std::vector<long>& c) {
      zs.add(detail::type_log_weight(c, d.nu, d.ns, d.pu, s_count, lg, log_pu));
    });
    const double log_q = zs.value();
    bool encode_ok = false;
    if (std::isfinite(log_q)) {
      // log of B*lambda with lambda = -ln(1-q) >= q
      double q = std::exp(std::min(log_q, 0.0));
      double log_lam = q < 1e-12 ? log_q : std::log(-std::log1p(-std::min(q, 1.0 - 1e-16)));
      double log_mu = n * excess * ln2 + log_lam;
      double p_fail = log_mu > 7.0 ? 0.0 : std::exp(-std::exp(log_mu));
      encode_ok = rng.uniform() >= p_fail;
    }
    if (!encode_ok) {
      ++st.encode_failures;
      ++st.block_errors;
      continue;
    }

    // Sample the selected sequence's joint type with the state, then push
    // symbols through P_{X|U,S} and the channel.
    const double z = zs.value();
    double target = rng.uniform();
    std::vector<long> chosen;
    double cum = 0.0;
    ball_us.enumerate([&](const std::vector<long>& c) {
      if (!chosen.empty()) return;
      cum += std::exp(detail::type_log_weight(c, d.nu, d.ns, d.pu, s_count, lg, log_pu) - z);
      if (cum >= target) chosen = c;
    });
    if (chosen.empty()) { // numerical tail: fall back to the last type
      ball_us.enumerate([&](const std::vector<long>& c) { chosen = c; });
    }

    std::vector<long> uy(static_cast<std::size_t>(d.nu) * d.ny, 0);
    std::vector<long> y_count(d.ny, 0);
    std::vector<double> xrow(d.nx), yrow(d.ny);
    for (int u = 0; u < d.nu; ++u)
      for (int s = 0; s < d.ns; ++s) {
        long c = chosen[static_cast<std::size_t>(u) * d.ns + s];
        for (long i = 0; i < c; ++i) {
          for (int x = 0; x < d.nx; ++x) xrow[x] = d.x_given_us[(static_cast<std::size_t>(u) * d.ns + s) * d.nx + x];
          int x = rng.categorical(xrow);
          for (int y = 0; y < d.ny; ++y) yrow[y] = d.channel[(static_cast<std::size_t>(x) * d.ns + s) * d.ny + y];
          int y = rng.categorical(yrow);
          ++uy[static_cast<std::size_t>(u) * d.ny + y];
          ++y_count[y];
        }
      }

    // Decoder: the true sequence must stay in the output ball and no other
    // codeword may enter it.
    bool true_typical = typical_counts(uy, d.puy, n, eps_uy);
    detail::TypeBall ball_uy{d.nu, d.ny, &d.puy, y_count, n, 2.0 * eps_uy * n};
    detail::LogSum zy;
    ball_uy.enumerate([&](const std::vector<long>& c) {
      zy.add(detail::type_log_weight(c, d.nu, d.ny, d.pu, y_count, lg, log_pu));
    });
    bool no_false = true;
    if (std::isfinite(zy.value())) {
      double log_mu = n * (rate + excess) * ln2 + zy.value();
      double p_clean = log_mu > 7.0 ? 0.0 : std::exp(-std::exp(log_mu));
      no_false = rng.uniform() < p_clean;
    }
    if (!(true_typical && no_false)) ++st.block_errors;
  }
  st.block_error_rate = static_cast<double>(st.block_errors) / std::max<long>(1, trials);
  st.encode_failure_rate = static_cast<double>(st.encode_failures) / std::max<long>(1, trials);
  return st;
}

/// Literal small-scale simulation with materialized codebooks (regenerated
/// every 50 trials); used to cross-check simulate() at matched parameters.
inline SimulateStats simulate_explicit(const StateChannel& ch, const CondPmf& design_block,
                                       double rate, double excess, int n, long trials,
                                       std::uint64_t seed, double eps_base = 0.05) {
  BinningDesign d = make_design(ch, design_block);
  const double eps_us = pair_epsilon(eps_base, d.nu, d.ns);
  if (excess < 0.0) excess = d.i_us_bits + 3.0 * eps_us;
  SimulateStats st;
  st.trials = trials;
  std::optional<BinningCode> code;
  for (long trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::mix(seed ^ 0x5eedULL, static_cast<std::uint64_t>(trial) + 1));
    if (trial % 50 == 0) code = make_code(d, n, rate, excess, eps_base, Rng::mix(seed, trial / 50 + 1));
    std::vector<std::uint8_t> s_seq(n);
    for (int t = 0; t < n; ++t) s_seq[t] = static_cast<std::uint8_t>(rng.categorical(d.ps));
    long msg = rng.uniform_int(static_cast<int>(code->n_messages));
    EncodeResult enc = encode(*code, d, s_seq, msg, rng);
    if (!enc.ok) {
      ++st.encode_failures;
      ++st.block_errors;
      continue;
    }
    std::vector<std::uint8_t> y_seq(n);
    std::vector<double> yrow(d.ny);
    for (int t = 0; t < n; ++t) {
      for (int y = 0; y < d.ny; ++y) yrow[y] = d.channel[(static_cast<std::size_t>(enc.x[t]) * d.ns + s_seq[t]) * d.ny + y];
      y_seq[t] = static_cast<std::uint8_t>(rng.categorical(yrow));
    }
    DecodeResult dec = decode(*code, d, y_seq);
    if (!dec.ok || dec.message != msg) ++st.block_errors;
  }
  st.block_error_rate = static_cast<double>(st.block_errors) / std::max<long>(1, trials);
  st.encode_failure_rate = static_cast<double>(st.encode_failures) / std::max<long>(1, trials);
  return st;
}

}  // namespace statecap
