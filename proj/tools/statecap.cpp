// Command-line front end: load channel specs, dispatch capacity/region/
// comparison computations, emit CSV and human-readable summaries.
//
// Exit codes: 0 success, 1 usage error, 2 channel-spec validation failure.
// Every numeric run echoes the resolved search budget and seed; CSV output
// is deterministic for fixed flags.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "statecap/bc.hpp"
#include "statecap/binning.hpp"
#include "statecap/mac.hpp"
#include "statecap/relay.hpp"
#include "statecap/singleuser.hpp"
#include "statecap/spec_io.hpp"

namespace {

using namespace statecap;

struct BudgetFlags {
  SearchBudget budget;
  int card_u = 0, card_v = 0, card_w = 0;
  double tol = 1e-9;

  void attach(CLI::App* cmd, bool cards = true) {
    cmd->add_option("--grid-k", budget.grid_k, "simplex grid resolution");
    cmd->add_option("--restarts", budget.restarts, "random restarts");
    cmd->add_option("--refine-passes", budget.refine_passes, "coordinate refinement passes");
    cmd->add_option("--seed", budget.seed, "RNG seed");
    cmd->add_option("--tol", tol, "comparison tolerance");
    if (cards) {
      cmd->add_option("--card-u", card_u, "auxiliary cardinality |U|");
      cmd->add_option("--card-v", card_v, "auxiliary cardinality |V| (and |V1|,|V2|)");
      cmd->add_option("--card-w", card_w, "auxiliary cardinality |W|");
    }
  }

  void echo() const {
    std::printf("# budget: grid-k=%d restarts=%d refine-passes=%d seed=%llu\n", budget.grid_k,
                budget.restarts, budget.refine_passes,
                static_cast<unsigned long long>(budget.seed));
  }
};

template <typename T>
const T* as(const AnyChannel& ch) {
  return std::get_if<T>(&ch);
}

int cmd_info(const std::string& path) {
  AnyChannel any = load_channel_file(path);
  if (const auto* ch = as<StateChannel>(any)) {
    std::printf("kind=single |X|=%d |S|=%d |Y|=%d\n", ch->nx, ch->ns, ch->ny);
    std::printf("deterministic=%s\n", is_deterministic(*ch).deterministic ? "true" : "false");
  } else if (const auto* mac = as<MacStateChannel>(any)) {
    std::printf("kind=mac |X1|=%d |X2|=%d |S1|=%d |S2|=%d |Y|=%d", mac->nx1, mac->nx2, mac->ns1,
                mac->ns2, mac->ny);
    if (mac->product_output()) std::printf(" (|Y1|=%d x |Y2|=%d)", mac->ny1, mac->ny2);
    std::printf("\n");
    if (mac->product_output()) {
      OrthogonalFactors of = orthogonal_factors(*mac);
      std::printf("orthogonal=%s\n", of.orthogonal ? "true" : "false");
      if (of.orthogonal) {
        auto links = orthogonal_links(*mac, of);
        std::printf("factor1_deterministic=%s factor2_deterministic=%s\n",
                    is_deterministic(links.first).deterministic ? "true" : "false",
                    is_deterministic(links.second).deterministic ? "true" : "false");
      }
    } else {
      std::printf("orthogonal=false (scalar output alphabet)\n");
    }
  } else if (const auto* bc = as<BcStateChannel>(any)) {
    std::printf("kind=bc |X|=%d |S|=%d |Y1|=%d |Y2|=%d\n", bc->nx, bc->ns, bc->ny1, bc->ny2);
    bool d1 = bc_output_map(*bc, 1).deterministic, d2 = bc_output_map(*bc, 2).deterministic;
    std::printf("deterministic_y1=%s deterministic_y2=%s\n", d1 ? "true" : "false", d2 ? "true" : "false");
    std::printf("degraded=%s\n", is_degraded(*bc).degraded ? "true" : "false");
    MoreCapableResult mc = is_more_capable(*bc);
    std::printf("more_capable=%s\n",
                mc.verdict == TriVerdict::CertifiedFalse ? "certified_false" : "probably_true");
    Condition12Result c12 = check_condition_12(*bc);
    const char* v = c12.verdict == TriVerdict::Holds    ? "holds"
                    : c12.verdict == TriVerdict::Fails  ? "fails"
                                                        : "sampled_only";
    std::printf("condition12=%s", v);
    if (c12.verdict == TriVerdict::Fails && c12.s >= 0)
      std::printf(" (witness s=%d x=%d x'=%d)", c12.s, c12.x, c12.x_alt);
    std::printf("\n");
  } else if (const auto* rc = as<RelayStateChannel>(any)) {
    std::printf("kind=relay |X|=%d |XR|=%d |S1|=%d |S2|=%d |YR|=%d |Y|=%d\n", rc->nx, rc->nxr,
                rc->ns1, rc->ns2, rc->nyr, rc->ny);
    std::printf("single_state=%s\n", rc->single_state() ? "true" : "false");
  }
  return 0;
}

int cmd_capacity_single(const std::string& path, const BudgetFlags& bf) {
  AnyChannel any = load_channel_file(path);
  const auto* ch = as<StateChannel>(any);
  if (!ch) throw SpecError("capacity single: spec file is not a single-user channel");
  bf.echo();
  GpResult gp = gp_capacity(*ch, bf.budget, bf.card_u);
  CsirtResult cs = csirt_capacity(*ch);
  if (is_deterministic(*ch).deterministic)
    std::printf("gp=%.3f csirt=%.3f det=%.3f\n", gp.bits, cs.bits, det_capacity(*ch));
  else
    std::printf("gp=%.3f csirt=%.3f\n", gp.bits, cs.bits);
  std::printf("gp_bits=%.9f csirt_bits=%.9f\n", gp.bits, cs.bits);
  return 0;
}

void emit_region(const RateRegion& region, const std::string& out, const std::string& support_out,
                 bool raw) {
  const auto& pts = raw && !region.raw_cloud.empty() ? region.raw_cloud : region.corners;
  std::printf("corners=%zu (%s)\n", pts.size(), raw ? "raw cloud" : "hull");
  for (const auto& c : pts) {
    if (region.dim == 3)
      std::printf("  R0=%.6f R1=%.6f R2=%.6f\n", c[0], c[1], c[2]);
    else
      std::printf("  R1=%.6f R2=%.6f\n", c[0], c[1]);
  }
  if (!out.empty()) {
    std::ofstream f(out);
    write_corners_csv(f, region, raw);
    std::printf("wrote %s\n", out.c_str());
  }
  if (!support_out.empty()) {
    std::ofstream f(support_out);
    write_support_csv(f, region);
    std::printf("wrote %s\n", support_out.c_str());
  }
}

int cmd_region_mac(const std::string& path, const std::string& bound, const BudgetFlags& bf,
                   const std::string& out, const std::string& support_out, bool raw) {
  AnyChannel any = load_channel_file(path);
  const auto* mac = as<MacStateChannel>(any);
  if (!mac) throw SpecError("region mac: spec file is not a MAC");
  bf.echo();
  MacCards cards{bf.card_v, bf.card_v};
  if (bound == "inner") {
    emit_region(mac_inner_region(*mac, bf.budget, cards).region, out, support_out, raw);
  } else if (bound == "outer") {
    emit_region(mac_outer_region(*mac, bf.budget, cards).region, out, support_out, raw);
  } else if (bound == "outer-weak") {
    emit_region(mac_outer_weak_region(*mac, bf.budget, cards).region, out, support_out, raw);
  } else if (bound == "det-orth") {
    OrthMacResult r = det_orth_mac_capacity(*mac);
    std::printf("R1<=%.9f R2<=%.9f\n", r.r1, r.r2);
    emit_region(r.region, out, support_out, raw);
  } else {
    throw CLI::ValidationError("--bound must be inner|outer|outer-weak|det-orth");
  }
  return 0;
}

int cmd_region_bc(const std::string& path, const std::string& bound, const BudgetFlags& bf,
                  const std::string& out, const std::string& support_out, bool raw) {
  AnyChannel any = load_channel_file(path);
  const auto* bc = as<BcStateChannel>(any);
  if (!bc) throw SpecError("region bc: spec file is not a BC");
  bf.echo();
  BcCards cards{bf.card_w, bf.card_v, bf.card_u};
  SweepResult r;
  if (bound == "inner")
    r = bc_inner_region(*bc, bf.budget, cards);
  else if (bound == "outer")
    r = bc_outer_region(*bc, bf.budget, cards);
  else if (bound == "det")
    r = det_bc_capacity(*bc, bf.budget);
  else if (bound == "det-common")
    r = det_bc_common_capacity(*bc, bf.budget);
  else if (bound == "semidet")
    r = semidet_bc_capacity(*bc, bf.budget, bf.card_u);
  else if (bound == "more-capable")
    r = more_capable_capacity(*bc, bf.budget, bf.card_u);
  else if (bound == "degraded-det")
    r = degraded_det_capacity(*bc, bf.budget, bf.card_u);
  else
    throw CLI::ValidationError("--bound must be inner|outer|det|det-common|semidet|more-capable|degraded-det");
  emit_region(r.region, out, support_out, raw);
  return 0;
}

int cmd_compare_bc(const std::string& path, const std::string& against, const BudgetFlags& bf) {
  AnyChannel any = load_channel_file(path);
  const auto* bc = as<BcStateChannel>(any);
  if (!bc) throw SpecError("compare bc: spec file is not a BC");
  bf.echo();
  BcCards cards{bf.card_w, bf.card_v, bf.card_u};
  CommonRateResult ours = common_rate_ours(*bc, bf.budget, cards);
  std::printf("common_rate_ours=%.9f\n", ours.bits);
  if (against == "ss") {
    CommonRateResult ss = common_rate_ss(*bc, bf.budget, bf.card_w);
    std::printf("common_rate_ss=%.9f\n", ss.bits);
    std::printf("ordering_ok=%s\n", ss.bits <= ours.bits + bf.tol ? "true" : "false");
  } else if (against == "negc") {
    CommonRateResult negc = common_rate_negc(*bc, bf.budget, cards);
    std::printf("common_rate_negc=%.9f\n", negc.bits);
    std::printf("ordering_ok=%s\n", ours.bits <= negc.bits + bf.tol ? "true" : "false");
  } else {
    throw CLI::ValidationError("--against must be ss|negc");
  }
  bool det = bc_output_map(*bc, 1).deterministic && bc_output_map(*bc, 2).deterministic;
  if (det) std::printf("common_rate_det=%.9f\n", common_rate_det(*bc, bf.budget).bits);
  return 0;
}

int cmd_relay_gaussian(const GaussianRelayParams& g, const std::string& sweep_out,
                       double alpha_step) {
  g.validate();
  GaussianRcCapacity cap = gaussian_rc_capacity(g);
  std::printf("capacity=%.9f bits at alpha=%.6f\n", cap.bits, cap.alpha);
  if (!sweep_out.empty()) {
    std::ofstream f(sweep_out);
    f << "alpha,term1,term2,min\n";
    char buf[160];
    int steps = static_cast<int>(std::round(1.0 / alpha_step));
    for (int i = 0; i <= steps; ++i) {
      double a = std::min(1.0, i * alpha_step);
      Theorem8Rate r = theorem8_rate(g, a);
      std::snprintf(buf, sizeof buf, "%.6f,%.12g,%.12g,%.12g\n", a, r.term1, r.term2, r.bits);
      f << buf;
    }
    std::printf("wrote %s\n", sweep_out.c_str());
  }
  return 0;
}

int cmd_relay_rate(const std::string& path, const std::string& scheme, const std::string& term2,
                   const BudgetFlags& bf) {
  AnyChannel any = load_channel_file(path);
  const auto* rc = as<RelayStateChannel>(any);
  if (!rc) throw SpecError("relay rate: spec file is not a relay channel");
  bf.echo();
  RelayCards cards{bf.card_w, bf.card_v, bf.card_u}; // --card-w doubles as |Ur|
  if (scheme == "pdf") {
    RelayTerm2 mode = term2 == "variant" ? RelayTerm2::Variant : RelayTerm2::Verbatim;
    RelayRateResult r = pdf_relay_rate(*rc, bf.budget, cards, mode);
    std::printf("pdf_rate=%.9f feasible=%s term2=%s%s\n", r.bits, r.feasible_found ? "true" : "false",
                term2 == "variant" ? "variant" : "verbatim",
                term2 == "variant" ? "" : " (second min-term printed ambiguously in source; provisional)");
  } else if (scheme == "df") {
    RelayRateResult r = df_relay_rate(*rc, bf.budget, cards);
    std::printf("df_rate=%.9f\n", r.bits);
  } else {
    throw CLI::ValidationError("--scheme must be pdf|df");
  }
  return 0;
}

int cmd_simulate(const std::string& path, double rate, double excess, int n, long trials,
                 std::uint64_t seed, double eps, const BudgetFlags& bf, const std::string& out) {
  AnyChannel any = load_channel_file(path);
  const auto* ch = as<StateChannel>(any);
  if (!ch) throw SpecError("simulate binning: spec file is not a single-user channel");
  bf.echo();
  GpResult gp = gp_capacity(*ch, bf.budget, bf.card_u);
  BinningDesign d = make_design(*ch, gp.argmax.blocks[0].table);
  std::printf("design: gp=%.6f I(U;S)=%.6f rate=%.4f excess=%s n=%d trials=%ld seed=%llu\n", gp.bits,
              d.i_us_bits, rate, excess < 0 ? "default" : std::to_string(excess).c_str(), n, trials,
              static_cast<unsigned long long>(seed));
  std::ofstream csv;
  if (!out.empty()) {
    csv.open(out);
    csv << "batch,trials,block_errors,encode_failures\n";
  }
  long total_err = 0, total_enc = 0, done = 0;
  long batch_size = 50;
  for (long b = 0; done < trials; ++b) {
    long this_batch = std::min(batch_size, trials - done);
    SimulateStats s = simulate(*ch, gp.argmax.blocks[0].table, rate, excess, n, this_batch,
                               Rng::mix(seed, static_cast<std::uint64_t>(b) + 1), eps);
    total_err += s.block_errors;
    total_enc += s.encode_failures;
    done += this_batch;
    if (csv.is_open()) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%ld,%ld,%ld,%ld\n", b, this_batch, s.block_errors, s.encode_failures);
      csv << buf;
    }
  }
  std::printf("block_error_rate=%.6f encode_failure_rate=%.6f\n",
              static_cast<double>(total_err) / trials, static_cast<double>(total_enc) / trials);
  if (!out.empty()) std::printf("wrote %s\n", out.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity toolkit for channels with non-causal transmitter CSI"};
  app.require_subcommand(1);
  std::function<int()> run;

  // info
  {
    auto* c = app.add_subcommand("info", "summarize a channel spec file");
    auto path = std::make_shared<std::string>();
    c->add_option("spec", *path, "channel spec file")->required();
    c->callback([path, &run] { run = [path] { return cmd_info(*path); }; });
  }
  // capacity single
  {
    auto* c = app.add_subcommand("capacity", "single-user capacities");
    auto* s = c->add_subcommand("single", "gp / csirt / det capacities");
    auto path = std::make_shared<std::string>();
    auto bf = std::make_shared<BudgetFlags>();
    s->add_option("spec", *path, "channel spec file")->required();
    bf->attach(s);
    s->callback([path, bf, &run] { run = [path, bf] { return cmd_capacity_single(*path, *bf); }; });
  }
  // region mac|bc
  {
    auto* c = app.add_subcommand("region", "rate regions");
    for (const char* kind : {"mac", "bc"}) {
      auto* s = c->add_subcommand(kind, std::string("region for a ") + kind + " spec");
      auto path = std::make_shared<std::string>();
      auto bound = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      auto support_out = std::make_shared<std::string>();
      auto convexify = std::make_shared<std::string>("on");
      auto bf = std::make_shared<BudgetFlags>();
      s->add_option("spec", *path, "channel spec file")->required();
      s->add_option("--bound", *bound, "which bound/capacity")->required();
      s->add_option("--out", *out, "corner CSV path");
      s->add_option("--support-out", *support_out, "support-sample CSV path");
      s->add_option("--convexify", *convexify, "on|off (off exports the raw corner cloud)");
      bf->attach(s);
      bool is_mac = std::string(kind) == "mac";
      s->callback([=, &run] {
        run = [=] {
          bool raw = *convexify == "off";
          return is_mac ? cmd_region_mac(*path, *bound, *bf, *out, *support_out, raw)
                        : cmd_region_bc(*path, *bound, *bf, *out, *support_out, raw);
        };
      });
    }
  }
  // compare bc
  {
    auto* c = app.add_subcommand("compare", "common-rate comparisons");
    auto* s = c->add_subcommand("bc", "compare the inner bound's common rate");
    auto path = std::make_shared<std::string>();
    auto against = std::make_shared<std::string>();
    auto bf = std::make_shared<BudgetFlags>();
    s->add_option("spec", *path, "channel spec file")->required();
    s->add_option("--against", *against, "ss|negc")->required();
    bf->attach(s);
    s->callback([=, &run] { run = [=] { return cmd_compare_bc(*path, *against, *bf); }; });
  }
  // relay gaussian / relay rate
  {
    auto* c = app.add_subcommand("relay", "relay-channel rates");
    {
      auto* s = c->add_subcommand("gaussian", "degraded Gaussian relay with interferences");
      auto g = std::make_shared<GaussianRelayParams>();
      auto sweep = std::make_shared<std::string>();
      auto step = std::make_shared<double>(0.05);
      s->add_option("--P", g->P, "source power")->required();
      s->add_option("--Pr", g->Pr, "relay power")->required();
      s->add_option("--Nr", g->Nr, "relay-hop noise variance")->required();
      s->add_option("--Nd", g->Nd, "direct-hop noise variance")->required();
      s->add_option("--Psr", g->Psr, "relay-side interference variance");
      s->add_option("--Psd", g->Psd, "destination-side interference variance");
      s->add_option("--rho", g->rho, "interference correlation");
      s->add_option("--alpha-sweep", *sweep, "CSV path for an alpha sweep");
      s->add_option("--alpha-step", *step, "alpha sweep step");
      s->callback([=, &run] { run = [=] { return cmd_relay_gaussian(*g, *sweep, *step); }; });
    }
    {
      auto* s = c->add_subcommand("rate", "discrete relay achievable rates");
      auto path = std::make_shared<std::string>();
      auto scheme = std::make_shared<std::string>("pdf");
      auto term2 = std::make_shared<std::string>("verbatim");
      auto bf = std::make_shared<BudgetFlags>();
      s->add_option("spec", *path, "channel spec file")->required();
      s->add_option("--scheme", *scheme, "pdf|df");
      s->add_option("--term2", *term2, "verbatim|variant second min-term");
      bf->attach(s);
      s->callback([=, &run] { run = [=] { return cmd_relay_rate(*path, *scheme, *term2, *bf); }; });
    }
  }
  // simulate binning
  {
    auto* c = app.add_subcommand("simulate", "Monte Carlo random binning");
    auto* s = c->add_subcommand("binning", "block-error simulation of the binning scheme");
    auto path = std::make_shared<std::string>();
    auto rate = std::make_shared<double>(0.5);
    auto excess = std::make_shared<double>(-1.0);
    auto n = std::make_shared<int>(1000);
    auto trials = std::make_shared<long>(200);
    auto eps = std::make_shared<double>(0.05);
    auto out = std::make_shared<std::string>();
    auto bf = std::make_shared<BudgetFlags>();
    s->add_option("--channel", *path, "channel spec file")->required();
    s->add_option("--rate", *rate, "message rate R (bits/use)")->required();
    s->add_option("--excess", *excess, "binning excess R' (default I(U;S)+3eps)");
    s->add_option("--n", *n, "block length");
    s->add_option("--trials", *trials, "number of trials");
    s->add_option("--epsilon", *eps, "typicality slack base");
    s->add_option("--out", *out, "per-batch CSV path");
    bf->attach(s); // the budget --seed drives the design search and the trials
    s->callback([=, &run] {
      run = [=] {
        return cmd_simulate(*path, *rate, *excess, *n, *trials, bf->budget.seed, *eps, *bf, *out);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run ? run() : 1;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
