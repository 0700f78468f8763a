#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "statecap/mac.hpp"

using namespace statecap;
using namespace statecap::testing;

namespace {

SearchBudget small_budget() {
  SearchBudget b;
  b.grid_k = 2;
  b.restarts = 12;
  b.refine_passes = 4;
  return b;
}

} // namespace

TEST_CASE("deterministic orthogonal capacity rectangles", "[mac]") {
  SECTION("XOR links with correlated states give the unit square") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), correlated_states(0.8));
    OrthMacResult r = det_orth_mac_capacity(mac);
    CHECK(r.r1 == 1.0);
    CHECK(r.r2 == 1.0);
    CHECK(region_equal(r.region, polytope_from_constraints({{{1, 0, 0}, 1}, {{0, 1, 0}, 1}}, 2), 1e-12));
  }
  SECTION("constant second output collapses one side") {
    StateChannel dead = det_channel(2, 2, 2, {0, 0, 0, 0}, Pmf::uniform(2));
    MacStateChannel mac = orth_mac(xor_channel(), dead, correlated_states(0.5));
    OrthMacResult r = det_orth_mac_capacity(mac);
    CHECK(r.r1 == 1.0);
    CHECK(r.r2 == 0.0);
  }
  SECTION("image sizes {2,4} and {3,3} with uniform states") {
    StateChannel l1 = det_channel(4, 2, 4, {0, 0, 1, 1, 0, 2, 1, 3}, Pmf::uniform(2));
    StateChannel l2 = det_channel(3, 2, 3, {0, 0, 1, 1, 2, 2}, Pmf::uniform(2));
    JointPmf st({{"S1", 2}, {"S2", 2}}, {0.25, 0.25, 0.25, 0.25});
    OrthMacResult r = det_orth_mac_capacity(orth_mac(l1, l2, st));
    CHECK(r.r1 == Catch::Approx(1.5).margin(1e-12));
    CHECK(r.r2 == Catch::Approx(std::log2(3.0)).margin(1e-12));
  }
  SECTION("non-deterministic factor is rejected") {
    MacStateChannel mac = orth_mac(dirty_bsc(0.1), xor_channel(), correlated_states(0.5));
    CHECK_THROWS_AS(det_orth_mac_capacity(mac), std::invalid_argument);
  }
}

TEST_CASE("orthogonal capacity with independent states", "[mac]") {
  JointPmf indep({{"S1", 2}, {"S2", 2}}, {0.25, 0.25, 0.25, 0.25});
  SECTION("two dirty BSC links") {
    MacStateChannel mac = orth_mac(dirty_bsc(0.1), dirty_bsc(0.1), indep);
    OrthMacResult r = orth_mac_capacity(mac, small_budget());
    double c = 1.0 - binary_entropy(0.1);
    CHECK(r.r1 == Catch::Approx(c).margin(1e-6));
    CHECK(r.r2 == Catch::Approx(c).margin(1e-6));
  }
  SECTION("two XOR links") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), indep);
    OrthMacResult r = orth_mac_capacity(mac, small_budget());
    CHECK(r.r1 == Catch::Approx(1.0).margin(1e-9));
    CHECK(r.r2 == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("one link with constant output") {
    StateChannel dead(2, 2, 2, Pmf::uniform(2), CondPmf(4, 2, {1, 0, 1, 0, 1, 0, 1, 0}));
    MacStateChannel mac = orth_mac(xor_channel(), dead, indep);
    OrthMacResult r = orth_mac_capacity(mac, small_budget());
    CHECK(r.r2 == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("correlated states are rejected") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), correlated_states(0.8));
    CHECK_THROWS_AS(orth_mac_capacity(mac, small_budget()), std::invalid_argument);
  }
}

TEST_CASE("inner achievable region", "[mac]") {
  SECTION("stateless orthogonal noiseless links reach (1,1)") {
    StateChannel clean(2, 1, 2, Pmf::uniform(1), CondPmf(2, 2, {1, 0, 0, 1}));
    JointPmf st({{"S1", 1}, {"S2", 1}}, {1.0});
    SweepResult r = mac_inner_region(orth_mac(clean, clean, st), small_budget());
    CHECK(contains(r.region, {1.0 - 1e-9, 1.0 - 1e-9, 0}, 1e-9));
  }
  SECTION("channel ignoring both inputs collapses to the origin") {
    JointPmf st({{"S1", 2}, {"S2", 2}}, {0.25, 0.25, 0.25, 0.25});
    CondPmf tr = CondPmf::uniform(16, 2);
    MacStateChannel mac(2, 2, 2, 2, 2, st, tr);
    SweepResult r = mac_inner_region(mac, small_budget(), MacCards{2, 2});
    for (const auto& c : r.region.corners) {
      CHECK(c[0] <= 1e-9);
      CHECK(c[1] <= 1e-9);
    }
  }
  SECTION("deterministic orthogonal XOR MAC: the sweep reproduces the capacity square") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), correlated_states(0.8));
    SweepResult inner = mac_inner_region(mac, small_budget());
    RateRegion square = det_orth_mac_capacity(mac).region;
    CHECK(region_equal(inner.region, square, 1e-9));
  }
}

TEST_CASE("achievable sweep covers an exhaustive grid oracle", "[mac]") {
  // Stateless 2x2x2 MAC: every corner an independent full k=4 enumeration
  // finds must already sit inside the swept region.
  Rng rng(64);
  JointPmf st({{"S1", 1}, {"S2", 1}}, {1.0});
  std::vector<double> t;
  for (int r = 0; r < 4; ++r) {
    Pmf row = Pmf::dirichlet(2, rng);
    t.insert(t.end(), row.probs().begin(), row.probs().end());
  }
  MacStateChannel mac(2, 2, 1, 1, 2, st, CondPmf(4, 2, std::move(t)));
  SearchBudget b;
  b.grid_k = 4;
  b.restarts = 0;
  b.refine_passes = 0;
  MacCards cards{3, 3};
  SweepResult swept = mac_inner_region(mac, b, cards);
  CandidateShape shape{{BlockSpec{{1}, {2, 3}}, BlockSpec{{1}, {2, 3}}}};
  std::vector<RatePoint> cloud;
  for_each_grid_candidate(shape, 4, [&](const CandidatePdf& c) {
    auto rhs = mac_rhs_achievable(mac_joint_inner(mac, c));
    RateRegion poly = polytope_from_constraints(mac_constraints(rhs), 2);
    cloud.insert(cloud.end(), poly.corners.begin(), poly.corners.end());
  });
  RateRegion oracle = hull_from_cloud(2, cloud);
  CHECK(includes(swept.region, oracle, 1e-9)); // handcrafted seeds may only add
}

TEST_CASE("per-candidate outer-vs-weak dominance", "[mac]") {
  Rng rng(501);
  MacStateChannel mac = random_mac(2, 2, 2, 2, 2, rng);
  const int nv1 = 3, nv2 = 3;
  CandidateShape shape{{BlockSpec{{2, 2}, {2, 2, nv1, nv2}}}};
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Rng crng(Rng::mix(99, i));
    CandidatePdf c = random_candidate(shape, crng);
    JointPmf j = mac_joint_outer(mac, c);
    auto strong = mac_rhs_outer(j);
    auto weak = mac_rhs_achievable(j);
    for (int k = 0; k < 3; ++k) CHECK(strong[k] <= weak[k] + 1e-10);
    RateRegion p8 = polytope_from_constraints(mac_constraints(strong), 2);
    RateRegion p9 = polytope_from_constraints(mac_constraints(weak), 2);
    CHECK(includes(p9, p8, 1e-10));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("outer bounds coincide without state", "[mac]") {
  Rng rng(811);
  MacStateChannel mac = random_mac(2, 2, 1, 1, 3, rng);
  CandidateShape shape{{BlockSpec{{1, 1}, {2, 2, 2, 2}}}};
  for (int i = 0; i < 50; ++i) {
    Rng crng(Rng::mix(7, i));
    CandidatePdf c = random_candidate(shape, crng);
    JointPmf j = mac_joint_outer(mac, c);
    auto strong = mac_rhs_outer(j);
    auto weak = mac_rhs_achievable(j);
    for (int k = 0; k < 3; ++k) CHECK(strong[k] == Catch::Approx(weak[k]).margin(1e-12));
  }
}

TEST_CASE("embedded product candidates evaluate identically", "[mac]") {
  MacStateChannel mac = orth_mac(xor_channel(), dirty_bsc(0.2), correlated_states(0.7));
  std::vector<CandidatePdf> seeds = mac_inner_seeds(mac, 3, 3);
  REQUIRE(!seeds.empty());
  for (std::size_t i = 0; i < std::min<std::size_t>(seeds.size(), 6); ++i) {
    JointPmf ji = mac_joint_inner(mac, seeds[i]);
    JointPmf jo = mac_joint_outer(mac, mac_embed_joint(mac, seeds[i]));
    auto a = mac_rhs_achievable(ji), b = mac_rhs_outer(jo);
    for (int k = 0; k < 3; ++k) CHECK(a[k] == Catch::Approx(b[k]).margin(1e-10));
  }
}

TEST_CASE("outer sandwich over the inner region", "[mac]") {
  Rng rng(3001);
  for (int trial = 0; trial < 3; ++trial) {
    MacStateChannel mac = random_mac(2, 2, 2, 2, 2, rng);
    SearchBudget b = small_budget();
    b.restarts = 8;
    SweepResult inner = mac_inner_region(mac, b, MacCards{2, 2});
    SweepResult outer = mac_outer_region(mac, b, MacCards{2, 2});
    CHECK(includes(outer.region, inner.region, 1e-9));
  }
  SECTION("deterministic orthogonal XOR MAC outer hull holds the capacity square") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), correlated_states(0.8));
    SweepResult outer = mac_outer_region(mac, small_budget());
    CHECK(includes(outer.region, det_orth_mac_capacity(mac).region, 1e-9));
  }
}
