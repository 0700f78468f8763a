#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "statecap/singleuser.hpp"

using namespace statecap;
using namespace statecap::testing;

TEST_CASE("blahut-arimoto on known channels", "[singleuser]") {
  // BSC(0.1)
  BlahutArimotoResult bsc = blahut_arimoto({{0.9, 0.1}, {0.1, 0.9}});
  CHECK(bsc.capacity_bits == Catch::Approx(1.0 - binary_entropy(0.1)).margin(1e-9));
  CHECK(bsc.input[0] == Catch::Approx(0.5).margin(1e-6));
  // noiseless ternary
  BlahutArimotoResult id3 = blahut_arimoto({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(id3.capacity_bits == Catch::Approx(std::log2(3.0)).margin(1e-9));
  // output independent of input
  BlahutArimotoResult nul = blahut_arimoto({{0.3, 0.7}, {0.3, 0.7}});
  CHECK(nul.capacity_bits == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("csirt capacity", "[singleuser]") {
  CHECK(csirt_capacity(xor_channel()).bits == Catch::Approx(1.0).margin(1e-9));
  CHECK(csirt_capacity(dirty_bsc(0.1)).bits == Catch::Approx(1.0 - binary_entropy(0.1)).margin(1e-9));
  CHECK(csirt_capacity(ignore_input_channel(0.2)).bits == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("deterministic capacity", "[singleuser]") {
  CHECK(det_capacity(xor_channel()) == 1.0);
  // f constant per state
  CHECK(det_capacity(det_channel(2, 2, 2, {0, 1, 0, 1}, Pmf::uniform(2))) == 0.0);
  // image sizes {2,4} with P_S = (0.5, 0.5)
  StateChannel mixed = det_channel(4, 2, 4, {0, 0, 1, 1, 0, 2, 1, 3}, Pmf::uniform(2));
  CHECK(det_capacity(mixed) == Catch::Approx(1.5).margin(1e-12));
  CHECK_THROWS_AS(det_capacity(dirty_bsc(0.1)), std::invalid_argument);
}

TEST_CASE("gp capacity on the flagship channels", "[singleuser]") {
  SearchBudget tiny;
  tiny.restarts = 8;
  tiny.refine_passes = 4;
  SECTION("no state, noiseless binary") {
    StateChannel ch(2, 1, 2, Pmf::uniform(1), CondPmf(2, 2, {1, 0, 0, 1}));
    CHECK(gp_capacity(ch, tiny).bits == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("clean writing on the XOR channel") {
    CHECK(gp_capacity(xor_channel(), tiny).bits == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("dirty BSC reaches the both-sides-CSI value") {
    double gp = gp_capacity(dirty_bsc(0.1), tiny).bits;
    double cs = csirt_capacity(dirty_bsc(0.1)).bits;
    CHECK(gp >= cs - 0.02);
    CHECK(gp <= cs + 1e-9);
  }
  SECTION("channel ignoring the input is worthless") {
    CHECK(gp_capacity(ignore_input_channel(0.1), tiny).bits == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("gp <= csirt sandwich on random channels", "[singleuser]") {
  Rng rng(77);
  SearchBudget tiny;
  tiny.restarts = 6;
  tiny.refine_passes = 3;
  for (int i = 0; i < 12; ++i) {
    StateChannel ch = random_single(2, 2, 2, rng);
    CHECK(gp_capacity(ch, tiny).bits <= csirt_capacity(ch).bits + 1e-9);
  }
}

TEST_CASE("clean-writing equality on random deterministic channels", "[singleuser]") {
  Rng rng(88);
  SearchBudget tiny;
  tiny.restarts = 4;
  tiny.refine_passes = 3;
  for (int i = 0; i < 12; ++i) {
    StateChannel ch = random_det_single(3, 2, 3, rng);
    double det = det_capacity(ch);
    CHECK(csirt_capacity(ch).bits == Catch::Approx(det).margin(1e-9));
    double gp = gp_capacity(ch, tiny).bits;
    CHECK(gp == Catch::Approx(det).margin(1e-9)); // the U = Y seed lands exactly
  }
}
