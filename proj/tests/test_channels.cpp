#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace statecap;
using namespace statecap::testing;

TEST_CASE("deterministic detection", "[channels]") {
  DeterministicMap f = is_deterministic(xor_channel());
  REQUIRE(f.deterministic);
  CHECK(f.f == std::vector<int>{0, 1, 1, 0});
  CHECK_FALSE(is_deterministic(dirty_bsc(0.1)).deterministic);

  // BC with Y1 = X, Y2 = X and S
  BcStateChannel bc = det_bc(2, 2, 2, 2, {0, 0, 1, 1}, {0, 0, 0, 1}, Pmf::uniform(2));
  CHECK(bc_output_map(bc, 1).deterministic);
  CHECK(bc_output_map(bc, 2).deterministic);
}

TEST_CASE("orthogonality", "[channels]") {
  SECTION("two independent binary XOR links factor") {
    MacStateChannel mac = orth_mac(xor_channel(), xor_channel(), correlated_states(0.8));
    OrthogonalFactors of = orthogonal_factors(mac);
    REQUIRE(of.orthogonal);
    // factors re-multiply to the original tensor
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2)
            for (int y = 0; y < 4; ++y)
              CHECK(std::abs(mac.p(y, x1, x2, s1, s2) -
                             of.f1->at(x1 * 2 + s1, y / 2) * of.f2->at(x2 * 2 + s2, y % 2)) < 1e-9);
  }
  SECTION("scalar output alphabet is an error") {
    // Y = X1 xor X2, no product declaration
    std::vector<double> t(16 * 2, 0.0);
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2)
            t[static_cast<std::size_t>((((x1 * 2 + x2) * 2 + s1) * 2 + s2)) * 2 + (x1 ^ x2)] = 1.0;
    MacStateChannel mac(2, 2, 2, 2, 2, correlated_states(0.5), CondPmf(16, 2, std::move(t)));
    CHECK_THROWS_AS(orthogonal_factors(mac), std::invalid_argument);
  }
  SECTION("product output where y1 depends on x2 is not orthogonal") {
    std::vector<double> t(16 * 4, 0.0);
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2) {
            int y1 = x1 ^ x2, y2 = x2 ^ s2;
            t[static_cast<std::size_t>((((x1 * 2 + x2) * 2 + s1) * 2 + s2)) * 4 + y1 * 2 + y2] = 1.0;
          }
    MacStateChannel mac(2, 2, 2, 2, 4, correlated_states(0.5), CondPmf(16, 4, std::move(t)), 2, 2);
    CHECK_FALSE(orthogonal_factors(mac).orthogonal);
  }
}

TEST_CASE("degradedness via factorization feasibility", "[channels]") {
  SECTION("erasure of Y1 is degraded") {
    DegradedResult r = is_degraded(erasure_bc(0.3));
    REQUIRE(r.degraded);
    CHECK(r.q->at(0, 0) == Catch::Approx(0.7).margin(1e-9));
    CHECK(r.q->at(0, 2) == Catch::Approx(0.3).margin(1e-9));
  }
  SECTION("conditionally independent noisy copies are not degraded") {
    // Y1,Y2 independent BSC(0.1) copies of X
    std::vector<double> t;
    for (int x = 0; x < 2; ++x)
      for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2)
          t.push_back((y1 == x ? 0.9 : 0.1) * (y2 == x ? 0.9 : 0.1));
    BcStateChannel bc(2, 1, 2, 2, Pmf::uniform(1), CondPmf(2, 4, std::move(t)));
    CHECK_FALSE(is_degraded(bc).degraded);
  }
  SECTION("Y2 = Y1 is degraded with identity") {
    BcStateChannel bc = det_bc(2, 1, 2, 2, {0, 1}, {0, 1}, Pmf::uniform(1));
    DegradedResult r = is_degraded(bc);
    REQUIRE(r.degraded);
    CHECK(r.q->at(0, 0) == Catch::Approx(1.0));
    CHECK(r.q->at(1, 1) == Catch::Approx(1.0));
  }
}

TEST_CASE("more-capable classifier", "[channels]") {
  SECTION("identity vs BSC(0.2) is probably more-capable") {
    std::vector<double> t;
    for (int x = 0; x < 2; ++x)
      for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) t.push_back((y1 == x ? 1.0 : 0.0) * (y2 == x ? 0.8 : 0.2));
    BcStateChannel bc(2, 1, 2, 2, Pmf::uniform(1), CondPmf(2, 4, t));
    CHECK(is_more_capable(bc).verdict == TriVerdict::ProbablyTrue);

    // roles swapped: certified false with a genuine witness
    std::vector<double> ts;
    for (int x = 0; x < 2; ++x)
      for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) ts.push_back((y1 == x ? 0.8 : 0.2) * (y2 == x ? 1.0 : 0.0));
    BcStateChannel swapped(2, 1, 2, 2, Pmf::uniform(1), CondPmf(2, 4, ts));
    MoreCapableResult r = is_more_capable(swapped);
    REQUIRE(r.verdict == TriVerdict::CertifiedFalse);
    REQUIRE(r.witness.has_value());
    CHECK(bc_input_output_mi(swapped, *r.witness, 2) - bc_input_output_mi(swapped, *r.witness, 1) > 1e-9);
  }
  SECTION("incomparable ternary pair is certified false both ways") {
    BcStateChannel bc = det_bc(3, 1, 2, 2, {0, 0, 1}, {0, 1, 1}, Pmf::uniform(1));
    CHECK(is_more_capable(bc).verdict == TriVerdict::CertifiedFalse);
    BcStateChannel rev = det_bc(3, 1, 2, 2, {0, 1, 1}, {0, 0, 1}, Pmf::uniform(1));
    CHECK(is_more_capable(rev).verdict == TriVerdict::CertifiedFalse);
  }
  SECTION("degraded channels are never certified false") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      // random P(y1|x,s) composed with a random degrading kernel
      StateChannel inner = random_single(2, 2, 3, rng);
      std::vector<double> q;
      for (int y1 = 0; y1 < 3; ++y1) {
        Pmf row = Pmf::dirichlet(2, rng);
        q.insert(q.end(), row.probs().begin(), row.probs().end());
      }
      std::vector<double> t(static_cast<std::size_t>(4) * 6, 0.0);
      for (int x = 0; x < 2; ++x)
        for (int s = 0; s < 2; ++s)
          for (int y1 = 0; y1 < 3; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
              t[static_cast<std::size_t>(x * 2 + s) * 6 + y1 * 2 + y2] =
                  inner.p(y1, x, s) * q[static_cast<std::size_t>(y1) * 2 + y2];
      BcStateChannel bc(2, 2, 3, 2, Pmf::uniform(2), CondPmf(4, 6, std::move(t)));
      REQUIRE(is_degraded(bc).degraded);
      CHECK(is_more_capable(bc, 8, 50).verdict != TriVerdict::CertifiedFalse);
    }
  }
  SECTION("classifier is deterministic across calls") {
    Rng rng(17);
    BcStateChannel bc = random_bc(2, 2, 2, 2, rng);
    MoreCapableResult a = is_more_capable(bc, 8, 40, 3), b = is_more_capable(bc, 8, 40, 3);
    CHECK(a.verdict == b.verdict);
    CHECK(a.gap == b.gap);
  }
}

TEST_CASE("zero cross-output information condition", "[channels]") {
  SECTION("Y1 depending only on the state holds") {
    BcStateChannel bc = det_bc(2, 2, 2, 2, {0, 1, 0, 1}, {0, 0, 1, 1}, Pmf::uniform(2));
    CHECK(check_condition_12(bc).verdict == TriVerdict::Holds);
  }
  SECTION("identical binary outputs fail with the two-point witness") {
    BcStateChannel bc = det_bc(2, 1, 2, 2, {0, 1}, {0, 1}, Pmf::uniform(1));
    Condition12Result r = check_condition_12(bc);
    REQUIRE(r.verdict == TriVerdict::Fails);
    CHECK(r.x == 0);
    CHECK(r.x_alt == 1);
  }
  SECTION("stochastic channels only get sampled verdicts") {
    Rng rng(23);
    BcStateChannel bc = random_bc(2, 2, 2, 2, rng);
    Condition12Result r = check_condition_12(bc);
    CHECK((r.verdict == TriVerdict::Fails || r.verdict == TriVerdict::SampledOnly));
  }
  SECTION("deterministic verdict matches a brute-force grid oracle") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
      int nx = 2 + trial % 2;
      std::vector<int> f1(static_cast<std::size_t>(nx) * 2), f2(f1.size());
      for (auto& v : f1) v = rng.uniform_int(2);
      for (auto& v : f2) v = rng.uniform_int(2);
      BcStateChannel bc = det_bc(nx, 2, 2, 2, f1, f2, Pmf::uniform(2));
      bool violated = false;
      detail::for_each_input_pdf(2, nx, 16, 0, 1, [&](const CondPmf& pxs) {
        if (!violated && bc_cross_output_mi(bc, pxs) > 1e-9) violated = true;
      });
      Condition12Result r = check_condition_12(bc);
      if (r.verdict == TriVerdict::Holds) CHECK_FALSE(violated);
      if (violated) CHECK(r.verdict == TriVerdict::Fails);
      if (r.verdict == TriVerdict::Fails) CHECK(violated);
    }
  }
}
