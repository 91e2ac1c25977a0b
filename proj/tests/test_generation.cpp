#include <doctest.h>

#include <set>

#include "jointcs/generation.hpp"

using namespace jointcs;

TEST_CASE("Seed derivation is deterministic and path sensitive") {
  const Seed a(42), b(42), c(43);
  CHECK(a.value() == b.value());
  CHECK(a.value() != c.value());
  CHECK(a.derived(1).value() == b.derived(1).value());
  CHECK(a.derived(1).value() != a.derived(2).value());
  CHECK(a.derived({1, 2}).value() == a.derived(1).derived(2).value());
  CHECK(a.derived({1, 2}).value() != a.derived({2, 1}).value());

  auto e1 = a.engine(), e2 = b.engine();
  for (int i = 0; i < 16; ++i) CHECK(e1() == e2());
}

TEST_CASE("draw_support yields a sorted k-subset of the right range") {
  const Seed seed(7);
  const SupportSet s = draw_support(50, 10, seed);
  CHECK(s.size() == 10);
  CHECK(s.max_index() < 50);
  CHECK(s[0] >= 0);
  CHECK(draw_support(50, 10, seed) == s);
  CHECK(draw_support(50, 50, seed).size() == 50);

  CHECK_THROWS_AS(draw_support(50, 0, seed), std::invalid_argument);
  CHECK_THROWS_AS(draw_support(5, 6, seed), std::invalid_argument);
}

TEST_CASE("draw_support reaches every subset of a small universe") {
  std::set<std::vector<Index>> seen;
  for (int trial = 0; trial < 400; ++trial)
    seen.insert(draw_support(5, 2, Seed(1000 + trial)).indices());
  CHECK(seen.size() == 10);  // C(5,2)
}

TEST_CASE("gen_signals places entries only on the support") {
  const ProblemDims dims{20, 5, 4, 6};
  const SupportSet omega = draw_support(20, 6, Seed(3));
  for (SignalType type : {SignalType::TypeI, SignalType::TypeII,
                          SignalType::TypeIII, SignalType::TypeIV}) {
    const SignalEnsemble s = gen_signals(type, dims, omega, Seed(5));
    REQUIRE(s.x.rows() == 20);
    REQUIRE(s.x.cols() == 4);
    for (Index r = 0; r < 20; ++r)
      for (Index c = 0; c < 4; ++c)
        if (!omega.contains(r)) CHECK(s.x(r, c) == 0.0);
  }
}

TEST_CASE("gen_signals distribution shapes") {
  const ProblemDims dims{10, 5, 2, 10};
  const SupportSet omega = draw_support(10, 10, Seed(1));

  const SignalEnsemble two = gen_signals(SignalType::TypeII, dims, omega, Seed(2));
  CHECK((two.x.array() >= 0.0).all());

  const SignalEnsemble four = gen_signals(SignalType::TypeIV, dims, omega, Seed(2));
  CHECK((four.x.array() == 1.0).all());
}

TEST_CASE("gen_signals moments match the declared distributions") {
  // One long support column per type; loose 3-sigma-ish bands.
  const Index n = 10000;
  const ProblemDims dims{n, 1, 1, n};
  const SupportSet omega = draw_support(n, n, Seed(1));

  const SignalEnsemble one = gen_signals(SignalType::TypeI, dims, omega, Seed(11));
  const double mean1 = one.x.col(0).mean();
  const double var1 = (one.x.col(0).array() - mean1).square().mean();
  CHECK(std::abs(mean1) < 0.04);
  CHECK(std::abs(var1 - 1.0) < 0.06);

  const SignalEnsemble three =
      gen_signals(SignalType::TypeIII, dims, omega, Seed(12));
  const double mean3 = three.x.col(0).mean();
  const double var3 = (three.x.col(0).array() - mean3).square().mean();
  CHECK(std::abs(mean3 - 1.0) < 0.02);
  CHECK(std::abs(var3 - 0.25) < 0.02);

  // |N(0,1)| has mean sqrt(2/pi)
  const SignalEnsemble two = gen_signals(SignalType::TypeII, dims, omega, Seed(13));
  CHECK(std::abs(two.x.col(0).mean() - std::sqrt(2.0 / M_PI)) < 0.03);
}

TEST_CASE("gen_signals validates the support") {
  const ProblemDims dims{10, 5, 2, 3};
  CHECK_THROWS_AS(gen_signals(SignalType::TypeI, dims, SupportSet({1, 2}), Seed(0)),
                  SparsityError);
  CHECK_THROWS_AS(
      gen_signals(SignalType::TypeI, dims, SupportSet({1, 2, 10}), Seed(0)),
      SparsityError);
}

TEST_CASE("draw_sensing yields per-sensor standard normal matrices") {
  const ProblemDims dims{100, 100, 2, 1};
  const SensingEnsemble e = draw_sensing(dims, Seed(9));
  REQUIRE(e.l() == 2);
  REQUIRE(e.m() == 100);
  REQUIRE(e.n() == 100);
  CHECK_FALSE(e.phis[0].isApprox(e.phis[1]));

  const double mean = e.phis[0].mean();
  const double var = (e.phis[0].array() - mean).square().mean();
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("adding sensors extends the ensemble without disturbing it") {
  const ProblemDims small{30, 8, 2, 4};
  const ProblemDims large{30, 8, 5, 4};
  const Seed seed(77);

  const SensingEnsemble e2 = draw_sensing(small, seed);
  const SensingEnsemble e5 = draw_sensing(large, seed);
  CHECK(e5.phis[0] == e2.phis[0]);
  CHECK(e5.phis[1] == e2.phis[1]);

  const SupportSet omega = draw_support(30, 4, seed);
  const SignalEnsemble s2 = gen_signals(SignalType::TypeI, small, omega, seed);
  const SignalEnsemble s5 = gen_signals(SignalType::TypeI, large, omega, seed);
  CHECK(s5.x.leftCols(2) == s2.x);
}

TEST_CASE("sense applies each sensor matrix to its own column") {
  Matrix p1(2, 3), p2(2, 3);
  p1 << 1, 0, 0, 0, 1, 0;
  p2 << 0, 0, 1, 1, 1, 1;
  Matrix x(3, 2);
  x << 1, 4, 2, 5, 3, 6;
  const MeasurementEnsemble ys =
      sense(SensingEnsemble{{p1, p2}}, SignalEnsemble{x, SupportSet({0, 1, 2})});
  REQUIRE(ys.m() == 2);
  REQUIRE(ys.l() == 2);
  CHECK(ys.ys(0, 0) == 1);
  CHECK(ys.ys(1, 0) == 2);
  CHECK(ys.ys(0, 1) == 6);
  CHECK(ys.ys(1, 1) == 15);

  CHECK_THROWS_AS(sense(SensingEnsemble{{p1}}, SignalEnsemble{x, SupportSet({0})}),
                  DimensionError);
  CHECK_THROWS_AS(sense(SensingEnsemble{{p1, p2}},
                        SignalEnsemble{Matrix::Zero(4, 2), SupportSet({0})}),
                  DimensionError);
}
