#include <doctest.h>

#include <cmath>

#include "jointcs/experiments.hpp"

using namespace jointcs;

TEST_CASE("algorithm names round-trip") {
  for (Algorithm a : kAllAlgorithms) {
    const auto back = algorithm_from_name(algorithm_name(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK(algorithm_name(Algorithm::SompBDSupp) == "somp_bd_supp");
  CHECK_FALSE(algorithm_from_name("omp").has_value());
  CHECK_FALSE(algorithm_from_name("").has_value());
}

TEST_CASE("recovery_error sums per-sensor distances") {
  Matrix x(2, 2), est(2, 2);
  x << 1, 0, 0, 0;
  est << 1, 3, 0, 4;
  CHECK(recovery_error(est, x) == doctest::Approx(5.0));  // 0 + sqrt(9+16)
  CHECK_THROWS_AS(recovery_error(Matrix::Zero(3, 2), x), DimensionError);
}

TEST_CASE("success_full is a threshold on the summed error") {
  const Matrix x = Matrix::Zero(3, 1);
  Matrix est = Matrix::Zero(3, 1);
  est(0, 0) = std::ldexp(1.0, -17);  // ~7.6e-6, under the threshold
  CHECK(success_full(est, x));
  est(0, 0) = std::ldexp(1.0, -16);  // ~1.5e-5, over it
  CHECK_FALSE(success_full(est, x));
  CHECK(success_full(x, x));
}

TEST_CASE("success_support tolerates extra detections but not misses") {
  const SupportSet truth({2, 5});
  CHECK(success_support(truth, SupportSet({2, 5})));
  CHECK(success_support(truth, SupportSet({1, 2, 5})));
  CHECK_FALSE(success_support(truth, SupportSet({2, 4})));
  CHECK_FALSE(success_support(truth, SupportSet{}));
  CHECK(success_support(SupportSet{}, SupportSet{}));
}

TEST_CASE("TrialOutcome::success maps algorithms to their flags") {
  TrialOutcome o;
  o.full_ac = true;
  o.supp_bd = true;
  CHECK(o.success(Algorithm::SompAC));
  CHECK_FALSE(o.success(Algorithm::SompBC));
  CHECK_FALSE(o.success(Algorithm::SompBD));
  CHECK(o.success(Algorithm::SompBDSupp));
}

TEST_CASE("run_trial is deterministic in all its coordinates") {
  const Seed master(99);
  const ProblemDims dims{30, 20, 3, 4};
  const TrialOutcome a = run_trial(master, SignalType::TypeII, dims, 7);
  const TrialOutcome b = run_trial(master, SignalType::TypeII, dims, 7);
  CHECK(a.err_ac == b.err_ac);
  CHECK(a.err_bc == b.err_bc);
  CHECK(a.err_bd == b.err_bd);
  CHECK(a.full_ac == b.full_ac);
  CHECK(a.supp_bd == b.supp_bd);

  // flags are consistent with the reported errors
  CHECK(a.full_ac == (a.err_ac <= kFullSuccessThreshold));
  CHECK(a.full_bd == (a.err_bd <= kFullSuccessThreshold));
}

TEST_CASE("run_trial succeeds reliably in an easy regime") {
  const Seed master(123);
  const ProblemDims dims{30, 25, 3, 3};
  int full = 0;
  for (int t = 0; t < 20; ++t)
    full += run_trial(master, SignalType::TypeIV, dims, t).full_bc;
  CHECK(full >= 18);
}

TEST_CASE("sweep validates its configuration") {
  SweepConfig config;
  config.m_grid = {5};
  config.k_grid = {2};
  config.n = 10;
  config.l = 1;
  config.trials = 1;
  CHECK_NOTHROW(sweep(config));

  SweepConfig bad = config;
  bad.k_grid = {11};
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
  bad = config;
  bad.m_grid.clear();
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
  bad = config;
  bad.trials = -1;
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
}

namespace {

SweepConfig small_sweep() {
  SweepConfig config;
  config.n = 24;
  config.l = 2;
  config.type = SignalType::TypeIII;
  config.m_grid = {4, 8, 16};
  config.k_grid = {2, 4};
  config.trials = 12;
  config.master_seed = 4242;
  config.threads = 1;
  return config;
}

}  // namespace

TEST_CASE("sweep fills every cell in grid order") {
  const SweepResult r = sweep(small_sweep());
  REQUIRE(r.cells.size() == 6);
  CHECK(r.cells[0].m == 4);
  CHECK(r.cells[0].k == 2);
  CHECK(r.cells[1].m == 4);
  CHECK(r.cells[1].k == 4);
  CHECK(r.cells[5].m == 16);
  CHECK(r.cells[5].k == 4);
  for (const CellCounts& c : r.cells) {
    CHECK(c.trials == 12);
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(c.successes[a] >= 0);
      CHECK(c.successes[a] <= 12);
    }
  }
  // the easiest cell beats the hardest for every full-recovery variant
  const CellCounts& easy = r.cell(16, 2);
  const CellCounts& hard = r.cell(4, 4);
  CHECK(easy.successes[0] >= hard.successes[0]);
  CHECK_THROWS_AS(r.cell(5, 2), std::out_of_range);
}

TEST_CASE("sweep counts are independent of the thread count") {
  SweepConfig config = small_sweep();
  const SweepResult one = sweep(config);
  config.threads = 4;
  const SweepResult four = sweep(config);
  REQUIRE(one.cells.size() == four.cells.size());
  for (std::size_t i = 0; i < one.cells.size(); ++i)
    CHECK(one.cells[i].successes == four.cells[i].successes);
}

TEST_CASE("sweep with zero trials reports empty cells and NaN probability") {
  SweepConfig config = small_sweep();
  config.trials = 0;
  const SweepResult r = sweep(config);
  REQUIRE(r.cells.size() == 6);
  CHECK(r.cells[0].trials == 0);
  CHECK(std::isnan(r.cells[0].probability(Algorithm::SompAC)));
}

TEST_CASE("cell probability is the success fraction") {
  CellCounts c{10, 2, 8, {2, 4, 6, 8}};
  CHECK(c.probability(Algorithm::SompAC) == doctest::Approx(0.25));
  CHECK(c.probability(Algorithm::SompBDSupp) == doctest::Approx(1.0));
}

TEST_CASE("phase_transition scans m upward per k") {
  SweepResult r;
  r.config.n = 20;
  r.config.m_grid = {4, 8, 12};
  r.config.k_grid = {2, 3};
  r.config.trials = 10;
  // k=2 crosses 50% at m=8; k=3 never does
  r.cells = {
      CellCounts{4, 2, 10, {1, 0, 0, 0}}, CellCounts{4, 3, 10, {0, 0, 0, 0}},
      CellCounts{8, 2, 10, {5, 0, 0, 0}}, CellCounts{8, 3, 10, {2, 0, 0, 0}},
      CellCounts{12, 2, 10, {9, 0, 0, 0}}, CellCounts{12, 3, 10, {4, 0, 0, 0}},
  };
  const auto points = phase_transition(r, Algorithm::SompAC, 0.5);
  REQUIRE(points.size() == 2);
  CHECK(points[0].k == 2);
  REQUIRE(points[0].m_min.has_value());
  CHECK(*points[0].m_min == 8);
  CHECK(points[1].k == 3);
  CHECK_FALSE(points[1].m_min.has_value());

  // a stricter level moves the crossing up
  const auto strict = phase_transition(r, Algorithm::SompAC, 0.9);
  REQUIRE(strict[0].m_min.has_value());
  CHECK(*strict[0].m_min == 12);

  CHECK_THROWS_AS(phase_transition(r, Algorithm::SompAC, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(phase_transition(r, Algorithm::SompAC, 1.5),
                  std::invalid_argument);
}
