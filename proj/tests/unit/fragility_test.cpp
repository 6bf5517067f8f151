#include "bfi/fragility.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bfi/case_studies.hpp"
#include "oracles.hpp"

using bfi::AnalysisConfig;
using bfi::GammaParams;
using bfi::Observation;
using bfi::SurvivalDataset;

namespace {

AnalysisConfig config(double t0, double p0 = 0.7, GammaParams prior = {0.5, 0.5}) {
  AnalysisConfig cfg;
  cfg.prior = prior;
  cfg.t0 = t0;
  cfg.p0 = p0;
  return cfg;
}

std::optional<std::size_t> oracle_fi(const SurvivalDataset& data, const AnalysisConfig& cfg) {
  const auto post = bfi::posterior_update(cfg.prior, data);
  return oracle::exhaustive_fi([](double a, double x) { return bfi::reg_lower_inc_gamma(a, x); },
                               post.shape(), post.rate(), cfg.t0, cfg.p0, data.num_censored());
}

// Probability trajectory is non-increasing, and strictly decreasing wherever
// it is not saturated at 1 in double precision.
void expect_decreasing(const std::vector<bfi::TrajectoryPoint>& traj) {
  for (std::size_t k = 1; k < traj.size(); ++k) {
    EXPECT_EQ(traj[k].k, k);
    EXPECT_LE(traj[k].prob, traj[k - 1].prob);
    if (traj[k - 1].prob < 1.0 - 1e-15 && traj[k - 1].prob > 0.0) EXPECT_LT(traj[k].prob, traj[k - 1].prob);
  }
}

}  // namespace

TEST(ShortestCensoredOrder, SortsByTimeThenInputIndex) {
  const SurvivalDataset data({{5, false}, {2, true}, {3, false}, {3, false}, {1, false}});
  EXPECT_EQ(bfi::shortest_censored_order(data), (std::vector<std::size_t>{4, 2, 3, 0}));
}

TEST(ReclassifyAsEvents, KeepsTimesAndValidates) {
  const SurvivalDataset data({{5, false}, {2, true}, {3, false}});
  const std::vector<std::size_t> idx{2};
  const auto out = bfi::reclassify_as_events(data, idx);
  EXPECT_EQ(out[2], Observation(3, true));
  EXPECT_EQ(out.total_time(), data.total_time());
  const std::vector<std::size_t> event_idx{1}, bad_idx{9};
  EXPECT_THROW(bfi::reclassify_as_events(data, event_idx), bfi::DomainError);
  EXPECT_THROW(bfi::reclassify_as_events(data, bad_idx), bfi::DomainError);
}

TEST(FragilityIndex, NoCensoredObservationsIsNotAttained) {
  const SurvivalDataset data({{30, true}, {40, true}});
  const auto r = bfi::fragility_index(data, config(1.0));
  EXPECT_FALSE(r.attained());
  EXPECT_FALSE(r.fq);
  ASSERT_EQ(r.trajectory.size(), 1u);
  EXPECT_EQ(r.trajectory[0].prob, r.initial_prob);
  EXPECT_GT(r.initial_prob, 0.7);
}

TEST(FragilityIndex, NotApplicableWhenBaselineDoesNotExceedP0) {
  const SurvivalDataset data({{1, true}, {2, true}, {3, false}});
  try {
    bfi::fragility_index(data, config(50.0));
    FAIL() << "expected NotFragileApplicable";
  } catch (const bfi::NotFragileApplicable& e) {
    EXPECT_LE(e.initial_prob(), 0.7);
    EXPECT_EQ(e.p0(), 0.7);
  }
}

TEST(FragilityIndex, BoundaryEqualityDoesNotStopOrStart) {
  // Pick p0 exactly equal to the k = 0 probability: not applicable.
  const SurvivalDataset data({{10, true}, {12, false}, {15, false}, {20, false}});
  const auto cfg = config(3.0);
  const double p_initial = bfi::posterior_prob_median_exceeds(bfi::posterior_update(cfg.prior, data), cfg.t0);
  EXPECT_THROW(bfi::fragility_index(data, config(3.0, p_initial)), bfi::NotFragileApplicable);

  // p0 exactly equal to the k = 1 probability: k = 1 does not stop the search.
  const auto traj = bfi::fi_trajectory(data, cfg, 3);
  const auto r = bfi::fragility_index(data, config(3.0, traj[1].prob));
  ASSERT_TRUE(r.attained());
  EXPECT_EQ(*r.fi, 2u);
}

TEST(FragilityIndex, FirstCrossingAndQuotient) {
  std::vector<Observation> obs;
  for (int i = 0; i < 10; ++i) obs.emplace_back(8.0 + i, i < 4);
  const SurvivalDataset data(obs);
  const auto cfg = config(12.0);
  const auto r = bfi::fragility_index(data, cfg);
  ASSERT_TRUE(r.attained());
  const auto k = *r.fi;
  EXPECT_LT(r.trajectory[k].prob, cfg.p0);
  EXPECT_GE(r.trajectory[k - 1].prob, cfg.p0);
  EXPECT_EQ(r.trajectory.size(), k + 1);
  EXPECT_EQ(*r.fq, bfi::fragility_quotient(static_cast<std::int64_t>(k), 10));
  EXPECT_EQ(r.flipped.size(), k);
  // Shortest censored first: indices 4, 5, ... in this dataset.
  for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(r.flipped[i], 4 + i);
  EXPECT_EQ(r.fi, oracle_fi(data, cfg));
}

TEST(FragilityIndex, AgreesWithExhaustiveOracleOnRandomData) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> frac(0.0, 0.8), t0_dist(0.5, 15.0);
  int attained = 0, not_attained = 0, not_applicable = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const auto data = oracle::random_dataset(rng, 10, frac(rng));
    const auto cfg = config(t0_dist(rng));
    const auto expected = oracle_fi(data, cfg);
    if (expected && *expected == 0) {
      EXPECT_THROW(bfi::fragility_index(data, cfg), bfi::NotFragileApplicable);
      ++not_applicable;
      continue;
    }
    const auto r = bfi::fragility_index(data, cfg);
    EXPECT_EQ(r.fi, expected);
    expect_decreasing(r.trajectory);
    r.attained() ? ++attained : ++not_attained;
  }
  // The sample should exercise every branch.
  EXPECT_GT(attained, 10);
  EXPECT_GT(not_attained, 10);
  EXPECT_GT(not_applicable, 10);
}

TEST(FragilityIndex, FlipOrderDoesNotMatter) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const auto data = oracle::random_dataset(rng, 5 + rep % 30, 0.5);
    const auto cfg = config(2.0 + rep % 5);
    auto literal = bfi::shortest_censored_order(data);
    auto shuffled = literal;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t k = 0; k <= literal.size(); ++k) {
      const auto a = bfi::reclassify_as_events(data, std::span(literal).first(k));
      const auto b = bfi::reclassify_as_events(data, std::span(shuffled).first(k));
      EXPECT_EQ(bfi::posterior_prob_median_exceeds(bfi::posterior_update(cfg.prior, a), cfg.t0),
                bfi::posterior_prob_median_exceeds(bfi::posterior_update(cfg.prior, b), cfg.t0));
    }
  }
}

TEST(FragilityQuotient, Examples) {
  EXPECT_EQ(bfi::fragility_quotient(5, 30), (bfi::Quotient{1, 6}));
  EXPECT_NEAR(bfi::fragility_quotient(5, 30).value(), 0.1667, 5e-5);
  EXPECT_EQ(bfi::fragility_quotient(6, 28), (bfi::Quotient{3, 14}));
  EXPECT_NEAR(bfi::fragility_quotient(6, 28).value(), 0.2143, 5e-5);
  EXPECT_EQ(bfi::fragility_quotient(1, 1), (bfi::Quotient{1, 1}));
  EXPECT_THROW(bfi::fragility_quotient(0, 5), bfi::DomainError);
  EXPECT_THROW(bfi::fragility_quotient(6, 5), bfi::DomainError);
  EXPECT_THROW(bfi::fragility_quotient(1, 0), bfi::DomainError);
}

TEST(FiTrajectory, Examples) {
  const SurvivalDataset data({{0.25, true}, {0.5, false}});  // total time 0.75
  const auto cfg = config(std::numbers::ln2, 0.5, GammaParams(0.5, 0.25));  // posterior (1.5, 1)

  const auto zero = bfi::fi_trajectory(data, cfg, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].prob, bfi::posterior_prob_median_exceeds(GammaParams(1.5, 1.0), std::numbers::ln2));

  // Posterior (1, 1) with one censored observation: P(1, 1), then P(2, 1) = 1 - 2/e.
  const SurvivalDataset one({{0.5, false}});
  const auto traj = bfi::fi_trajectory(one, config(std::numbers::ln2, 0.5, GammaParams(1.0, 0.5)), 1);
  ASSERT_EQ(traj.size(), 2u);
  EXPECT_NEAR(traj[0].prob, 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(traj[1].prob, 1.0 - 2.0 * std::exp(-1.0), 1e-15);

  EXPECT_THROW(bfi::fi_trajectory(one, config(1.0), 2), std::out_of_range);
}

TEST(Calibrate, Examples) {
  EXPECT_NEAR(bfi::calibrate(1.0, 1.0 - std::exp(-1.0), std::numbers::ln2), 1.0, 1e-10);
  EXPECT_NEAR(bfi::calibrate(0.5, oracle::erf_series(std::sqrt(0.5)), std::numbers::ln2), 0.5, 1e-10);

  for (const auto& [shape, target, t0] : {std::tuple{22.5, 0.935, 7.0}, {20.5, 0.958, 3.5}, {31.5, 0.948, 15.0},
                                          {0.5, 1e-6, 1.0}, {3.0, 0.999999, 100.0}}) {
    const double rate = bfi::calibrate(shape, target, t0);
    EXPECT_NEAR(bfi::reg_lower_inc_gamma(shape, rate * std::numbers::ln2 / t0), target, 1e-9);
    EXPECT_EQ(rate, bfi::calibrate(shape, target, t0));
  }
  EXPECT_THROW(bfi::calibrate(1.0, 0.0, 1.0), bfi::DomainError);
  EXPECT_THROW(bfi::calibrate(1.0, 1.0, 1.0), bfi::DomainError);
  EXPECT_THROW(bfi::calibrate(1.0, 0.5, -1.0), bfi::DomainError);
}

TEST(CaseStudies, ReconstructionPreservesSufficientStatistics) {
  for (const auto& study : bfi::published_case_studies()) {
    const auto rep = bfi::reproduce_case(study, AnalysisConfig{});
    EXPECT_EQ(rep.dataset.num_events(), study.events);
    EXPECT_EQ(rep.dataset.num_censored(), study.censored);
    EXPECT_NEAR(rep.result.initial_prob, study.reported_prob, 1e-9) << study.name;
    EXPECT_NEAR(rep.result.posterior.rate(), rep.calibrated_rate, 1e-9 * rep.calibrated_rate);
    // The library's search agrees with the closed-form oracle on these inputs.
    EXPECT_EQ(rep.result.fi, oracle_fi(rep.dataset, rep.config)) << study.name;
  }
}

TEST(SensitivityScan, SinglePointGridMatchesDirectCall) {
  const SurvivalDataset data({{3, true}, {9, false}, {12, false}, {4, true}, {20, false}});
  const auto base = config(2.0);
  const auto grid = bfi::sensitivity_scan(data, base, {});
  ASSERT_EQ(grid.cells.size(), 1u);
  const auto direct = bfi::fragility_index(data, base);
  ASSERT_TRUE(grid.cells[0].result);
  EXPECT_EQ(grid.cells[0].result->fi, direct.fi);
  EXPECT_EQ(grid.cells[0].result->trajectory, direct.trajectory);
}

TEST(SensitivityScan, P0AxisWeaklyDecreasesFi) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const auto data = oracle::random_dataset(rng, 30, 0.5);
    const auto base = config(1.0);
    const auto grid = bfi::sensitivity_scan(data, base, {.p0 = {0.6, 0.7, 0.8}});
    ASSERT_EQ(grid.cells.size(), 3u);
    std::optional<std::size_t> prev;
    bool prev_applicable = false;
    for (const auto& cell : grid.cells) {
      EXPECT_EQ(oracle_fi(data, cell.config).value_or(999) == 0, cell.status == bfi::CellStatus::kNotApplicable);
      if (cell.result && prev_applicable) {
        const auto cur = cell.result->fi.value_or(1000);
        EXPECT_LE(cur, prev.value_or(1000));
      }
      prev_applicable = cell.result.has_value();
      if (cell.result) prev = cell.result->fi;
    }
  }
}

TEST(SensitivityScan, T0AxisDecreasesInitialProbability) {
  const SurvivalDataset data({{3, true}, {9, false}, {12, false}, {4, true}, {20, false}, {7, true}});
  const auto grid = bfi::sensitivity_scan(data, config(1.0), {.t0 = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}});
  for (std::size_t i = 1; i < grid.cells.size(); ++i) {
    EXPECT_LT(grid.cells[i].initial_prob, grid.cells[i - 1].initial_prob);
    EXPECT_EQ(grid.cells[i].config.t0, grid.axes.t0[i]);
  }
}

TEST(SensitivityScan, CellsMatchCoordinatesAndThreadCountIsIrrelevant) {
  std::mt19937_64 rng(17);
  const auto data = oracle::random_dataset(rng, 40, 0.4);
  const bfi::SensitivityAxes axes{{0.5, 1.0}, {0.5, 2.0}, {0.5, 1.0, 3.0}, {0.6, 0.8}};
  const auto serial = bfi::sensitivity_scan(data, config(1.0), axes, 1);
  const auto parallel = bfi::sensitivity_scan(data, config(1.0), axes, 4);
  ASSERT_EQ(serial.cells.size(), 24u);
  std::size_t i = 0;
  for (double s : axes.prior_shape)
    for (double r : axes.prior_rate)
      for (double t : axes.t0)
        for (double p : axes.p0) {
          const auto& c = serial.cells[i];
          EXPECT_EQ(c.config.prior, GammaParams(s, r));
          EXPECT_EQ(c.config.t0, t);
          EXPECT_EQ(c.config.p0, p);
          EXPECT_EQ(c.status, parallel.cells[i].status);
          EXPECT_EQ(c.result.has_value(), parallel.cells[i].result.has_value());
          if (c.result) EXPECT_EQ(c.result->trajectory, parallel.cells[i].result->trajectory);
          ++i;
        }
}

TEST(SensitivityScan, RecordsNumericalFailuresPerCell) {
  const SurvivalDataset data({{3, true}, {9, false}});
  auto base = config(1.0);
  base.specfun.max_iterations = 50;
  // A huge prior shape overflows the 50-iteration budget in that cell only.
  const auto grid = bfi::sensitivity_scan(data, base, {.prior_shape = {0.5, 5000.0}, .prior_rate = {0.5, 5000.0}});
  ASSERT_EQ(grid.cells.size(), 4u);
  EXPECT_NE(grid.cells[0].status, bfi::CellStatus::kFailed);
  EXPECT_EQ(grid.cells[3].status, bfi::CellStatus::kFailed);
  EXPECT_FALSE(grid.cells[3].message.empty());
}
