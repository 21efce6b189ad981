#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltad/driver.hpp"
#include "ltad/simulation.hpp"
#include "ltad/types.hpp"

namespace {

ltad::ScenarioSpec strong_cell(int n, int p, double fraction, double coverage,
                               std::uint64_t seed, int reps) {
  ltad::ScenarioSpec spec;
  spec.n = n;
  spec.p = p;
  spec.contamination_fraction = fraction;
  spec.kind = fraction > 0 ? ltad::Contamination::Strong : ltad::Contamination::None;
  spec.coverage_fraction = coverage;
  spec.seed = seed;
  spec.replications = reps;
  return spec;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("scenario validation") {
  ltad::ScenarioSpec ok = strong_cell(50, 2, 0.2, 0.5, 1, 10);
  CHECK_NOTHROW(ok.validate());

  ltad::ScenarioSpec bad = ok;
  bad.contamination_fraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.contamination_fraction = 0.0;  // fraction zero requires kind None
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.kind = ltad::Contamination::None;  // positive fraction requires a law
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.correlation_rho = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.coverage_fraction = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.replications = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.contamination_fraction = 0.999;  // would leave no clean rows
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("contaminated row counts round up") {
  CHECK(strong_cell(50, 1, 0.2, 0.5, 1, 1).contaminated_rows() == 10);
  CHECK(strong_cell(50, 1, 0.21, 0.5, 1, 1).contaminated_rows() == 11);
  CHECK(strong_cell(50, 1, 0.001, 0.5, 1, 1).contaminated_rows() == 1);
  CHECK(strong_cell(50, 1, 0.0, 0.5, 1, 1).contaminated_rows() == 0);
  CHECK(strong_cell(3, 1, 0.4, 0.5, 1, 1).contaminated_rows() == 2);
}

TEST_CASE("coverage rounds to the nearest row count") {
  CHECK(strong_cell(50, 1, 0.0, 0.5, 1, 1).coverage_h() == 25);
  CHECK(strong_cell(50, 1, 0.0, 0.2, 1, 1).coverage_h() == 10);
  CHECK(strong_cell(5, 1, 0.0, 0.5, 1, 1).coverage_h() == 3);  // round half away from zero
  CHECK(strong_cell(50, 1, 0.0, 0.001, 1, 1).coverage_h() == 1);
  CHECK(strong_cell(50, 1, 0.0, 1.0, 1, 1).coverage_h() == 50);
}

TEST_CASE("clean generation matches the standard normal") {
  const ltad::ScenarioSpec spec = strong_cell(200, 2, 0.0, 0.5, 11, 1);
  double sum = 0.0, sumsq = 0.0;
  int count = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const ltad::GeneratedDataset d = ltad::generate_dataset(spec, rep);
    CHECK(d.contaminated_count == 0);
    sum += d.X.values().sum();
    sumsq += d.X.values().array().square().sum();
    count += spec.n * spec.p;
  }
  // 20000 pooled draws: the sample mean has standard error ~0.007
  CHECK(std::abs(sum / count) <= 0.025);
  CHECK(sumsq / count == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("strong contamination replaces exactly the leading rows") {
  const ltad::ScenarioSpec spec = strong_cell(50, 3, 0.4, 0.5, 3, 1);
  double shifted = 0.0;
  int shifted_count = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const ltad::GeneratedDataset d = ltad::generate_dataset(spec, rep);
    REQUIRE(d.contaminated_count == 20);
    shifted += d.X.values().topRows(20).sum();
    shifted_count += 20 * 3;
    // clean block stays near zero: a 3.3 shift would be conspicuous
    CHECK(std::abs(d.X.values().bottomRows(30).mean()) <= 0.5);
  }
  CHECK(shifted / shifted_count == doctest::Approx(3.3).epsilon(0.02));
}

TEST_CASE("intermediate contamination shifts by three quarters") {
  const ltad::ScenarioSpec spec = [&] {
    ltad::ScenarioSpec s = strong_cell(100, 2, 0.4, 0.5, 5, 1);
    s.kind = ltad::Contamination::Intermediate;
    return s;
  }();
  double shifted = 0.0;
  int count = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const ltad::GeneratedDataset d = ltad::generate_dataset(spec, rep);
    shifted += d.X.values().topRows(40).sum();
    count += 40 * 2;
  }
  CHECK(shifted / count == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("constant correlation shapes the clean rows") {
  ltad::ScenarioSpec spec = strong_cell(400, 3, 0.0, 0.5, 7, 1);
  spec.correlation_rho = 0.7;
  Eigen::MatrixXd pooled(400 * 10, 3);
  for (int rep = 0; rep < 10; ++rep) {
    pooled.middleRows(400 * rep, 400) = ltad::generate_dataset(spec, rep).X.values();
  }
  CHECK(pearson(pooled.col(0), pooled.col(1)) == doctest::Approx(0.7).epsilon(0.03));
  CHECK(pearson(pooled.col(0), pooled.col(2)) == doctest::Approx(0.7).epsilon(0.03));
  // 4000 pooled rows: the column mean has standard error ~0.016
  CHECK(pooled.col(1).mean() == doctest::Approx(0.0).scale(1).epsilon(0.06));
}

TEST_CASE("generation is deterministic and independent of coverage") {
  ltad::ScenarioSpec a = strong_cell(30, 2, 0.2, 0.5, 17, 1);
  ltad::ScenarioSpec b = strong_cell(30, 2, 0.2, 1.0, 17, 1);  // only coverage differs
  const Eigen::MatrixXd xa = ltad::generate_dataset(a, 4).X.values();
  const Eigen::MatrixXd xb = ltad::generate_dataset(b, 4).X.values();
  CHECK((xa - xb).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((xa - ltad::generate_dataset(a, 4).X.values()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((xa - ltad::generate_dataset(a, 5).X.values()).lpNorm<Eigen::Infinity>() != 0.0);
}

TEST_CASE("clean scenario recovers the origin") {
  const ltad::ScenarioSpec spec = strong_cell(50, 1, 0.0, 0.5, 23, 40);
  const ltad::MseReport rep = ltad::run_scenario(spec, {"lp-ltad"}, 2);
  REQUIRE(rep.per_estimator.count("lp-ltad") == 1);
  double mean_abs = 0.0;
  for (double s : rep.squared_norms.at("lp-ltad")) mean_abs += std::sqrt(s);
  mean_abs /= rep.replications;
  CHECK(mean_abs <= 0.25);  // per-replication scatter stays at sampling scale
  CHECK(rep.per_estimator.at("lp-ltad") <= 0.02);  // the averaged estimate is unbiased
}

TEST_CASE("heavy contamination separates the estimators") {
  ltad::ScenarioSpec spec = strong_cell(50, 3, 0.4, 0.2, 29, 30);
  const ltad::MseReport rep =
      ltad::run_scenario(spec, {"lp-ltad", "mean"}, 2);
  const double lp = rep.per_estimator.at("lp-ltad");
  const double mean = rep.per_estimator.at("mean");
  CHECK(lp <= 0.06);
  // the mean absorbs the 3.3 shift on 40 percent of rows in every coordinate
  CHECK(mean >= 10.0 * lp);
  CHECK(mean == doctest::Approx(3.0 * 1.32 * 1.32).epsilon(0.25));
  CHECK((rep.mean_estimate.at("mean") - Eigen::VectorXd::Constant(3, 1.32)).norm() <= 0.2);
}

TEST_CASE("mse report is reproducible and recomputes from the averaged estimate") {
  const ltad::ScenarioSpec spec = strong_cell(40, 2, 0.2, 0.5, 31, 12);
  const ltad::MseReport a = ltad::run_scenario(spec, {"lp-ltad", "heuristic"}, 3);
  const ltad::MseReport b = ltad::run_scenario(spec, {"lp-ltad", "heuristic"}, 1);
  for (const auto& [name, mse] : a.per_estimator) {
    CHECK(mse == b.per_estimator.at(name));  // worker count cannot move the result
    CHECK(mse == a.mean_estimate.at(name).squaredNorm());
    CHECK((a.mean_estimate.at(name) - b.mean_estimate.at(name)).lpNorm<Eigen::Infinity>() ==
          0.0);
    const auto& norms = a.squared_norms.at(name);
    REQUIRE(static_cast<int>(norms.size()) == spec.replications);
    CHECK(norms == b.squared_norms.at(name));
    // every replication actually produced an estimate of sampling size
    for (double s : norms) CHECK(s <= 25.0);
  }
}

TEST_CASE("oracle estimator is skipped when enumeration is too large") {
  const ltad::ScenarioSpec spec = strong_cell(40, 1, 0.2, 0.5, 37, 2);
  const ltad::MseReport rep = ltad::run_scenario(spec, {"oracle", "mean"}, 1);
  CHECK(rep.per_estimator.count("oracle") == 0);
  CHECK(std::find(rep.skipped.begin(), rep.skipped.end(), "oracle") != rep.skipped.end());
  CHECK(rep.per_estimator.count("mean") == 1);

  const ltad::ScenarioSpec small = strong_cell(12, 1, 0.2, 0.5, 37, 2);
  const ltad::MseReport ok = ltad::run_scenario(small, {"oracle"}, 1);
  CHECK(ok.per_estimator.count("oracle") == 1);
  CHECK(ok.skipped.empty());
}

TEST_CASE("unknown estimator names are rejected") {
  const ltad::ScenarioSpec spec = strong_cell(20, 1, 0.0, 0.5, 41, 2);
  CHECK_THROWS_AS(ltad::run_scenario(spec, {"ransac"}, 1), std::invalid_argument);
}

TEST_CASE("selection labels track the planted outliers") {
  // at 40 percent strong contamination with h at 20 percent, the chosen rows
  // should nearly always come from the clean block
  const ltad::ScenarioSpec spec = strong_cell(50, 2, 0.4, 0.2, 43, 1);
  int clean_picks = 0, total = 0;
  for (int rep = 0; rep < 15; ++rep) {
    const ltad::GeneratedDataset d = ltad::generate_dataset(spec, rep);
    const ltad::EstimationResult r = [&] {
      ltad::DriverConfig cfg;
      cfg.refit_median = false;
      return ltad::estimate_ltad(d.X, spec.coverage_h(), cfg);
    }();
    for (int idx : r.selection.indices) {
      ++total;
      if (idx >= d.contaminated_count) ++clean_picks;
    }
  }
  CHECK(clean_picks >= (total * 9) / 10);
}

}  // TEST_SUITE
