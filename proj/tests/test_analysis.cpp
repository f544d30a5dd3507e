#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "asim/analysis.hpp"

using namespace asim;

namespace {

TraceRecord rec(long k, double grad2, double s) { return {k, 0.0, grad2, 0.0, 0.0, s}; }

}  // namespace

TEST_CASE("amplification factor averages all but the final record") {
  std::vector<TraceRecord> t = {rec(0, 0, 0.5), rec(1, 0, 0.7), rec(2, 0, 1e9)};
  CHECK(amplification_factor(t) == doctest::Approx(0.6).epsilon(1e-15));

  std::vector<TraceRecord> two = {rec(0, 0, 0.25), rec(1, 0, 123.0)};
  CHECK(amplification_factor(two) == 0.25);

  CHECK_THROWS_AS(amplification_factor({rec(0, 0, 0.5)}), std::invalid_argument);
  std::vector<TraceRecord> sat = {rec(0, 0, std::numeric_limits<double>::infinity()),
                                  rec(1, 0, 0.5), rec(2, 0, 0.5)};
  CHECK_THROWS_AS(amplification_factor(sat), std::runtime_error);
}

TEST_CASE("asymptotic error over the trace tail") {
  std::vector<TraceRecord> t;
  for (int i = 0; i < 1000; ++i) t.push_back(rec(i, 3.25, 0));
  TailStats s = asymptotic_error(t);
  CHECK(s.mean == 3.25);
  CHECK(s.std == 0.0);

  // Alternating tail has a closed-form sample deviation.
  std::vector<TraceRecord> alt;
  for (int i = 0; i < 500; ++i) alt.push_back(rec(i, i % 2 == 0 ? 2.0 : 4.0, 0));
  TailStats sa = asymptotic_error(alt, 0.2);  // tail of 100 records
  CHECK(sa.mean == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sa.std == doctest::Approx(std::sqrt(100.0 / 99.0)).epsilon(1e-12));

  CHECK_THROWS_AS(asymptotic_error(t, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_error(t, 0.6), std::invalid_argument);
  std::vector<TraceRecord> small(400, rec(0, 1.0, 0));
  CHECK_THROWS_AS(asymptotic_error(small, 0.2), std::invalid_argument);
}

TEST_CASE("lower-bound rows are internally consistent") {
  std::vector<LowerBoundRow> rows =
      run_lower_bound_experiment(1.0, 0.1, 1.0, 4, 0.04, {0.02, 0.01}, 500, {1, 2, 3});
  REQUIRE(rows.size() == 6);
  for (const LowerBoundRow& r : rows) {
    CHECK(r.four_sigma2_sk == 4.0 * r.sigma2_sk);
    CHECK(r.residual == r.avg_grad_norm_sq - r.sigma2_sk);
    CHECK(r.avg_grad_norm_sq >= 0.0);
    CHECK(r.sigma2_sk >= 0.0);
  }
  // Same seed, same alpha: deterministic repetition.
  std::vector<LowerBoundRow> again =
      run_lower_bound_experiment(1.0, 0.1, 1.0, 4, 0.04, {0.02}, 500, {1});
  CHECK(again[0].avg_grad_norm_sq == rows[0].avg_grad_norm_sq);
}

TEST_CASE("lower-bound experiment rejects inadmissible settings") {
  CHECK_THROWS_AS(run_lower_bound_experiment(1.0, 0.1, 1.0, 4, 0.04, {0.6}, 500, {1}),
                  std::domain_error);
  CHECK_THROWS_AS(run_lower_bound_experiment(1.0, 0.1, 1.0, 4, 4.0, {0.01}, 500, {1}),
                  std::domain_error);
  CHECK_THROWS_AS(run_lower_bound_experiment(1.0, 0.1, 1.0, 4, 0.04, {}, 500, {1}),
                  std::invalid_argument);
}

TEST_CASE("digital weights do not drift under zero-mean noise") {
  Rng rng(701);
  DriftResult d = drift_experiment(Algo::DigitalSGD, DeviceModel::ideal(), 0.1, 0.5, 0.04, 0.5,
                                   20000, rng);
  CHECK(std::abs(d.mean_drift) <= 3.0 * d.std_error);
}

TEST_CASE("asymmetric weights decay toward the symmetric point") {
  Rng rng(702);
  DriftResult d = drift_experiment(Algo::AnalogSGD, DeviceModel::asymmetric_linear(1.0), 0.1,
                                   0.5, 0.04, 0.5, 50000, rng);
  double predicted = -0.1 * folded_normal_mean(0.0, 0.2) * 0.5;
  CHECK(d.mean_drift < 0.0);
  CHECK(std::abs(d.mean_drift - predicted) <= 3.0 * d.std_error);

  CHECK_THROWS_AS(drift_experiment(Algo::AnalogSGD, DeviceModel::asymmetric_linear(1.0), 0.1,
                                   0.5, 0.04, 0.0, 100, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(drift_experiment(Algo::AnalogSGD, DeviceModel::asymmetric_linear(1.0), 0.1,
                                   0.5, 0.04, 0.5, 1, rng),
                  std::invalid_argument);
}
