#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "asim/device.hpp"
#include "asim/rng.hpp"

using namespace asim;

TEST_CASE("response factors closed forms") {
  CHECK(response_factors(DeviceModel::ideal(), 3.7).q_plus == 1.0);
  CHECK(response_factors(DeviceModel::ideal(), 3.7).q_minus == 1.0);

  auto ald = response_factors(DeviceModel::asymmetric_linear(2.0), 1.0);
  CHECK(ald.q_plus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ald.q_minus == doctest::Approx(1.5).epsilon(1e-15));

  auto ls = response_factors(DeviceModel::linear_step(2.0, -4.0), 1.0);
  CHECK(ls.q_plus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ls.q_minus == doctest::Approx(1.25).epsilon(1e-15));

  auto ps = response_factors(DeviceModel::power_step(1.0, -1.0, 1.0, 1.0), 0.0);
  CHECK(ps.q_plus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ps.q_minus == doctest::Approx(0.5).epsilon(1e-15));

  auto es = response_factors(DeviceModel::exponential_step(1.0, -1.0, 2.0, 1.0), 0.0);
  CHECK(es.q_plus == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(es.q_minus == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("symmetric point and half-range shift the response") {
  DeviceModel d = DeviceModel::asymmetric_linear(3.0, 0.5);
  auto at_sym = response_factors(d, 0.5);
  CHECK(at_sym.q_plus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at_sym.q_minus == doctest::Approx(1.0).epsilon(1e-15));
  auto above = response_factors(d, 2.0);
  CHECK(above.q_plus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(above.q_minus == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.lower_limit() == doctest::Approx(-2.5));
  CHECK(d.upper_limit() == doctest::Approx(3.5));
}

TEST_CASE("symmetric/asymmetric decomposition") {
  DeviceModel ald = DeviceModel::asymmetric_linear(2.0);
  FgParts fg = fg_decomposition(ald, 1.0);
  CHECK(fg.f == 1.0);
  CHECK(fg.g == doctest::Approx(0.5).epsilon(1e-15));

  FgParts ps = fg_decomposition(DeviceModel::power_step(1.0, -1.0, 1.0, 1.0), 0.0);
  CHECK(ps.f == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ps.g == doctest::Approx(0.0));

  Rng rng(301);
  for (int i = 0; i < 1000; ++i) {
    double w = 2.0 * rng.uniform() - 1.0;
    for (const DeviceModel& d :
         {DeviceModel::linear_step(2.0, -3.0), DeviceModel::power_step(1.5, -1.5, 0.7, 1.3),
          DeviceModel::exponential_step(1.5, -1.5, 2.0, 0.5)}) {
      auto [qp, qm] = response_factors(d, w);
      FgParts fg2 = fg_decomposition(d, w);
      CHECK(fg2.f - fg2.g == doctest::Approx(qp).epsilon(1e-14));
      CHECK(fg2.f + fg2.g == doctest::Approx(qm).epsilon(1e-14));
    }
  }
}

TEST_CASE("response factors stay nonnegative on the representable range") {
  Rng rng(302);
  for (const DeviceModel& d :
       {DeviceModel::asymmetric_linear(2.5, 0.3), DeviceModel::linear_step(2.0, -4.0, 0.1),
        DeviceModel::power_step(1.0, -1.0, 0.5, 2.0),
        DeviceModel::exponential_step(1.0, -1.0, 3.0, 0.25)}) {
    double lo = d.lower_limit(), hi = d.upper_limit();
    for (int i = 0; i < 2000; ++i) {
      double w = lo + (hi - lo) * rng.uniform();
      auto [qp, qm] = response_factors(d, w);
      REQUIRE(qp >= 0.0);
      REQUIRE(qm >= 0.0);
    }
  }
}

TEST_CASE("closed update slows toward the positive edge and resets fast") {
  DeviceModel d = DeviceModel::asymmetric_linear(1.0);
  CHECK(apply_update_closed(d, 1.0, 0.2) == doctest::Approx(1.0));
  CHECK(apply_update_closed(d, 1.0, -0.2) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(closed_increment(d, 0.5, 0.1) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(closed_increment(d, 0.5, -0.1) == doctest::Approx(-0.15).epsilon(1e-15));
  CHECK(closed_increment(d, 0.0, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("pulses re-evaluate the response each quantum") {
  DeviceModel d = DeviceModel::asymmetric_linear(1.0);
  double w = 0.0;
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected += 0.1 * (1.0 - expected);
  w = apply_pulses(d, 0.0, 3, +1, 0.1);
  CHECK(w == doctest::Approx(expected).epsilon(1e-15));

  CHECK(apply_pulses(DeviceModel::ideal(), 0.0, 4, +1, 0.25) == 1.0);
  CHECK(apply_pulses(d, 0.5, 0, +1, 0.1) == 0.5);
}

TEST_CASE("hard-bounded kinds clamp, linear kinds do not") {
  DeviceModel ps = DeviceModel::power_step(1.0, -1.0, 1.0, 1.0);
  CHECK(apply_update_closed(ps, 0.9, 5.0) <= 1.0);
  CHECK(apply_pulses(ps, 0.9, 1000, +1, 0.05) <= 1.0);
  CHECK(ps.has_hard_bounds());

  DeviceModel ald = DeviceModel::asymmetric_linear(1.0);
  CHECK(!ald.has_hard_bounds());
  // Overshoot past the fixed point is possible in one closed step.
  CHECK(apply_update_closed(ald, 0.0, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("parameter validation rejects bad models") {
  CHECK_THROWS_AS(DeviceModel::asymmetric_linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceModel::asymmetric_linear(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceModel::linear_step(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceModel::linear_step(-2.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceModel::power_step(1.0, -1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DeviceModel::exponential_step(1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(response_factors(DeviceModel::power_step(1.0, -1.0, 1.0, 1.0), 1.5),
                  std::domain_error);
}
