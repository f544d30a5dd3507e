#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "asim/tile.hpp"

using namespace asim;

TEST_CASE("pulse train quantization") {
  PulseTrain t = pulse_length(0.0025, 0.001, 800);
  CHECK(t.bl == 3);
  CHECK(t.sign == 1);
  CHECK(!t.truncated);

  t = pulse_length(-0.001, 0.001, 800);
  CHECK(t.bl == 1);
  CHECK(t.sign == -1);
  CHECK(!t.truncated);

  t = pulse_length(1.0, 0.001, 300);
  CHECK(t.bl == 300);
  CHECK(t.truncated);

  t = pulse_length(0.01, 1e-4, 800);
  CHECK(t.bl == 100);
  CHECK(!t.truncated);

  t = pulse_length(0.0, 1e-4, 800);
  CHECK(t.bl == 0);
  CHECK(!t.truncated);

  CHECK_THROWS_AS(pulse_length(0.1, 0.0, 800), std::invalid_argument);
  CHECK_THROWS_AS(pulse_length(0.1, -1e-4, 800), std::invalid_argument);
  CHECK_THROWS_AS(pulse_length(0.1, 1e-4, 0), std::invalid_argument);
}

TEST_CASE("tile closed update matches the scalar form per coordinate") {
  Eigen::MatrixXd W0(1, 2);
  W0 << 0.0, 1.0;
  AnalogTile tile(W0, DeviceModel::asymmetric_linear(2.0));
  Eigen::MatrixXd dW(1, 2);
  dW << 0.1, 0.1;
  tile.apply_update(dW, UpdateMode::Closed);
  CHECK(tile.values()(0, 0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(tile.values()(0, 1) == doctest::Approx(1.05).epsilon(1e-15));
}

TEST_CASE("ideal tile reduces to exact vector addition") {
  Eigen::MatrixXd W0(2, 2);
  W0 << 0.25, -1.5, 3.0, 0.125;
  Eigen::MatrixXd dW(2, 2);
  dW << 0.5, 0.25, -1.0, 2.0;
  AnalogTile tile(W0, DeviceModel::ideal());
  tile.apply_update(dW, UpdateMode::Closed);
  Eigen::MatrixXd expected = W0 + dW;
  CHECK((tile.values() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dyadic pulse trains are exact on an ideal tile") {
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(1, 1);
  AnalogTile tile(W0, DeviceModel::ideal(), 0.25, 800);
  Eigen::MatrixXd dW(1, 1);
  dW << 1.0;
  UpdateStats stats = tile.apply_update(dW, UpdateMode::Pulsed);
  CHECK(tile.values()(0, 0) == 1.0);
  CHECK(stats.pulses == 4);
  CHECK(stats.truncated == 0);
}

TEST_CASE("truncation is reported, not silently dropped") {
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(1, 1);
  AnalogTile tile(W0, DeviceModel::ideal(), 0.001, 300);
  Eigen::MatrixXd dW(1, 1);
  dW << 1.0;
  UpdateStats stats = tile.apply_update(dW, UpdateMode::Pulsed);
  CHECK(stats.truncated == 1);
  CHECK(stats.pulses == 300);
  CHECK(tile.values()(0, 0) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("pulsed update tracks the closed form at a reference point") {
  DeviceModel d = DeviceModel::asymmetric_linear(3.0);
  double w = 0.5;
  for (double dw : {0.01, -0.01}) {
    double closed = apply_update_closed(d, w, dw);
    PulseTrain train = pulse_length(dw, 1e-4, 800);
    double pulsed = apply_pulses(d, w, train.bl, train.sign, 1e-4);
    double err = std::abs(pulsed - closed);
    CHECK(err <= 3.335e-5);
    CHECK(err <= 5e-5);
  }
}

TEST_CASE("tile constructor validates its arguments") {
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(AnalogTile(W0, DeviceModel::ideal(), 0.0, 800), std::invalid_argument);
  CHECK_THROWS_AS(AnalogTile(W0, DeviceModel::ideal(), 1e-4, 0), std::invalid_argument);
  Eigen::MatrixXd out_of_range = Eigen::MatrixXd::Constant(2, 2, 2.0);
  CHECK_THROWS_AS(AnalogTile(out_of_range, DeviceModel::power_step(1.0, -1.0, 1.0, 1.0)),
                  std::invalid_argument);

  AnalogTile tile(W0, DeviceModel::ideal());
  Eigen::MatrixXd wrong_shape = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(tile.apply_update(wrong_shape, UpdateMode::Closed), std::invalid_argument);
}

TEST_CASE("w_inf is the max absolute coordinate") {
  Eigen::MatrixXd W0(2, 2);
  W0 << 0.1, -0.9, 0.5, 0.2;
  AnalogTile tile(W0, DeviceModel::asymmetric_linear(1.0));
  CHECK(tile.w_inf() == 0.9);
}
