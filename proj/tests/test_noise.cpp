#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "asim/noise.hpp"

using namespace asim;

TEST_CASE("no-noise model returns zeros") {
  Rng rng(1);
  Eigen::MatrixXd e = sample(NoiseModel::none(), 3, 2, nullptr, rng);
  CHECK(e.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("iid gaussian splits total variance across coordinates") {
  Rng rng(11);
  NoiseModel m = NoiseModel::gaussian_iid(0.4);
  const int trials = 20000;
  double total = 0.0, coord_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd e = sample(m, 20, 1, nullptr, rng);
    total += e.squaredNorm();
    coord_sum += e(0, 0);
  }
  CHECK(total / trials == doctest::Approx(0.4).epsilon(0.02));
  CHECK(std::abs(coord_sum / trials) < 0.005);

  // Explicit dim overrides the shape-inferred divisor.
  NoiseModel fixed = NoiseModel::gaussian_iid(0.4, 5);
  CHECK(fixed.coord_scale(20) == doctest::Approx(std::sqrt(0.4 / 5.0)));
  CHECK(m.coord_scale(20) == doctest::Approx(std::sqrt(0.4 / 20.0)));
}

TEST_CASE("state-dependent two-point noise") {
  Rng rng(12);
  NoiseModel m = NoiseModel::two_point_lower_bound(0.81, 1.0);
  Eigen::MatrixXd state = Eigen::MatrixXd::Constant(2, 2, 0.2);
  double s = std::sqrt(0.81 / 4.0);
  double p = 0.5 * (1.0 - 0.2);
  double hi = s * std::sqrt((1.0 - p) / p);
  double lo = -s * std::sqrt(p / (1.0 - p));

  std::set<double> support;
  double mean = 0.0, second = 0.0;
  bool rank_one = true;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd e = sample(m, 2, 2, &state, rng);
    rank_one = rank_one && e(0, 0) == e(1, 1) && e(0, 0) == e(0, 1) && e(0, 0) == e(1, 0);
    support.insert(e(0, 0));
    mean += e(0, 0);
    second += e(0, 0) * e(0, 0);
  }
  CHECK(rank_one);  // every coordinate of a draw is identical
  REQUIRE(support.size() == 2);
  CHECK(*support.begin() == doctest::Approx(lo).epsilon(1e-12));
  CHECK(*support.rbegin() == doctest::Approx(hi).epsilon(1e-12));
  CHECK(std::abs(mean / trials) < 0.005);                            // zero-mean by construction
  CHECK(second / trials == doctest::Approx(s * s).epsilon(0.01));    // variance sigma2/D
}

TEST_CASE("two-point noise enforces its state contract") {
  Rng rng(13);
  NoiseModel m = NoiseModel::two_point_lower_bound(0.81, 1.0);
  CHECK_THROWS_AS(sample(m, 2, 2, nullptr, rng), std::invalid_argument);

  Eigen::MatrixXd uneven(2, 1);
  uneven << 0.2, 0.3;
  CHECK_THROWS_AS(sample(m, 2, 1, &uneven, rng), std::invalid_argument);

  Eigen::MatrixXd saturated = Eigen::MatrixXd::Constant(2, 1, 1.0);
  CHECK_THROWS_AS(sample(m, 2, 1, &saturated, rng), std::invalid_argument);

  Eigen::MatrixXd wrong_shape = Eigen::MatrixXd::Constant(3, 1, 0.2);
  CHECK_THROWS_AS(sample(m, 2, 1, &wrong_shape, rng), std::invalid_argument);
}

TEST_CASE("noise model validation") {
  CHECK_THROWS_AS(NoiseModel::gaussian_iid(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::two_point_lower_bound(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::gaussian_iid(0.1, -3), std::invalid_argument);
}

TEST_CASE("folded normal mean closed form") {
  CHECK(folded_normal_mean(0.0, 1.0) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(folded_normal_mean(1.0, 1.0) == doctest::Approx(1.1666309411753727).epsilon(1e-12));
  CHECK(folded_normal_mean(0.0, 0.2) ==
        doctest::Approx(0.2 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(folded_normal_mean(3.0, 0.0) == 3.0);
  CHECK(folded_normal_mean(-2.0, 0.1) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("noise constant estimates") {
  Rng rng(14);
  double c_gauss =
      estimate_noise_constant_c(NoiseModel::gaussian_iid(1.0, 1), {0.0}, 100000, rng);
  CHECK(c_gauss == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.03));

  double c_two = estimate_noise_constant_c(NoiseModel::two_point_lower_bound(0.81, 1.0, 1),
                                           {0.0}, 100000, rng);
  CHECK(c_two == doctest::Approx(1.0).epsilon(0.02));

  // The minimum over the probe grid is what matters: |g| grows E|g + eps|.
  double c_min = estimate_noise_constant_c(NoiseModel::gaussian_iid(1.0, 1), {2.0, 0.0, -1.0},
                                           100000, rng);
  CHECK(c_min == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.03));

  CHECK_THROWS_AS(estimate_noise_constant_c(NoiseModel::gaussian_iid(0.0, 1), {0.0}, 100000, rng),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_noise_constant_c(NoiseModel::gaussian_iid(1.0, 1), {}, 100000, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_noise_constant_c(NoiseModel::gaussian_iid(1.0, 1), {0.0}, 10, rng),
                  std::invalid_argument);
}
