#pragma once

#include <Eigen/Core>
#include <vector>

#include "asim/rng.hpp"

namespace asim {

enum class NoiseKind { None, GaussianIID, TwoPointLowerBound };

// Gradient-perturbation generator. sigma2 is the total variance E[||eps||^2];
// GaussianIID splits it as sigma2/D per coordinate. TwoPointLowerBound is the
// state-dependent two-valued distribution used by the convergence lower bound;
// it requires all tile coordinates to be identical.
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double sigma2 = 0.0;
  double tau = 1.0;  // TwoPointLowerBound saturation scale
  long dim = 0;      // per-coordinate scale divisor D; 0 = infer from shape

  static NoiseModel none();
  static NoiseModel gaussian_iid(double sigma2, long dim = 0);
  static NoiseModel two_point_lower_bound(double sigma2, double tau, long dim = 0);

  void validate() const;

  // Per-coordinate noise scale sigma/sqrt(D) for a sample of `size` coordinates.
  double coord_scale(Eigen::Index size) const;
};

// Draws one noise matrix. `state` is the current tile value matrix; it is
// required (and must have all coordinates equal within 1e-12 and |w| < tau)
// for TwoPointLowerBound, ignored otherwise.
Eigen::MatrixXd sample(const NoiseModel& model, Eigen::Index rows, Eigen::Index cols,
                       const Eigen::MatrixXd* state, Rng& rng);

// E[|X|] for X ~ N(g, s^2).
double folded_normal_mean(double g, double s);

// Monte-Carlo estimate of min over g_grid of E[|g + eps_i|] / (sigma/sqrt(D)),
// the per-coordinate lower-bound constant. Gaussian noise at g = 0 yields
// sqrt(2/pi). Throws std::domain_error for sigma2 = 0.
double estimate_noise_constant_c(const NoiseModel& model, const std::vector<double>& g_grid,
                                 long n_samples, Rng& rng);

}  // namespace asim
