#include "asim/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asim {

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::gaussian_iid(double sigma2, long dim) {
  NoiseModel m;
  m.kind = NoiseKind::GaussianIID;
  m.sigma2 = sigma2;
  m.dim = dim;
  m.validate();
  return m;
}

NoiseModel NoiseModel::two_point_lower_bound(double sigma2, double tau, long dim) {
  NoiseModel m;
  m.kind = NoiseKind::TwoPointLowerBound;
  m.sigma2 = sigma2;
  m.tau = tau;
  m.dim = dim;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("noise sigma2 must be finite and >= 0");
  if (dim < 0) throw std::invalid_argument("noise dim must be >= 0");
  if (kind == NoiseKind::TwoPointLowerBound && !(tau > 0.0))
    throw std::invalid_argument("noise tau must be > 0");
}

double NoiseModel::coord_scale(Eigen::Index size) const {
  Eigen::Index d = dim > 0 ? dim : size;
  if (d <= 0) throw std::invalid_argument("noise dimension must be positive");
  return std::sqrt(sigma2 / static_cast<double>(d));
}

Eigen::MatrixXd sample(const NoiseModel& model, Eigen::Index rows, Eigen::Index cols,
                       const Eigen::MatrixXd* state, Rng& rng) {
  Eigen::MatrixXd out(rows, cols);
  switch (model.kind) {
    case NoiseKind::None:
      out.setZero();
      return out;
    case NoiseKind::GaussianIID: {
      double s = model.coord_scale(rows * cols);
      for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = s * rng.normal();
      return out;
    }
    case NoiseKind::TwoPointLowerBound: {
      if (state == nullptr || state->rows() != rows || state->cols() != cols)
        throw std::invalid_argument("two-point noise requires the current tile state");
      double w = (*state)(0, 0);
      for (Eigen::Index i = 0; i < state->size(); ++i) {
        if (std::abs(state->data()[i] - w) > 1e-12 * std::max(1.0, std::abs(w)))
          throw std::invalid_argument("two-point noise requires identical coordinates");
      }
      if (!(std::abs(w) < model.tau))
        throw std::invalid_argument("two-point noise requires |w| < tau");
      double s = model.coord_scale(rows * cols);
      double p = 0.5 * (1.0 - w / model.tau);
      double xi = rng.uniform() < p ? s * std::sqrt((1.0 - p) / p)
                                    : -s * std::sqrt(p / (1.0 - p));
      out.setConstant(xi);
      return out;
    }
  }
  throw std::logic_error("unreachable noise kind");
}

double folded_normal_mean(double g, double s) {
  if (s == 0.0) return std::abs(g);
  double r = g / s;
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * r * r) +
         g * std::erf(r / std::numbers::sqrt2);
}

double estimate_noise_constant_c(const NoiseModel& model, const std::vector<double>& g_grid,
                                 long n_samples, Rng& rng) {
  if (!(model.sigma2 > 0.0)) throw std::domain_error("noise constant undefined for sigma2 = 0");
  if (g_grid.empty()) throw std::invalid_argument("g_grid must be nonempty");
  if (n_samples < 100000) throw std::invalid_argument("n_samples must be >= 1e5");
  double s = model.coord_scale(model.dim > 0 ? model.dim : 1);
  double best = std::numeric_limits<double>::infinity();
  for (double g : g_grid) {
    double acc = 0.0;
    for (long i = 0; i < n_samples; ++i) {
      double eps;
      switch (model.kind) {
        case NoiseKind::GaussianIID:
          eps = s * rng.normal();
          break;
        case NoiseKind::TwoPointLowerBound:
          // Symmetric state w = 0: the two support points collapse to +-s.
          eps = rng.uniform() < 0.5 ? s : -s;
          break;
        default:
          throw std::domain_error("noise constant undefined for this kind");
      }
      acc += std::abs(g + eps);
    }
    best = std::min(best, acc / static_cast<double>(n_samples) / s);
  }
  return best;
}

}  // namespace asim
