#include "asim/tile.hpp"

#include <cmath>
#include <stdexcept>

namespace asim {

PulseTrain pulse_length(double dw, double dw_min, long bl_max) {
  if (!(dw_min > 0.0)) throw std::invalid_argument("dw_min must be > 0");
  if (bl_max < 1) throw std::invalid_argument("bl_max must be >= 1");
  int sign = dw >= 0.0 ? 1 : -1;
  if (dw == 0.0) return {0, sign, false};
  // Compare before the integer cast: |dw|/dw_min may exceed long range.
  double raw = std::ceil(std::abs(dw) / dw_min);
  if (raw > static_cast<double>(bl_max)) return {bl_max, sign, true};
  return {static_cast<long>(raw), sign, false};
}

AnalogTile::AnalogTile(Eigen::MatrixXd values, DeviceModel device, double dw_min, long bl_max)
    : values_(std::move(values)), device_(device), dw_min_(dw_min), bl_max_(bl_max) {
  device_.validate();
  if (!(dw_min_ > 0.0)) throw std::invalid_argument("dw_min must be > 0");
  if (bl_max_ < 1) throw std::invalid_argument("bl_max must be >= 1");
  if (device_.has_hard_bounds() &&
      (values_.size() != 0 && (values_.minCoeff() < device_.tau_min ||
                               values_.maxCoeff() > device_.tau_max)))
    throw std::invalid_argument("initial values outside device range");
}

UpdateStats AnalogTile::apply_update(const Eigen::MatrixXd& dW, UpdateMode mode) {
  if (dW.rows() != values_.rows() || dW.cols() != values_.cols())
    throw std::invalid_argument("update shape mismatch");
  UpdateStats stats;
  double* w = values_.data();
  const double* d = dW.data();
  const Eigen::Index n = values_.size();
  if (mode == UpdateMode::Closed) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = apply_update_closed(device_, w[i], d[i]);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      PulseTrain train = pulse_length(d[i], dw_min_, bl_max_);
      w[i] = apply_pulses(device_, w[i], train.bl, train.sign, dw_min_);
      stats.pulses += train.bl;
      stats.truncated += train.truncated ? 1 : 0;
    }
  }
  return stats;
}

}  // namespace asim
