#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "asim/device.hpp"

namespace asim {

enum class UpdateMode { Closed, Pulsed };

struct PulseTrain {
  long bl;         // number of whole dw_min pulses, 0 iff dw == 0
  int sign;        // +1 for dw >= 0, -1 otherwise
  bool truncated;  // true when ceil(|dw|/dw_min) exceeded bl_max
};

// bl = min(ceil(|dw|/dw_min), bl_max). Throws std::invalid_argument unless
// dw_min > 0 and bl_max >= 1.
PulseTrain pulse_length(double dw, double dw_min, long bl_max);

struct UpdateStats {
  std::int64_t pulses = 0;     // total pulses emitted (pulsed mode)
  std::int64_t truncated = 0;  // coordinates whose trains hit bl_max
};

// A weight matrix stored in conductance: every coordinate evolves under the
// same asymmetric device response. A tile is exclusively owned by one run.
class AnalogTile {
 public:
  AnalogTile(Eigen::MatrixXd values, DeviceModel device, double dw_min = 1e-4,
             long bl_max = 800);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  const DeviceModel& device() const { return device_; }
  double dw_min() const { return dw_min_; }
  long bl_max() const { return bl_max_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  double w_inf() const { return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff(); }

  // Coordinate-wise asymmetric update. Closed mode applies the one-shot form;
  // pulsed mode emits whole dw_min pulses with the response re-evaluated after
  // every pulse. Throws std::invalid_argument on shape mismatch.
  UpdateStats apply_update(const Eigen::MatrixXd& dW, UpdateMode mode);

 private:
  Eigen::MatrixXd values_;
  DeviceModel device_;
  double dw_min_;
  long bl_max_;
};

}  // namespace asim
