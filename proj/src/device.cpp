#include "asim/device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace asim {

DeviceModel DeviceModel::ideal() {
  DeviceModel d;
  d.kind = DeviceKind::Ideal;
  return d;
}

DeviceModel DeviceModel::asymmetric_linear(double tau, double w_sym) {
  DeviceModel d;
  d.kind = DeviceKind::AsymmetricLinear;
  d.tau = tau;
  d.w_sym = w_sym;
  d.validate();
  return d;
}

DeviceModel DeviceModel::linear_step(double tau_max, double tau_min, double w_sym) {
  DeviceModel d;
  d.kind = DeviceKind::LinearStep;
  d.tau_max = tau_max;
  d.tau_min = tau_min;
  d.w_sym = w_sym;
  d.validate();
  return d;
}

DeviceModel DeviceModel::power_step(double tau_max, double tau_min, double gamma_plus,
                                    double gamma_minus) {
  DeviceModel d;
  d.kind = DeviceKind::PowerStep;
  d.tau_max = tau_max;
  d.tau_min = tau_min;
  d.gamma_plus = gamma_plus;
  d.gamma_minus = gamma_minus;
  d.validate();
  return d;
}

DeviceModel DeviceModel::exponential_step(double tau_max, double tau_min, double gamma_plus,
                                          double gamma_minus) {
  DeviceModel d;
  d.kind = DeviceKind::ExponentialStep;
  d.tau_max = tau_max;
  d.tau_min = tau_min;
  d.gamma_plus = gamma_plus;
  d.gamma_minus = gamma_minus;
  d.validate();
  return d;
}

void DeviceModel::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("device parameter: ") + what);
  };
  switch (kind) {
    case DeviceKind::Ideal:
      break;
    case DeviceKind::AsymmetricLinear:
      require(std::isfinite(tau) && tau > 0.0, "tau must be > 0");
      require(std::isfinite(w_sym), "w_sym must be finite");
      break;
    case DeviceKind::LinearStep:
      require(std::isfinite(tau_max) && tau_max > 0.0, "tau_max must be > 0");
      require(std::isfinite(tau_min) && tau_min < 0.0, "tau_min must be < 0");
      require(std::isfinite(w_sym), "w_sym must be finite");
      break;
    case DeviceKind::PowerStep:
    case DeviceKind::ExponentialStep:
      require(std::isfinite(tau_max) && std::isfinite(tau_min) && tau_min < tau_max,
              "tau_min must be < tau_max");
      require(std::isfinite(gamma_plus) && gamma_plus > 0.0, "gamma_plus must be > 0");
      require(std::isfinite(gamma_minus) && gamma_minus > 0.0, "gamma_minus must be > 0");
      break;
  }
}

double DeviceModel::lower_limit() const {
  switch (kind) {
    case DeviceKind::Ideal:
      return -std::numeric_limits<double>::infinity();
    case DeviceKind::AsymmetricLinear:
      return w_sym - tau;
    case DeviceKind::LinearStep:
      return w_sym + tau_min;
    default:
      return tau_min;
  }
}

double DeviceModel::upper_limit() const {
  switch (kind) {
    case DeviceKind::Ideal:
      return std::numeric_limits<double>::infinity();
    case DeviceKind::AsymmetricLinear:
      return w_sym + tau;
    case DeviceKind::LinearStep:
      return w_sym + tau_max;
    default:
      return tau_max;
  }
}

ResponseFactors response_factors(const DeviceModel& device, double w) {
  switch (device.kind) {
    case DeviceKind::Ideal:
      return {1.0, 1.0};
    case DeviceKind::AsymmetricLinear: {
      double x = (w - device.w_sym) / device.tau;
      return {1.0 - x, 1.0 + x};
    }
    case DeviceKind::LinearStep: {
      double x = w - device.w_sym;
      return {1.0 - x / device.tau_max, 1.0 - x / device.tau_min};
    }
    case DeviceKind::PowerStep: {
      if (w < device.tau_min || w > device.tau_max)
        throw std::domain_error("weight outside [tau_min, tau_max]");
      double span = device.tau_max - device.tau_min;
      return {std::pow((device.tau_max - w) / span, device.gamma_plus),
              std::pow((w - device.tau_min) / span, device.gamma_minus)};
    }
    case DeviceKind::ExponentialStep: {
      if (w < device.tau_min || w > device.tau_max)
        throw std::domain_error("weight outside [tau_min, tau_max]");
      double span = device.tau_max - device.tau_min;
      return {1.0 - std::exp(-device.gamma_plus * (device.tau_max - w) / span),
              1.0 - std::exp(-device.gamma_minus * (w - device.tau_min) / span)};
    }
  }
  throw std::logic_error("unreachable device kind");
}

FgParts fg_decomposition(const DeviceModel& device, double w) {
  if (device.kind == DeviceKind::AsymmetricLinear)
    return {1.0, (w - device.w_sym) / device.tau};
  auto [qp, qm] = response_factors(device, w);
  return {0.5 * (qm + qp), 0.5 * (qm - qp)};
}

double closed_increment(const DeviceModel& device, double w, double dw) {
  auto [qp, qm] = response_factors(device, w);
  return dw * (dw >= 0.0 ? qp : qm);
}

double apply_update_closed(const DeviceModel& device, double w, double dw) {
  double out = w + closed_increment(device, w, dw);
  if (device.has_hard_bounds()) out = std::clamp(out, device.tau_min, device.tau_max);
  return out;
}

double apply_pulses(const DeviceModel& device, double w, long bl, int sign, double dw_min) {
  double step = sign >= 0 ? dw_min : -dw_min;
  for (long i = 0; i < bl; ++i) {
    auto [qp, qm] = response_factors(device, w);
    w += step * (sign >= 0 ? qp : qm);
    if (device.has_hard_bounds()) w = std::clamp(w, device.tau_min, device.tau_max);
  }
  return w;
}

}  // namespace asim
