#pragma once

#include <limits>

namespace asim {

enum class DeviceKind {
  Ideal,
  AsymmetricLinear,
  LinearStep,
  PowerStep,
  ExponentialStep,
};

struct ResponseFactors {
  double q_plus;
  double q_minus;
};

struct FgParts {
  double f;  // symmetric component, (q_minus + q_plus) / 2
  double g;  // asymmetric component, (q_minus - q_plus) / 2
};

// Response-factor specification for one resistive element class. Fields are
// interpreted per kind; unused fields are ignored.
struct DeviceModel {
  DeviceKind kind = DeviceKind::Ideal;
  double tau = 1.0;          // AsymmetricLinear half-range, > 0
  double tau_max = 1.0;      // LinearStep/PowerStep/ExponentialStep upper parameter
  double tau_min = -1.0;     // lower parameter; LinearStep requires tau_min < 0 < tau_max
  double w_sym = 0.0;        // symmetric point (AsymmetricLinear, LinearStep)
  double gamma_plus = 1.0;   // PowerStep/ExponentialStep shape, > 0
  double gamma_minus = 1.0;

  static DeviceModel ideal();
  static DeviceModel asymmetric_linear(double tau, double w_sym = 0.0);
  static DeviceModel linear_step(double tau_max, double tau_min, double w_sym = 0.0);
  static DeviceModel power_step(double tau_max, double tau_min, double gamma_plus,
                                double gamma_minus);
  static DeviceModel exponential_step(double tau_max, double tau_min, double gamma_plus,
                                      double gamma_minus);

  // Throws std::invalid_argument on parameter-domain violations.
  void validate() const;

  // PowerStep/ExponentialStep conductances are physically confined to
  // [tau_min, tau_max]; updates clamp to that interval.
  bool has_hard_bounds() const {
    return kind == DeviceKind::PowerStep || kind == DeviceKind::ExponentialStep;
  }

  // Range of representable weights; Ideal is unbounded.
  double lower_limit() const;
  double upper_limit() const;
};

// (q+, q-) per the device kind's closed form. Throws std::domain_error when w
// lies outside a hard-bounded device's [tau_min, tau_max].
ResponseFactors response_factors(const DeviceModel& device, double w);

// F = (q- + q+)/2, G = (q- - q+)/2. AsymmetricLinear uses the exact forms
// F = 1, G = (w - w_sym)/tau.
FgParts fg_decomposition(const DeviceModel& device, double w);

// Signed weight change dw * q_s(w), where s picks q+ for dw >= 0 and q- for
// dw < 0. Exposed separately so displacement magnitudes can be tested without
// the cancellation incurred by (updated - w).
double closed_increment(const DeviceModel& device, double w, double dw);

// One-shot asymmetric update w + dw * q_s(w); hard-bounded kinds clamp the
// result to [tau_min, tau_max].
double apply_update_closed(const DeviceModel& device, double w, double dw);

// `bl` single pulses of magnitude dw_min with polarity `sign`, response
// factors re-evaluated at the current weight after every pulse.
double apply_pulses(const DeviceModel& device, double w, long bl, int sign, double dw_min);

}  // namespace asim
