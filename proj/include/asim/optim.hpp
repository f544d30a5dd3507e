#pragma once

#include <optional>
#include <vector>

#include "asim/noise.hpp"
#include "asim/problem.hpp"
#include "asim/tile.hpp"

namespace asim {

enum class Algo { DigitalSGD, AnalogSGD, TikiTaka };
enum class TransferMode { Full, ColumnCyclic };

// Per-iteration metrics. loss and grad_norm_sq are evaluated at W_k with the
// exact noise-free gradient. s_term = (w_inf^2/tau^2)/(1 - w_inf^2/tau^2) for
// asymmetric-linear tiles (+inf once w_inf >= tau); 0 for other device kinds.
// p_inf is 0 when no auxiliary tile exists.
struct TraceRecord {
  long k;
  double loss;
  double grad_norm_sq;
  double w_inf;
  double p_inf;
  double s_term;
};

// (x^2)/(1 - x^2) with x = w_inf/tau; +inf when w_inf >= tau.
double s_term(double w_inf, double tau);

struct OptimizerState {
  Algo algo = Algo::DigitalSGD;
  AnalogTile W;
  std::optional<AnalogTile> P;  // TikiTaka auxiliary array, starts at zero
  double alpha = 0.0;
  double beta = 0.0;
  TransferMode transfer_mode = TransferMode::Full;
  UpdateMode update_mode = UpdateMode::Closed;
  Eigen::Index transfer_cursor = 0;  // next column for ColumnCyclic
  long step_count = 0;
  UpdateStats totals;  // pulse/truncation diagnostics accumulated over steps

  // Digital baseline: an Ideal-device tile, every step exact W - alpha*g.
  static OptimizerState digital_sgd(Eigen::MatrixXd W0, double alpha);

  static OptimizerState analog_sgd(AnalogTile W, double alpha,
                                   UpdateMode mode = UpdateMode::Closed);

  // P uses the same device/pulse parameters as W and starts at zero.
  static OptimizerState tiki_taka(AnalogTile W, double alpha, double beta,
                                  TransferMode transfer = TransferMode::Full,
                                  UpdateMode mode = UpdateMode::Closed);

  void validate() const;
};

// One optimizer step on an already-noisy gradient. Shapes must match W.
void step_digital_sgd(OptimizerState& state, const Eigen::MatrixXd& grad_noisy);
void step_analog_sgd(OptimizerState& state, const Eigen::MatrixXd& grad_noisy);
void step_tiki_taka(OptimizerState& state, const Eigen::MatrixXd& grad_noisy);

// Dispatches on state.algo and advances step_count.
void step(OptimizerState& state, const Eigen::MatrixXd& grad_noisy);

// Full training loop: per iteration, evaluates the exact gradient, adds one
// noise draw, and steps. Records at k = 0, every trace_every iterations, and
// at the final iterate. Deterministic given the rng seed.
std::vector<TraceRecord> run(const Problem& problem, OptimizerState& state,
                             const NoiseModel& noise, Rng& rng, long n_iters,
                             long trace_every = 1);

}  // namespace asim
