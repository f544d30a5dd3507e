#include "asim/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace asim {

double s_term(double w_inf, double tau) {
  double x = w_inf / tau;
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  double x2 = x * x;
  return x2 / (1.0 - x2);
}

namespace {

OptimizerState make_state(Algo algo, AnalogTile W, std::optional<AnalogTile> P, double alpha,
                          double beta, TransferMode transfer, UpdateMode mode) {
  OptimizerState s{algo, std::move(W), std::move(P), alpha, beta, transfer, mode, 0, 0, {}};
  s.validate();
  return s;
}

}  // namespace

OptimizerState OptimizerState::digital_sgd(Eigen::MatrixXd W0, double alpha) {
  return make_state(Algo::DigitalSGD, AnalogTile(std::move(W0), DeviceModel::ideal()),
                    std::nullopt, alpha, 0.0, TransferMode::Full, UpdateMode::Closed);
}

OptimizerState OptimizerState::analog_sgd(AnalogTile W, double alpha, UpdateMode mode) {
  return make_state(Algo::AnalogSGD, std::move(W), std::nullopt, alpha, 0.0, TransferMode::Full,
                    mode);
}

OptimizerState OptimizerState::tiki_taka(AnalogTile W, double alpha, double beta,
                                         TransferMode transfer, UpdateMode mode) {
  AnalogTile P(Eigen::MatrixXd::Zero(W.rows(), W.cols()), W.device(), W.dw_min(), W.bl_max());
  return make_state(Algo::TikiTaka, std::move(W), std::move(P), alpha, beta, transfer, mode);
}

void OptimizerState::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (algo == Algo::TikiTaka) {
    if (!P.has_value()) throw std::invalid_argument("TikiTaka requires the auxiliary tile P");
    if (!(beta > 0.0)) throw std::invalid_argument("TikiTaka requires beta > 0");
    if (P->rows() != W.rows() || P->cols() != W.cols())
      throw std::invalid_argument("P shape must match W");
  }
  if (transfer_cursor < 0 || (W.cols() > 0 && transfer_cursor >= W.cols()))
    throw std::invalid_argument("transfer_cursor out of range");
}

namespace {

void check_shape(const OptimizerState& state, const Eigen::MatrixXd& g) {
  if (g.rows() != state.W.rows() || g.cols() != state.W.cols())
    throw std::invalid_argument("gradient shape mismatch");
}

}  // namespace

void step_digital_sgd(OptimizerState& state, const Eigen::MatrixXd& grad_noisy) {
  check_shape(state, grad_noisy);
  // Ideal device, closed mode: identical to W - alpha * grad.
  state.W.apply_update(-state.alpha * grad_noisy, UpdateMode::Closed);
}

void step_analog_sgd(OptimizerState& state, const Eigen::MatrixXd& grad_noisy) {
  check_shape(state, grad_noisy);
  UpdateStats st = state.W.apply_update(-state.alpha * grad_noisy, state.update_mode);
  state.totals.pulses += st.pulses;
  state.totals.truncated += st.truncated;
}

void step_tiki_taka(OptimizerState& state, const Eigen::MatrixXd& grad_noisy) {
  check_shape(state, grad_noisy);
  if (!state.P.has_value()) throw std::invalid_argument("TikiTaka requires P");
  AnalogTile& P = *state.P;
  UpdateStats sp = P.apply_update(state.beta * grad_noisy, state.update_mode);
  state.totals.pulses += sp.pulses;
  state.totals.truncated += sp.truncated;

  // Transfer reads P exactly (noiseless) and writes through W's device.
  Eigen::MatrixXd dW;
  if (state.transfer_mode == TransferMode::Full) {
    dW = -state.alpha * P.values();
  } else {
    dW = Eigen::MatrixXd::Zero(state.W.rows(), state.W.cols());
    dW.col(state.transfer_cursor) = -state.alpha * P.values().col(state.transfer_cursor);
    state.transfer_cursor = (state.transfer_cursor + 1) % state.W.cols();
  }
  UpdateStats sw = state.W.apply_update(dW, state.update_mode);
  state.totals.pulses += sw.pulses;
  state.totals.truncated += sw.truncated;
}

void step(OptimizerState& state, const Eigen::MatrixXd& grad_noisy) {
  switch (state.algo) {
    case Algo::DigitalSGD:
      step_digital_sgd(state, grad_noisy);
      break;
    case Algo::AnalogSGD:
      step_analog_sgd(state, grad_noisy);
      break;
    case Algo::TikiTaka:
      step_tiki_taka(state, grad_noisy);
      break;
  }
  ++state.step_count;
}

namespace {

TraceRecord make_record(long k, const Evaluation& eval, const OptimizerState& state) {
  double w_inf = state.W.w_inf();
  double p_inf = state.P.has_value() ? state.P->w_inf() : 0.0;
  double s = 0.0;
  if (state.W.device().kind == DeviceKind::AsymmetricLinear)
    s = s_term(w_inf, state.W.device().tau);
  return {k, eval.loss, eval.grad.squaredNorm(), w_inf, p_inf, s};
}

}  // namespace

std::vector<TraceRecord> run(const Problem& problem, OptimizerState& state,
                             const NoiseModel& noise, Rng& rng, long n_iters,
                             long trace_every) {
  if (n_iters < 1) throw std::invalid_argument("n_iters must be >= 1");
  if (trace_every < 1) throw std::invalid_argument("trace_every must be >= 1");
  if (problem.rows() != state.W.rows() || problem.cols() != state.W.cols())
    throw std::invalid_argument("problem/optimizer shape mismatch");
  std::vector<TraceRecord> records;
  records.reserve(static_cast<std::size_t>(n_iters / trace_every) + 2);
  for (long k = 0; k < n_iters; ++k) {
    Evaluation eval = problem.evaluate(state.W.values());
    if (k % trace_every == 0) records.push_back(make_record(k, eval, state));
    Eigen::MatrixXd g =
        eval.grad + sample(noise, state.W.rows(), state.W.cols(), &state.W.values(), rng);
    step(state, g);
  }
  Evaluation eval = problem.evaluate(state.W.values());
  records.push_back(make_record(n_iters, eval, state));
  return records;
}

}  // namespace asim
