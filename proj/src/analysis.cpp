#include "asim/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "asim/rng.hpp"

namespace asim {

double amplification_factor(const std::vector<TraceRecord>& trace) {
  if (trace.size() < 2) throw std::invalid_argument("trace needs at least 2 records");
  std::size_t K = trace.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double s = trace[k].s_term;
    if (!std::isfinite(s) || s < 0.0)
      throw std::runtime_error("saturation overflow: w_inf >= tau in trace");
    acc += s;
  }
  return acc / static_cast<double>(K);
}

TailStats asymptotic_error(const std::vector<TraceRecord>& trace, double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction > 0.5)
    throw std::invalid_argument("tail_fraction must be in (0, 0.5]");
  std::size_t n_tail = static_cast<std::size_t>(static_cast<double>(trace.size()) * tail_fraction);
  if (n_tail < 100) throw std::invalid_argument("tail must contain at least 100 records");
  std::size_t start = trace.size() - n_tail;
  double mean = 0.0;
  for (std::size_t i = start; i < trace.size(); ++i) mean += trace[i].grad_norm_sq;
  mean /= static_cast<double>(n_tail);
  double var = 0.0;
  for (std::size_t i = start; i < trace.size(); ++i) {
    double d = trace[i].grad_norm_sq - mean;
    var += d * d;
  }
  var /= static_cast<double>(n_tail - 1);
  return {mean, std::sqrt(var)};
}

std::vector<LowerBoundRow> run_lower_bound_experiment(double L, double w_star, double tau,
                                                      Eigen::Index D, double sigma2,
                                                      const std::vector<double>& alpha_list,
                                                      long K,
                                                      const std::vector<std::uint64_t>& seeds) {
  if (alpha_list.empty()) throw std::invalid_argument("alpha_list must be nonempty");
  if (seeds.empty()) throw std::invalid_argument("seeds must be nonempty");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  LowerBoundQuadratic problem = make_lower_bound_problem(L, w_star, tau, D);
  double sigma = std::sqrt(sigma2);
  for (double alpha : alpha_list) validate_lower_bound_constraints(problem, sigma, alpha);
  NoiseModel noise = NoiseModel::two_point_lower_bound(sigma2, tau);

  std::vector<LowerBoundRow> rows;
  rows.reserve(alpha_list.size() * seeds.size());
  for (double alpha : alpha_list) {
    for (std::uint64_t seed : seeds) {
      Rng rng(derive_seed(seed, "lower_bound"));
      AnalogTile tile(problem.initial_point(), DeviceModel::asymmetric_linear(tau));
      OptimizerState state = OptimizerState::analog_sgd(std::move(tile), alpha);
      std::vector<TraceRecord> trace = run(problem, state, noise, rng, K, 1);
      double avg = 0.0;
      for (long k = 0; k < K; ++k) avg += trace[static_cast<std::size_t>(k)].grad_norm_sq;
      avg /= static_cast<double>(K);
      double sk = amplification_factor(trace);
      double s2sk = sigma2 * sk;
      rows.push_back({alpha, seed, avg, s2sk, 4.0 * s2sk, avg - s2sk});
    }
  }
  return rows;
}

DriftResult drift_experiment(Algo algo, const DeviceModel& device, double alpha, double beta,
                             double sigma2, double w0, long n_trials, Rng& rng) {
  if (n_trials < 2) throw std::invalid_argument("n_trials must be >= 2");
  if (w0 == 0.0) throw std::invalid_argument("w0 must be nonzero");
  NoiseModel noise = NoiseModel::gaussian_iid(sigma2);
  Eigen::MatrixXd w_init = Eigen::MatrixXd::Constant(1, 1, w0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long t = 0; t < n_trials; ++t) {
    OptimizerState state = [&] {
      switch (algo) {
        case Algo::DigitalSGD:
          return OptimizerState::digital_sgd(w_init, alpha);
        case Algo::AnalogSGD:
          return OptimizerState::analog_sgd(AnalogTile(w_init, device), alpha);
        case Algo::TikiTaka:
          return OptimizerState::tiki_taka(AnalogTile(w_init, device), alpha, beta);
      }
      throw std::logic_error("unreachable algo");
    }();
    Eigen::MatrixXd g = sample(noise, 1, 1, &state.W.values(), rng);
    step(state, g);
    double d = state.W.values()(0, 0) - w0;
    sum += d;
    sum_sq += d * d;
  }
  double n = static_cast<double>(n_trials);
  double mean = sum / n;
  double var = (sum_sq - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace asim
