#pragma once

#include <cstdint>
#include <vector>

#include "asim/optim.hpp"

namespace asim {

// S_K = (1/K) sum_{k=0}^{K-1} s_term over the first K records of a trace
// holding K+1 records. Throws std::runtime_error once any used record has
// saturated (non-finite s_term), std::invalid_argument for traces with < 2
// records.
double amplification_factor(const std::vector<TraceRecord>& trace);

struct TailStats {
  double mean;
  double std;
};

// Mean/std of grad_norm_sq over the final tail_fraction of records. The tail
// must contain at least 100 records.
TailStats asymptotic_error(const std::vector<TraceRecord>& trace, double tail_fraction = 0.2);

struct LowerBoundRow {
  double alpha;
  std::uint64_t seed;
  double avg_grad_norm_sq;  // (1/K) sum of exact ||grad f(W_k)||^2, k = 0..K-1
  double sigma2_sk;         // sigma^2 * S_K from the same trace
  double four_sigma2_sk;    // 4 sigma^2 * S_K
  double residual;          // avg_grad_norm_sq - sigma2_sk, predicted Theta(alpha)
};

// Runs Analog SGD with the state-dependent two-point noise on the identical-
// coordinate quadratic, starting at the minimizer, once per (alpha, seed).
// Validates the instance constraints and each alpha's admissibility before
// any run starts; violations raise std::domain_error naming the inequality.
std::vector<LowerBoundRow> run_lower_bound_experiment(double L, double w_star, double tau,
                                                      Eigen::Index D, double sigma2,
                                                      const std::vector<double>& alpha_list,
                                                      long K,
                                                      const std::vector<std::uint64_t>& seeds);

struct DriftResult {
  double mean_drift;  // average one-step displacement of the weight
  double std_error;
};

// Zero-gradient oracle: averages the one-step displacement of a scalar weight
// started at w0 over n_trials independent Gaussian noise draws (total
// variance sigma2 on the single coordinate). TikiTaka restarts P = 0 every
// trial.
DriftResult drift_experiment(Algo algo, const DeviceModel& device, double alpha, double beta,
                             double sigma2, double w0, long n_trials, Rng& rng);

}  // namespace asim
