#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "asim/device.hpp"
#include "asim/noise.hpp"
#include "asim/optim.hpp"

namespace asim {

inline constexpr const char* kVersion = "asim 1.0.0";

// Raised for malformed or inconsistent configuration; the CLI maps it to
// exit code 1 and prints the failing key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  LrSweep,       // learning-rate halving: digital vs analog vs Tiki-Taka plateaus
  DynamicMatch,  // pulsed vs closed-form trajectory agreement across tau
  TauSweep,      // plateau height vs device range
  SigmaSweep,    // plateau height vs noise variance
  InitSweep,     // plateau independence from the initial point
  LowerBound,    // identical-coordinate quadratic with two-point noise
  Drift,         // one-step zero-gradient drift statistics per algorithm
  FcnTrain,      // small fully-connected classifier training run
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct DeviceConfig {
  std::string kind = "AsymmetricLinear";
  double tau = 3.0;
  double tau_max = 1.0;
  double tau_min = -1.0;
  double w_sym = 0.0;
  double gamma_plus = 1.0;
  double gamma_minus = 1.0;
  double dw_min = 1e-4;
  long bl_max = 800;

  DeviceModel to_model() const;  // throws ConfigError on unknown kind
};

struct NoiseConfig {
  std::string kind = "GaussianIID";
  double sigma2 = 0.1;
  std::uint64_t seed = 99;  // base seed; each run cell derives its own stream

  // tau is taken from the device for the state-dependent kind.
  NoiseModel to_model(double tau) const;
};

struct OptimConfig {
  std::string algo = "AnalogSGD";
  double alpha = 0.05;
  double beta = 0.0;  // 0 = derive as 8*alpha*L when the problem exposes L
  std::string transfer_mode = "Full";
  std::string update_mode = "Closed";
  long n_iters = 20000;
  long trace_every = 10;

  Algo to_algo() const;
  TransferMode to_transfer() const;
  UpdateMode to_update_mode() const;
};

struct ProblemConfig {
  std::string kind = "LeastSquares";  // LeastSquares | Fcn
  long D = 40;
  long D_out = 100;
  double sigma_A2 = 0.002;
  double sigma_Wstar2 = 0.2025;
  std::uint64_t instance_seed = 12345;  // fixed across run seeds
  std::string dataset_dir;              // empty = synthetic blobs
  long subset_size = 512;
  long n_features = 784;
  long n_classes = 10;
  std::vector<long> fcn_hidden = {256, 128};
};

// Experiment-specific knobs; unused fields are ignored by other experiments.
struct SweepConfig {
  std::vector<double> alphas = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> taus = {1.5, 3.0, 6.0};
  std::vector<double> sigma2s = {0.05, 0.1, 0.2};
  std::vector<std::string> inits = {"Zero", "Constant", "Gaussian"};
  double init_const = 0.8;
  double init_sigma = 0.3;
  double L = 1.0;        // lower-bound instance curvature
  double w_star = 0.1;   // lower-bound instance minimizer coordinate
  long K = 100000;       // lower-bound iteration count
  double w0 = 0.5;       // drift starting weight
  long n_trials = 200000;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::LrSweep;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string output_dir = "out";
  DeviceConfig device;
  NoiseConfig noise;
  OptimConfig optim;
  ProblemConfig problem;
  SweepConfig sweep;

  // Fully-resolved defaults per experiment, runnable as-is.
  static ExperimentConfig preset(Experiment e);

  void validate() const;  // throws ConfigError naming the failing key

  nlohmann::json to_json() const;
  // Starts from preset(json["experiment"]) and merges the given keys over it.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Applies a dotted-path override such as "optim.alpha=0.05" onto a config
// JSON tree; the value is parsed as JSON when possible, else kept as string.
void apply_override(nlohmann::json& j, const std::string& dotted_key, const std::string& value);

// Reads a JSON config file and applies overrides in order.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace asim
