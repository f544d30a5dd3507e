#include "asim/config.hpp"

#include <fstream>

namespace asim {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::LrSweep: return "LrSweep";
    case Experiment::DynamicMatch: return "DynamicMatch";
    case Experiment::TauSweep: return "TauSweep";
    case Experiment::SigmaSweep: return "SigmaSweep";
    case Experiment::InitSweep: return "InitSweep";
    case Experiment::LowerBound: return "LowerBound";
    case Experiment::Drift: return "Drift";
    case Experiment::FcnTrain: return "FcnTrain";
  }
  throw ConfigError("unknown experiment enum value");
}

Experiment experiment_from_string(const std::string& s) {
  if (s == "LrSweep") return Experiment::LrSweep;
  if (s == "DynamicMatch") return Experiment::DynamicMatch;
  if (s == "TauSweep") return Experiment::TauSweep;
  if (s == "SigmaSweep") return Experiment::SigmaSweep;
  if (s == "InitSweep") return Experiment::InitSweep;
  if (s == "LowerBound") return Experiment::LowerBound;
  if (s == "Drift") return Experiment::Drift;
  if (s == "FcnTrain") return Experiment::FcnTrain;
  throw ConfigError("experiment: unknown value '" + s + "'");
}

DeviceModel DeviceConfig::to_model() const {
  try {
    if (kind == "Ideal") return DeviceModel::ideal();
    if (kind == "AsymmetricLinear") return DeviceModel::asymmetric_linear(tau, w_sym);
    if (kind == "LinearStep") return DeviceModel::linear_step(tau_max, tau_min, w_sym);
    if (kind == "PowerStep") return DeviceModel::power_step(tau_max, tau_min, gamma_plus, gamma_minus);
    if (kind == "ExponentialStep")
      return DeviceModel::exponential_step(tau_max, tau_min, gamma_plus, gamma_minus);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  throw ConfigError("device.kind: unknown value '" + kind + "'");
}

NoiseModel NoiseConfig::to_model(double tau) const {
  try {
    if (kind == "None") return NoiseModel::none();
    if (kind == "GaussianIID") return NoiseModel::gaussian_iid(sigma2);
    if (kind == "TwoPointLowerBound") return NoiseModel::two_point_lower_bound(sigma2, tau);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  throw ConfigError("noise.kind: unknown value '" + kind + "'");
}

Algo OptimConfig::to_algo() const {
  if (algo == "DigitalSGD") return Algo::DigitalSGD;
  if (algo == "AnalogSGD") return Algo::AnalogSGD;
  if (algo == "TikiTaka") return Algo::TikiTaka;
  throw ConfigError("optim.algo: unknown value '" + algo + "'");
}

TransferMode OptimConfig::to_transfer() const {
  if (transfer_mode == "Full") return TransferMode::Full;
  if (transfer_mode == "ColumnCyclic") return TransferMode::ColumnCyclic;
  throw ConfigError("optim.transfer_mode: unknown value '" + transfer_mode + "'");
}

UpdateMode OptimConfig::to_update_mode() const {
  if (update_mode == "Closed") return UpdateMode::Closed;
  if (update_mode == "Pulsed") return UpdateMode::Pulsed;
  throw ConfigError("optim.update_mode: unknown value '" + update_mode + "'");
}

ExperimentConfig ExperimentConfig::preset(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::LrSweep:
      c.output_dir = "out/lr_sweep";
      break;
    case Experiment::DynamicMatch:
      c.output_dir = "out/dynamic_match";
      c.device.bl_max = 300;  // dw_min is set per tau as 2*tau/300 by the runner
      c.noise.seed = 7;
      c.optim.alpha = 0.03;
      c.optim.n_iters = 2000;
      c.optim.trace_every = 1;
      c.problem.sigma_A2 = 0.04;
      c.problem.sigma_Wstar2 = 0.3;
      c.problem.instance_seed = 777;
      c.sweep.taus = {2.0, 3.0, 4.0};
      break;
    case Experiment::TauSweep:
      c.output_dir = "out/tau_sweep";
      c.sweep.taus = {1.5, 3.0, 6.0};
      break;
    case Experiment::SigmaSweep:
      c.output_dir = "out/sigma_sweep";
      c.sweep.sigma2s = {0.05, 0.1, 0.2};
      break;
    case Experiment::InitSweep:
      c.output_dir = "out/init_sweep";
      break;
    case Experiment::LowerBound:
      c.output_dir = "out/lower_bound";
      c.device.tau = 1.0;
      c.noise.kind = "TwoPointLowerBound";
      c.noise.sigma2 = 0.81;
      c.noise.seed = 5;
      c.sweep.alphas = {0.04, 0.02, 0.01, 0.005, 0.0025};
      c.seeds = {1, 2, 3, 4, 5};
      break;
    case Experiment::Drift:
      c.output_dir = "out/drift";
      c.device.tau = 1.0;
      c.noise.sigma2 = 0.04;
      c.noise.seed = 11;
      c.optim.alpha = 0.1;
      c.optim.beta = 0.5;
      c.seeds = {1};
      break;
    case Experiment::FcnTrain:
      c.output_dir = "out/fcn_train";
      c.device.tau = 1.0;
      c.device.dw_min = 1e-3;
      c.device.bl_max = 1000;
      c.noise.sigma2 = 0.01;
      c.noise.seed = 21;
      c.optim.algo = "TikiTaka";
      c.optim.alpha = 0.05;
      c.optim.beta = 0.01;
      c.optim.n_iters = 40;
      c.optim.trace_every = 2;
      c.problem.kind = "Fcn";
      c.problem.instance_seed = 31;
      c.seeds = {1};
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seeds: list must be nonempty");
  if (output_dir.empty()) throw ConfigError("output_dir: must be nonempty");
  device.to_model();
  noise.to_model(device.tau > 0 ? device.tau : 1.0);
  optim.to_algo();
  optim.to_transfer();
  optim.to_update_mode();
  if (!(optim.alpha > 0.0)) throw ConfigError("optim.alpha: must be > 0");
  if (optim.n_iters < 1) throw ConfigError("optim.n_iters: must be >= 1");
  if (optim.trace_every < 1) throw ConfigError("optim.trace_every: must be >= 1");
  if (problem.kind != "LeastSquares" && problem.kind != "Fcn")
    throw ConfigError("problem.kind: unknown value '" + problem.kind + "'");
  if (problem.D < 1 || problem.D_out < 1) throw ConfigError("problem.D/D_out: must be >= 1");
  if (!(problem.sigma_A2 > 0.0) || !(problem.sigma_Wstar2 > 0.0))
    throw ConfigError("problem.sigma_A2/sigma_Wstar2: must be > 0");

  switch (experiment) {
    case Experiment::LrSweep:
      if (sweep.alphas.empty()) throw ConfigError("sweep.alphas: must be nonempty");
      break;
    case Experiment::DynamicMatch:
    case Experiment::TauSweep:
      if (sweep.taus.empty()) throw ConfigError("sweep.taus: must be nonempty");
      for (double t : sweep.taus)
        if (!(t > 0.0)) throw ConfigError("sweep.taus: entries must be > 0");
      break;
    case Experiment::SigmaSweep:
      if (sweep.sigma2s.empty()) throw ConfigError("sweep.sigma2s: must be nonempty");
      break;
    case Experiment::InitSweep:
      if (sweep.inits.empty()) throw ConfigError("sweep.inits: must be nonempty");
      for (const std::string& s : sweep.inits)
        if (s != "Zero" && s != "Constant" && s != "Gaussian")
          throw ConfigError("sweep.inits: unknown value '" + s + "'");
      break;
    case Experiment::LowerBound:
      if (sweep.alphas.empty()) throw ConfigError("sweep.alphas: must be nonempty");
      if (sweep.K < 1) throw ConfigError("sweep.K: must be >= 1");
      if (noise.kind != "TwoPointLowerBound")
        throw ConfigError("noise.kind: LowerBound requires TwoPointLowerBound");
      if (device.kind != "AsymmetricLinear")
        throw ConfigError("device.kind: LowerBound requires AsymmetricLinear");
      break;
    case Experiment::Drift:
      if (sweep.n_trials < 2) throw ConfigError("sweep.n_trials: must be >= 2");
      if (sweep.w0 == 0.0) throw ConfigError("sweep.w0: must be nonzero");
      if (!(optim.beta > 0.0)) throw ConfigError("optim.beta: Drift requires beta > 0");
      if (noise.kind != "GaussianIID") throw ConfigError("noise.kind: Drift requires GaussianIID");
      break;
    case Experiment::FcnTrain:
      if (problem.kind != "Fcn") throw ConfigError("problem.kind: FcnTrain requires Fcn");
      if (problem.subset_size < 1) throw ConfigError("problem.subset_size: must be >= 1");
      if (problem.n_features < 1 || problem.n_classes < 2)
        throw ConfigError("problem.n_features/n_classes: invalid");
      for (long h : problem.fcn_hidden)
        if (h < 1) throw ConfigError("problem.fcn_hidden: entries must be >= 1");
      break;
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = to_string(experiment);
  j["seeds"] = seeds;
  j["output_dir"] = output_dir;
  j["device"] = {{"kind", device.kind},         {"tau", device.tau},
                 {"tau_max", device.tau_max},   {"tau_min", device.tau_min},
                 {"w_sym", device.w_sym},       {"gamma_plus", device.gamma_plus},
                 {"gamma_minus", device.gamma_minus}, {"dw_min", device.dw_min},
                 {"bl_max", device.bl_max}};
  j["noise"] = {{"kind", noise.kind}, {"sigma2", noise.sigma2}, {"seed", noise.seed}};
  j["optim"] = {{"algo", optim.algo},
                {"alpha", optim.alpha},
                {"beta", optim.beta},
                {"transfer_mode", optim.transfer_mode},
                {"update_mode", optim.update_mode},
                {"n_iters", optim.n_iters},
                {"trace_every", optim.trace_every}};
  j["problem"] = {{"kind", problem.kind},
                  {"D", problem.D},
                  {"D_out", problem.D_out},
                  {"sigma_A2", problem.sigma_A2},
                  {"sigma_Wstar2", problem.sigma_Wstar2},
                  {"instance_seed", problem.instance_seed},
                  {"dataset_dir", problem.dataset_dir},
                  {"subset_size", problem.subset_size},
                  {"n_features", problem.n_features},
                  {"n_classes", problem.n_classes},
                  {"fcn_hidden", problem.fcn_hidden}};
  j["sweep"] = {{"alphas", sweep.alphas},     {"taus", sweep.taus},
                {"sigma2s", sweep.sigma2s},   {"inits", sweep.inits},
                {"init_const", sweep.init_const}, {"init_sigma", sweep.init_sigma},
                {"L", sweep.L},               {"w_star", sweep.w_star},
                {"K", sweep.K},               {"w0", sweep.w0},
                {"n_trials", sweep.n_trials}};
  return j;
}

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out, const std::string& scope) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(scope + key + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  std::string exp_name = "LrSweep";
  read_if(j, "experiment", exp_name, "");
  ExperimentConfig c = preset(experiment_from_string(exp_name));
  read_if(j, "seeds", c.seeds, "");
  read_if(j, "output_dir", c.output_dir, "");
  if (j.contains("device")) {
    const auto& d = j.at("device");
    read_if(d, "kind", c.device.kind, "device.");
    read_if(d, "tau", c.device.tau, "device.");
    read_if(d, "tau_max", c.device.tau_max, "device.");
    read_if(d, "tau_min", c.device.tau_min, "device.");
    read_if(d, "w_sym", c.device.w_sym, "device.");
    read_if(d, "gamma_plus", c.device.gamma_plus, "device.");
    read_if(d, "gamma_minus", c.device.gamma_minus, "device.");
    read_if(d, "dw_min", c.device.dw_min, "device.");
    read_if(d, "bl_max", c.device.bl_max, "device.");
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    read_if(n, "kind", c.noise.kind, "noise.");
    read_if(n, "sigma2", c.noise.sigma2, "noise.");
    read_if(n, "seed", c.noise.seed, "noise.");
  }
  if (j.contains("optim")) {
    const auto& o = j.at("optim");
    read_if(o, "algo", c.optim.algo, "optim.");
    read_if(o, "alpha", c.optim.alpha, "optim.");
    read_if(o, "beta", c.optim.beta, "optim.");
    read_if(o, "transfer_mode", c.optim.transfer_mode, "optim.");
    read_if(o, "update_mode", c.optim.update_mode, "optim.");
    read_if(o, "n_iters", c.optim.n_iters, "optim.");
    read_if(o, "trace_every", c.optim.trace_every, "optim.");
  }
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    read_if(p, "kind", c.problem.kind, "problem.");
    read_if(p, "D", c.problem.D, "problem.");
    read_if(p, "D_out", c.problem.D_out, "problem.");
    read_if(p, "sigma_A2", c.problem.sigma_A2, "problem.");
    read_if(p, "sigma_Wstar2", c.problem.sigma_Wstar2, "problem.");
    read_if(p, "instance_seed", c.problem.instance_seed, "problem.");
    read_if(p, "dataset_dir", c.problem.dataset_dir, "problem.");
    read_if(p, "subset_size", c.problem.subset_size, "problem.");
    read_if(p, "n_features", c.problem.n_features, "problem.");
    read_if(p, "n_classes", c.problem.n_classes, "problem.");
    read_if(p, "fcn_hidden", c.problem.fcn_hidden, "problem.");
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    read_if(s, "alphas", c.sweep.alphas, "sweep.");
    read_if(s, "taus", c.sweep.taus, "sweep.");
    read_if(s, "sigma2s", c.sweep.sigma2s, "sweep.");
    read_if(s, "inits", c.sweep.inits, "sweep.");
    read_if(s, "init_const", c.sweep.init_const, "sweep.");
    read_if(s, "init_sigma", c.sweep.init_sigma, "sweep.");
    read_if(s, "L", c.sweep.L, "sweep.");
    read_if(s, "w_star", c.sweep.w_star, "sweep.");
    read_if(s, "K", c.sweep.K, "sweep.");
    read_if(s, "w0", c.sweep.w0, "sweep.");
    read_if(s, "n_trials", c.sweep.n_trials, "sweep.");
  }
  return c;
}

void apply_override(nlohmann::json& j, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("override: empty key");
  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = dotted_key.find('.', start);
    std::string part = dotted_key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override: malformed key '" + dotted_key + "'");
    if (dot == std::string::npos) {
      nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  for (const auto& [key, value] : overrides) apply_override(j, key, value);
  ExperimentConfig c = ExperimentConfig::from_json(j);
  c.validate();
  return c;
}

}  // namespace asim
