#include "asim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>

#include "asim/analysis.hpp"
#include "asim/csv.hpp"
#include "asim/fcn.hpp"
#include "asim/mnist.hpp"

namespace asim {

namespace {

namespace fs = std::filesystem;

// Tail mean over the last 20% of records (lenient floor of one record, unlike
// the >= 100-record contract of asymptotic_error; summaries must also work
// for short smoke runs).
double tail_mean(const std::vector<TraceRecord>& trace, double TraceRecord::* field) {
  std::size_t n_tail = std::max<std::size_t>(1, static_cast<std::size_t>(trace.size() * 0.2));
  double acc = 0.0;
  for (std::size_t i = trace.size() - n_tail; i < trace.size(); ++i) acc += trace[i].*field;
  return acc / static_cast<double>(n_tail);
}

struct CellResult {
  std::string variant;
  std::uint64_t seed;
  std::uint64_t rng_seed;
};

struct Emitter {
  fs::path dir;
  std::vector<CellResult> cells;

  void trace_file(const std::string& variant, std::uint64_t seed, std::uint64_t rng_seed,
                  const std::vector<TraceRecord>& trace) {
    write_trace_csv(dir / (variant + "_seed" + std::to_string(seed) + ".csv"), trace);
    cells.push_back({variant, seed, rng_seed});
  }

  void metadata(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = cfg.to_json();
    nlohmann::json arr = nlohmann::json::array();
    for (const CellResult& c : cells)
      arr.push_back({{"variant", c.variant}, {"seed", c.seed}, {"rng_seed", c.rng_seed}});
    j["cells"] = arr;
    std::ofstream out(dir / "metadata.json");
    if (!out) throw std::runtime_error("cannot write metadata.json");
    out << j.dump(2) << '\n';
  }
};

// One training run of `algo` on a least-squares instance. The stream tag
// excludes the update mode so closed/pulsed variants share noise streams.
std::vector<TraceRecord> run_ls_cell(const LeastSquaresProblem& problem,
                                     const ExperimentConfig& cfg, Algo algo, double alpha,
                                     double tau, double sigma2, double dw_min, long bl_max,
                                     UpdateMode mode, const Eigen::MatrixXd& W0,
                                     std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  NoiseModel noise = cfg.noise.kind == "None" ? NoiseModel::none()
                                              : NoiseModel::gaussian_iid(sigma2);
  OptimizerState state = [&] {
    switch (algo) {
      case Algo::DigitalSGD:
        return OptimizerState::digital_sgd(W0, alpha);
      case Algo::AnalogSGD:
        return OptimizerState::analog_sgd(
            AnalogTile(W0, DeviceModel::asymmetric_linear(tau, cfg.device.w_sym), dw_min, bl_max),
            alpha, mode);
      case Algo::TikiTaka: {
        double beta = cfg.optim.beta > 0.0 ? cfg.optim.beta : 8.0 * alpha * problem.L();
        return OptimizerState::tiki_taka(
            AnalogTile(W0, DeviceModel::asymmetric_linear(tau, cfg.device.w_sym), dw_min, bl_max),
            alpha, beta, cfg.optim.to_transfer(), mode);
      }
    }
    throw std::logic_error("unreachable algo");
  }();
  return run(problem, state, noise, rng, cfg.optim.n_iters, cfg.optim.trace_every);
}

std::uint64_t cell_seed(const ExperimentConfig& cfg, const std::string& stream_tag,
                        std::uint64_t seed) {
  return derive_seed(derive_seed(cfg.noise.seed, stream_tag), seed);
}

void run_lr_sweep(const ExperimentConfig& cfg, Emitter& em) {
  Rng instance_rng(cfg.problem.instance_seed);
  LeastSquaresProblem problem = make_least_squares(
      cfg.problem.D, cfg.problem.D_out, cfg.problem.sigma_A2, cfg.problem.sigma_Wstar2,
      instance_rng);
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(cfg.problem.D, 1);
  struct AlgoSpec {
    const char* name;
    Algo algo;
  };
  for (double alpha : cfg.sweep.alphas) {
    for (AlgoSpec as : {AlgoSpec{"digital", Algo::DigitalSGD}, AlgoSpec{"analog", Algo::AnalogSGD},
                        AlgoSpec{"tt", Algo::TikiTaka}}) {
      std::string variant = std::string(as.name) + "_alpha" + format_double(alpha);
      for (std::uint64_t seed : cfg.seeds) {
        std::uint64_t rs = cell_seed(cfg, variant, seed);
        em.trace_file(variant, seed, rs,
                      run_ls_cell(problem, cfg, as.algo, alpha, cfg.device.tau, cfg.noise.sigma2,
                                  cfg.device.dw_min, cfg.device.bl_max,
                                  cfg.optim.to_update_mode(), W0, rs));
      }
    }
  }
}

void run_dynamic_match(const ExperimentConfig& cfg, Emitter& em) {
  Rng instance_rng(cfg.problem.instance_seed);
  LeastSquaresProblem problem = make_least_squares(
      cfg.problem.D, cfg.problem.D_out, cfg.problem.sigma_A2, cfg.problem.sigma_Wstar2,
      instance_rng);
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(cfg.problem.D, 1);
  for (double tau : cfg.sweep.taus) {
    // Pulse granularity scales with the device range: 2*tau/bl_max per pulse.
    double dw_min = 2.0 * tau / static_cast<double>(cfg.device.bl_max);
    std::string stream_tag = "tau" + format_double(tau);
    for (std::uint64_t seed : cfg.seeds) {
      std::uint64_t rs = cell_seed(cfg, stream_tag, seed);
      em.trace_file("closed_" + stream_tag, seed, rs,
                    run_ls_cell(problem, cfg, Algo::AnalogSGD, cfg.optim.alpha, tau,
                                cfg.noise.sigma2, dw_min, cfg.device.bl_max, UpdateMode::Closed,
                                W0, rs));
      em.trace_file("pulsed_" + stream_tag, seed, rs,
                    run_ls_cell(problem, cfg, Algo::AnalogSGD, cfg.optim.alpha, tau,
                                cfg.noise.sigma2, dw_min, cfg.device.bl_max, UpdateMode::Pulsed,
                                W0, rs));
    }
  }
}

void run_tau_sweep(const ExperimentConfig& cfg, Emitter& em) {
  Rng instance_rng(cfg.problem.instance_seed);
  LeastSquaresProblem problem = make_least_squares(
      cfg.problem.D, cfg.problem.D_out, cfg.problem.sigma_A2, cfg.problem.sigma_Wstar2,
      instance_rng);
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(cfg.problem.D, 1);
  for (double tau : cfg.sweep.taus) {
    std::string variant = "tau" + format_double(tau);
    for (std::uint64_t seed : cfg.seeds) {
      std::uint64_t rs = cell_seed(cfg, variant, seed);
      em.trace_file(variant, seed, rs,
                    run_ls_cell(problem, cfg, Algo::AnalogSGD, cfg.optim.alpha, tau,
                                cfg.noise.sigma2, cfg.device.dw_min, cfg.device.bl_max,
                                cfg.optim.to_update_mode(), W0, rs));
    }
  }
}

void run_sigma_sweep(const ExperimentConfig& cfg, Emitter& em) {
  Rng instance_rng(cfg.problem.instance_seed);
  LeastSquaresProblem problem = make_least_squares(
      cfg.problem.D, cfg.problem.D_out, cfg.problem.sigma_A2, cfg.problem.sigma_Wstar2,
      instance_rng);
  Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(cfg.problem.D, 1);
  for (double sigma2 : cfg.sweep.sigma2s) {
    std::string variant = "sigma" + format_double(sigma2);
    for (std::uint64_t seed : cfg.seeds) {
      std::uint64_t rs = cell_seed(cfg, variant, seed);
      em.trace_file(variant, seed, rs,
                    run_ls_cell(problem, cfg, Algo::AnalogSGD, cfg.optim.alpha, cfg.device.tau,
                                sigma2, cfg.device.dw_min, cfg.device.bl_max,
                                cfg.optim.to_update_mode(), W0, rs));
    }
  }
}

void run_init_sweep(const ExperimentConfig& cfg, Emitter& em) {
  Rng instance_rng(cfg.problem.instance_seed);
  LeastSquaresProblem problem = make_least_squares(
      cfg.problem.D, cfg.problem.D_out, cfg.problem.sigma_A2, cfg.problem.sigma_Wstar2,
      instance_rng);
  for (const std::string& init : cfg.sweep.inits) {
    Eigen::MatrixXd W0;
    std::string variant;
    if (init == "Zero") {
      W0 = Eigen::MatrixXd::Zero(cfg.problem.D, 1);
      variant = "init_zero";
    } else if (init == "Constant") {
      W0 = Eigen::MatrixXd::Constant(cfg.problem.D, 1, cfg.sweep.init_const);
      variant = "init_const";
    } else {
      // Same draw for every seed so only the noise stream varies.
      Rng init_rng(derive_seed(cfg.problem.instance_seed, "init_gauss"));
      W0.resize(cfg.problem.D, 1);
      for (Eigen::Index i = 0; i < W0.size(); ++i)
        W0(i, 0) = cfg.sweep.init_sigma * init_rng.normal();
      variant = "init_gauss";
    }
    for (std::uint64_t seed : cfg.seeds) {
      std::uint64_t rs = cell_seed(cfg, variant, seed);
      em.trace_file(variant, seed, rs,
                    run_ls_cell(problem, cfg, Algo::AnalogSGD, cfg.optim.alpha, cfg.device.tau,
                                cfg.noise.sigma2, cfg.device.dw_min, cfg.device.bl_max,
                                cfg.optim.to_update_mode(), W0, rs));
    }
  }
}

void run_lower_bound(const ExperimentConfig& cfg, Emitter& em) {
  std::vector<LowerBoundRow> rows = run_lower_bound_experiment(
      cfg.sweep.L, cfg.sweep.w_star, cfg.device.tau, cfg.problem.D, cfg.noise.sigma2,
      cfg.sweep.alphas, cfg.sweep.K, cfg.seeds);
  std::ofstream out(em.dir / "lower_bound.csv");
  if (!out) throw std::runtime_error("cannot write lower_bound.csv");
  out << "alpha,seed,avg_grad_norm_sq,sigma2_sk,four_sigma2_sk,residual\n";
  for (const LowerBoundRow& r : rows) {
    out << format_double(r.alpha) << ',' << r.seed << ',' << format_double(r.avg_grad_norm_sq)
        << ',' << format_double(r.sigma2_sk) << ',' << format_double(r.four_sigma2_sk) << ','
        << format_double(r.residual) << '\n';
  }

  // Across-seed summary per alpha.
  std::ofstream sum(em.dir / "summary.csv");
  if (!sum) throw std::runtime_error("cannot write summary.csv");
  sum << "variant,metric,mean,std,n_seeds\n";
  for (double alpha : cfg.sweep.alphas) {
    for (auto [metric, field] :
         {std::pair{"avg_grad_norm_sq", &LowerBoundRow::avg_grad_norm_sq},
          std::pair{"sigma2_sk", &LowerBoundRow::sigma2_sk},
          std::pair{"residual", &LowerBoundRow::residual}}) {
      std::vector<double> vals;
      for (const LowerBoundRow& r : rows)
        if (r.alpha == alpha) vals.push_back(r.*field);
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      double sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
      sum << "alpha" << format_double(alpha) << ',' << metric << ',' << format_double(mean) << ','
          << format_double(sd) << ',' << vals.size() << '\n';
    }
  }
  for (std::uint64_t seed : cfg.seeds) em.cells.push_back({"lower_bound", seed, seed});
}

void run_drift(const ExperimentConfig& cfg, Emitter& em) {
  DeviceModel device = cfg.device.to_model();
  double sigma_c = std::sqrt(cfg.noise.sigma2);
  double e_abs = folded_normal_mean(0.0, sigma_c);
  double w0 = cfg.sweep.w0;
  std::ofstream out(em.dir / "drift.csv");
  if (!out) throw std::runtime_error("cannot write drift.csv");
  out << "algo,mean_drift,std_error,predicted_drift\n";
  struct Spec {
    const char* name;
    Algo algo;
    double predicted;
  };
  double tau = cfg.device.tau;
  for (const Spec& s :
       {Spec{"digital", Algo::DigitalSGD, 0.0},
        Spec{"analog", Algo::AnalogSGD, -(cfg.optim.alpha / tau) * e_abs * w0},
        Spec{"tikitaka", Algo::TikiTaka, -(cfg.optim.alpha * cfg.optim.beta / tau) * e_abs * w0}}) {
    Rng rng(derive_seed(cfg.noise.seed, s.name));
    DriftResult r = drift_experiment(s.algo, device, cfg.optim.alpha, cfg.optim.beta,
                                     cfg.noise.sigma2, w0, cfg.sweep.n_trials, rng);
    out << s.name << ',' << format_double(r.mean_drift) << ',' << format_double(r.std_error)
        << ',' << format_double(s.predicted) << '\n';
    em.cells.push_back({s.name, 0, derive_seed(cfg.noise.seed, s.name)});
  }
}

void run_fcn_train(const ExperimentConfig& cfg, Emitter& em) {
  Dataset ds;
  if (cfg.problem.dataset_dir.empty()) {
    Rng data_rng(derive_seed(cfg.problem.instance_seed, "blobs"));
    ds = make_blobs(cfg.problem.subset_size, cfg.problem.n_features,
                    static_cast<int>(cfg.problem.n_classes), data_rng);
  } else {
    ds = load_mnist_subset(cfg.problem.dataset_dir, cfg.problem.subset_size);
  }
  std::vector<Eigen::Index> sizes;
  sizes.push_back(ds.X.cols());
  for (long h : cfg.problem.fcn_hidden) sizes.push_back(h);
  sizes.push_back(cfg.problem.n_classes);
  FcnProblem problem(sizes, std::move(ds.X), std::move(ds.labels));

  Rng init_rng(derive_seed(cfg.problem.instance_seed, "fcn_init"));
  Eigen::MatrixXd W0 = problem.default_init(init_rng);
  DeviceModel device = cfg.device.to_model();
  for (std::uint64_t seed : cfg.seeds) {
    std::uint64_t rs = cell_seed(cfg, "fcn", seed);
    Rng rng(rs);
    NoiseModel noise = cfg.noise.to_model(cfg.device.tau);
    OptimizerState state = [&] {
      switch (cfg.optim.to_algo()) {
        case Algo::DigitalSGD:
          return OptimizerState::digital_sgd(W0, cfg.optim.alpha);
        case Algo::AnalogSGD:
          return OptimizerState::analog_sgd(
              AnalogTile(W0, device, cfg.device.dw_min, cfg.device.bl_max), cfg.optim.alpha,
              cfg.optim.to_update_mode());
        case Algo::TikiTaka:
          if (!(cfg.optim.beta > 0.0))
            throw ConfigError("optim.beta: required for TikiTaka on Fcn (no known L)");
          return OptimizerState::tiki_taka(
              AnalogTile(W0, device, cfg.device.dw_min, cfg.device.bl_max), cfg.optim.alpha,
              cfg.optim.beta, cfg.optim.to_transfer(), cfg.optim.to_update_mode());
      }
      throw std::logic_error("unreachable algo");
    }();
    em.trace_file("fcn", seed, rs,
                  run(problem, state, noise, rng, cfg.optim.n_iters, cfg.optim.trace_every));
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Emitter em{fs::path(cfg.output_dir), {}};
  std::error_code ec;
  fs::create_directories(em.dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir " + em.dir.string());

  switch (cfg.experiment) {
    case Experiment::LrSweep: run_lr_sweep(cfg, em); break;
    case Experiment::DynamicMatch: run_dynamic_match(cfg, em); break;
    case Experiment::TauSweep: run_tau_sweep(cfg, em); break;
    case Experiment::SigmaSweep: run_sigma_sweep(cfg, em); break;
    case Experiment::InitSweep: run_init_sweep(cfg, em); break;
    case Experiment::LowerBound: run_lower_bound(cfg, em); break;
    case Experiment::Drift: run_drift(cfg, em); break;
    case Experiment::FcnTrain: run_fcn_train(cfg, em); break;
  }
  // Trace-emitting experiments get their summary from the files on disk so
  // that summarize() over the directory agrees byte-for-byte.
  if (cfg.experiment != Experiment::LowerBound && cfg.experiment != Experiment::Drift)
    summarize_dir(em.dir, em.dir / "summary.csv");
  em.metadata(cfg);
}

void summarize_dir(const fs::path& trace_dir, const fs::path& out_csv) {
  std::map<std::string, std::vector<fs::path>> by_variant;
  for (const auto& entry : fs::directory_iterator(trace_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    std::string stem = entry.path().stem().string();
    if (stem == "summary" || stem == "lower_bound" || stem == "drift") continue;
    std::size_t pos = stem.rfind("_seed");
    std::string variant = pos == std::string::npos ? stem : stem.substr(0, pos);
    by_variant[variant].push_back(entry.path());
  }
  if (by_variant.empty()) throw std::runtime_error("no trace CSVs in " + trace_dir.string());

  std::ofstream out(out_csv);
  if (!out) throw std::runtime_error("cannot write " + out_csv.string());
  out << "variant,metric,mean,std,n_seeds\n";
  for (auto& [variant, files] : by_variant) {
    std::sort(files.begin(), files.end());
    for (auto [metric, field] : {std::pair{"tail_loss", &TraceRecord::loss},
                                 std::pair{"tail_grad_norm_sq", &TraceRecord::grad_norm_sq}}) {
      std::vector<double> vals;
      for (const fs::path& f : files) vals.push_back(tail_mean(read_trace_csv(f), field));
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      double sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
      out << variant << ',' << metric << ',' << format_double(mean) << ',' << format_double(sd)
          << ',' << vals.size() << '\n';
    }
  }
}

}  // namespace asim
