#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "asim/config.hpp"
#include "asim/csv.hpp"
#include "asim/experiments.hpp"

using namespace asim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("every preset validates and round-trips through JSON") {
  for (Experiment e : {Experiment::LrSweep, Experiment::DynamicMatch, Experiment::TauSweep,
                       Experiment::SigmaSweep, Experiment::InitSweep, Experiment::LowerBound,
                       Experiment::Drift, Experiment::FcnTrain}) {
    ExperimentConfig c = ExperimentConfig::preset(e);
    CHECK_NOTHROW(c.validate());
    ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.to_json().dump() == c.to_json().dump());
    CHECK(experiment_from_string(to_string(e)) == e);
  }
}

TEST_CASE("from_json merges over the experiment preset") {
  nlohmann::json j = {{"experiment", "Drift"}, {"optim", {{"alpha", 0.2}}}};
  ExperimentConfig c = ExperimentConfig::from_json(j);
  CHECK(c.experiment == Experiment::Drift);
  CHECK(c.optim.alpha == 0.2);
  CHECK(c.noise.sigma2 == 0.04);  // untouched preset value
  CHECK(c.optim.beta == 0.5);
  CHECK(c.output_dir == "out/drift");
}

TEST_CASE("dotted overrides patch the config tree") {
  nlohmann::json j = ExperimentConfig::preset(Experiment::LrSweep).to_json();
  apply_override(j, "optim.alpha", "0.07");
  apply_override(j, "device.kind", "Ideal");
  apply_override(j, "sweep.alphas", "[0.1,0.2]");
  apply_override(j, "output_dir", "elsewhere");
  ExperimentConfig c = ExperimentConfig::from_json(j);
  CHECK(c.optim.alpha == 0.07);
  CHECK(c.device.kind == "Ideal");
  REQUIRE(c.sweep.alphas.size() == 2);
  CHECK(c.sweep.alphas[1] == 0.2);
  CHECK(c.output_dir == "elsewhere");

  CHECK_THROWS_AS(apply_override(j, "", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "optim..alpha", "1"), ConfigError);
}

TEST_CASE("validation failures name the offending key") {
  auto message_of = [](ExperimentConfig c) {
    try {
      c.validate();
      return std::string("no error");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
  };

  ExperimentConfig c = ExperimentConfig::preset(Experiment::LrSweep);
  c.seeds.clear();
  CHECK(message_of(c).find("seeds") != std::string::npos);

  c = ExperimentConfig::preset(Experiment::LrSweep);
  c.optim.alpha = -1.0;
  CHECK(message_of(c).find("optim.alpha") != std::string::npos);

  c = ExperimentConfig::preset(Experiment::LrSweep);
  c.device.kind = "Quantum";
  CHECK(message_of(c).find("device.kind") != std::string::npos);

  c = ExperimentConfig::preset(Experiment::LowerBound);
  c.noise.kind = "GaussianIID";
  CHECK(message_of(c).find("noise.kind") != std::string::npos);

  c = ExperimentConfig::preset(Experiment::Drift);
  c.optim.beta = 0.0;
  CHECK(message_of(c).find("optim.beta") != std::string::npos);

  c = ExperimentConfig::preset(Experiment::FcnTrain);
  c.problem.kind = "LeastSquares";
  CHECK(message_of(c).find("problem.kind") != std::string::npos);

  CHECK_THROWS_AS(experiment_from_string("Unknown"), ConfigError);
}

TEST_CASE("load_config reads files and applies overrides in order") {
  fs::path dir = fresh_dir("asim_test_cfg_load");
  fs::path good = dir / "good.json";
  std::ofstream(good) << R"({"experiment":"TauSweep","optim":{"n_iters":50}})";
  ExperimentConfig c = load_config(good.string(), {{"optim.n_iters", "60"}});
  CHECK(c.experiment == Experiment::TauSweep);
  CHECK(c.optim.n_iters == 60);

  CHECK_THROWS_AS(load_config((dir / "missing.json").string(), {}), ConfigError);
  fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{not json";
  CHECK_THROWS_AS(load_config(bad.string(), {}), ConfigError);
  fs::path invalid = dir / "invalid.json";
  std::ofstream(invalid) << R"({"experiment":"LrSweep","seeds":[]})";
  CHECK_THROWS_AS(load_config(invalid.string(), {}), ConfigError);
}

TEST_CASE("trace CSV round-trips exactly") {
  fs::path dir = fresh_dir("asim_test_csv");
  std::vector<TraceRecord> trace = {{0, 1.5, 0.25, 0.1, 0.0, 0.01},
                                    {10, 0.7531248921, 3.3e-7, 0.99999, 0.5, 123.456}};
  fs::path f = dir / "t.csv";
  write_trace_csv(f, trace);
  std::vector<TraceRecord> back = read_trace_csv(f);
  REQUIRE(back.size() == trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(back[i].k == trace[i].k);
    CHECK(back[i].loss == trace[i].loss);
    CHECK(back[i].grad_norm_sq == trace[i].grad_norm_sq);
    CHECK(back[i].w_inf == trace[i].w_inf);
    CHECK(back[i].p_inf == trace[i].p_inf);
    CHECK(back[i].s_term == trace[i].s_term);
  }

  fs::path wrong = dir / "wrong.csv";
  std::ofstream(wrong) << "k,loss\n0,1\n";
  CHECK_THROWS_AS(read_trace_csv(wrong), std::runtime_error);

  CHECK(format_double(0.1) == "0.1");
  for (double x : {1e300, -0.0, 3.141592653589793, 1.0 / 3.0, 2.2250738585072014e-308})
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("experiment outputs are byte-identical across runs") {
  ExperimentConfig cfg = ExperimentConfig::preset(Experiment::LrSweep);
  cfg.problem.D = 8;
  cfg.problem.D_out = 12;
  cfg.optim.n_iters = 120;
  cfg.optim.trace_every = 10;
  cfg.sweep.alphas = {0.1};
  cfg.seeds = {1, 2};

  fs::path a = fresh_dir("asim_test_repro_a");
  fs::path b = fresh_dir("asim_test_repro_b");
  cfg.output_dir = a.string();
  run_experiment(cfg);
  cfg.output_dir = b.string();
  run_experiment(cfg);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    fs::path name = entry.path().filename();
    if (name == "metadata.json") continue;  // embeds output_dir, compared below
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++compared;
  }
  CHECK(compared == 7);  // 3 variants x 2 seeds + summary.csv

  // Metadata differs only in the configured output_dir.
  nlohmann::json ma = nlohmann::json::parse(slurp(a / "metadata.json"));
  nlohmann::json mb = nlohmann::json::parse(slurp(b / "metadata.json"));
  ma["config"]["output_dir"] = "";
  mb["config"]["output_dir"] = "";
  CHECK(ma.dump() == mb.dump());

  // A standalone summarize pass reproduces the runner's summary byte-for-byte.
  fs::path regen = a / "summary_regen.csv";
  summarize_dir(a, regen);
  CHECK(slurp(regen) == slurp(a / "summary.csv"));
}
