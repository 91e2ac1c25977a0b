// jointcs command line front end: instance generation, SOMP runs,
// ensemble metrics, RIC evaluation, condition checks, and Monte Carlo
// sweeps with CSV emission.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jointcs/analysis.hpp"
#include "jointcs/csv.hpp"
#include "jointcs/experiments.hpp"
#include "jointcs/generation.hpp"
#include "jointcs/solver.hpp"
#include "jointcs/version.hpp"

namespace {

using jointcs::Index;
using nlohmann::json;

std::vector<jointcs::Index> default_grid() {
  std::vector<jointcs::Index> g;
  for (Index v = 5; v <= 100; v += 5) g.push_back(v);
  return g;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Precedence: explicit --seed, then JOINTCS_SEED, then 0.
std::uint64_t resolve_seed(bool seed_given, std::uint64_t flag_value) {
  if (seed_given) return flag_value;
  if (const char* env = std::getenv("JOINTCS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("JOINTCS_SEED is not an unsigned integer: " +
                                  std::string(env));
    }
  }
  return 0;
}

std::vector<jointcs::SignalType> parse_types(const std::string& flag) {
  using jointcs::SignalType;
  if (flag == "all")
    return {SignalType::TypeI, SignalType::TypeII, SignalType::TypeIII,
            SignalType::TypeIV};
  if (flag == "1") return {SignalType::TypeI};
  if (flag == "2") return {SignalType::TypeII};
  if (flag == "3") return {SignalType::TypeIII};
  if (flag == "4") return {SignalType::TypeIV};
  throw CLI::ValidationError("--type", "must be one of {1,2,3,4,all}");
}

jointcs::Detection parse_detect(const std::string& flag) {
  if (flag == "a") return jointcs::Detection::A;
  if (flag == "b") return jointcs::Detection::B;
  throw CLI::ValidationError("--detect", "must be one of {a,b}");
}

jointcs::Estimation parse_estimate(const std::string& flag) {
  if (flag == "c") return jointcs::Estimation::C;
  if (flag == "d") return jointcs::Estimation::D;
  throw CLI::ValidationError("--estimate", "must be one of {c,d}");
}

std::vector<jointcs::Algorithm> parse_algorithms(
    const std::vector<std::string>& names) {
  std::vector<jointcs::Algorithm> algos;
  for (const std::string& name : names) {
    const auto algo = jointcs::algorithm_from_name(name);
    if (!algo) {
      std::string valid;
      for (jointcs::Algorithm a : jointcs::kAllAlgorithms) {
        if (!valid.empty()) valid += ", ";
        valid += std::string(jointcs::algorithm_name(a));
      }
      throw CLI::ValidationError("--algorithms",
                                 name + " is not one of {" + valid + "}");
    }
    algos.push_back(*algo);
  }
  return algos;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  return ofs;
}

void write_metadata(const std::filesystem::path& out_dir, json metadata) {
  metadata["tool"] = "jointcs";
  metadata["version"] = jointcs::kVersion;
  metadata["timestamp_utc"] = utc_timestamp();
  auto ofs = open_output(out_dir / "metadata.json");
  ofs << metadata.dump(2) << '\n';
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  return dir;
}

std::string join_indices_one_based(const jointcs::SupportSet& s) {
  std::string out;
  for (Index idx : s) {
    if (!out.empty()) out += ' ';
    out += std::to_string(idx + 1);
  }
  return out.empty() ? "(empty)" : out;
}

// Shared instance flags for solve / metrics / ric / check.
struct InstanceFlags {
  Index n = 100;
  Index m = 50;
  Index k = 10;
  Index l = 3;
  std::string type = "1";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = ".";
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& f, bool with_m = true) {
  cmd->add_option("--n", f.n, "signal dimension")->capture_default_str();
  if (with_m)
    cmd->add_option("--m", f.m, "measurements per sensor")->capture_default_str();
  cmd->add_option("--k", f.k, "sparsity")->capture_default_str();
  cmd->add_option("--l", f.l, "number of sensors")->capture_default_str();
  cmd->add_option("--type", f.type, "signal type {1,2,3,4}")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed (falls back to JOINTCS_SEED)")
      ->each([&f](const std::string&) { f.seed_given = true; });
  cmd->add_option("--out", f.out, "directory for the metadata sidecar")
      ->capture_default_str();
}

jointcs::SignalType single_type(const std::string& flag) {
  const auto types = parse_types(flag);
  if (types.size() != 1)
    throw CLI::ValidationError("--type", "this command needs a single type");
  return types.front();
}

jointcs::Problem make_instance(const InstanceFlags& f, jointcs::SignalType type,
                               const jointcs::Seed& seed) {
  const jointcs::ProblemDims dims{f.n, f.m, f.l, f.k};
  dims.validate();
  const jointcs::SupportSet omega = jointcs::draw_support(f.n, f.k, seed);
  jointcs::SignalEnsemble signals = jointcs::gen_signals(type, dims, omega, seed);
  jointcs::SensingEnsemble sensing = jointcs::draw_sensing(dims, seed);
  return jointcs::Problem{dims, std::move(signals), std::move(sensing)};
}

json instance_json(const InstanceFlags& f, std::uint64_t seed) {
  return json{{"n", f.n},         {"m", f.m},   {"k", f.k},
              {"l", f.l},         {"type", f.type}, {"seed", seed}};
}

int cmd_solve(const InstanceFlags& f, const std::string& detect,
              const std::string& estimate) {
  const std::uint64_t seed_value = resolve_seed(f.seed_given, f.seed);
  const jointcs::Seed seed(seed_value);
  const jointcs::SignalType type = single_type(f.type);
  const jointcs::Problem problem = make_instance(f, type, seed);
  const jointcs::MeasurementEnsemble ys =
      jointcs::sense(problem.sensing, problem.signals);

  const jointcs::SolverConfig config{parse_detect(detect),
                                     parse_estimate(estimate)};
  const jointcs::RecoveryResult result =
      jointcs::somp_run(problem.sensing, ys, f.k, config);

  const double err = jointcs::recovery_error(result.estimates, problem.signals.x);
  const bool full = err <= jointcs::kFullSuccessThreshold;
  const bool supp = jointcs::success_support(problem.signals.omega, result.support);

  std::cout << "instance: n=" << f.n << " m=" << f.m << " k=" << f.k
            << " l=" << f.l << " type=" << f.type << " seed=" << seed_value
            << '\n';
  std::cout << "solver: detect=" << detect << " estimate=" << estimate
            << " iterations=" << result.iterations_run
            << " early_stop=" << (result.early_stopped ? "yes" : "no") << '\n';
  std::cout << "true support (1-based):     "
            << join_indices_one_based(problem.signals.omega) << '\n';
  std::cout << "detected support (1-based): "
            << join_indices_one_based(result.support) << '\n';
  for (Index j = 0; j < f.l; ++j) {
    const double col_err =
        (result.estimates.col(j) - problem.signals.x.col(j)).norm();
    std::cout << "sensor " << j + 1
              << " error: " << jointcs::format_double(col_err) << '\n';
  }
  std::cout << "total error: " << jointcs::format_double(err) << '\n';
  std::cout << "full success: " << (full ? "yes" : "no")
            << "  support success: " << (supp ? "yes" : "no") << '\n';

  const auto out_dir = ensure_out_dir(f.out);
  json meta{{"subcommand", "solve"},
            {"config", instance_json(f, seed_value)},
            {"detect", detect},
            {"estimate", estimate},
            {"total_error", err},
            {"full_success", full},
            {"support_success", supp}};
  write_metadata(out_dir, std::move(meta));
  return 0;
}

struct SweepFlags {
  Index n = 100;
  Index l = 3;
  std::string type = "all";
  std::vector<Index> m_grid = default_grid();
  std::vector<Index> k_grid = default_grid();
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> algorithms;
  int threads = 0;
  double level = 0.5;
  std::string out = ".";
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--n", f.n, "signal dimension")->capture_default_str();
  cmd->add_option("--l", f.l, "number of sensors")->capture_default_str();
  cmd->add_option("--type", f.type, "signal type {1,2,3,4,all}")
      ->capture_default_str();
  cmd->add_option("--m-grid", f.m_grid, "measurement grid (comma separated)")
      ->delimiter(',');
  cmd->add_option("--k-grid", f.k_grid, "sparsity grid (comma separated)")
      ->delimiter(',');
  cmd->add_option("--trials", f.trials, "trials per cell")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed (falls back to JOINTCS_SEED)")
      ->each([&f](const std::string&) { f.seed_given = true; });
  cmd->add_option("--algorithms", f.algorithms,
                  "subset of {somp_ac,somp_bc,somp_bd,somp_bd_supp}")
      ->delimiter(',');
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
}

std::string csv_name(const char* prefix, jointcs::SignalType type, Index l) {
  return std::string(prefix) + "_type" +
         std::to_string(static_cast<int>(type)) + "_l" + std::to_string(l) +
         ".csv";
}

int run_sweeps(const SweepFlags& f, bool with_phase) {
  const std::uint64_t seed_value = resolve_seed(f.seed_given, f.seed);
  const std::vector<jointcs::SignalType> types = parse_types(f.type);
  const std::vector<jointcs::Algorithm> algos =
      f.algorithms.empty() ? std::vector<jointcs::Algorithm>(
                                 jointcs::kAllAlgorithms.begin(),
                                 jointcs::kAllAlgorithms.end())
                           : parse_algorithms(f.algorithms);
  if (with_phase && (!(f.level > 0.0) || f.level > 1.0))
    throw CLI::ValidationError("--level", "must be in (0, 1]");

  const auto out_dir = ensure_out_dir(f.out);
  json outputs = json::array();

  for (jointcs::SignalType type : types) {
    jointcs::SweepConfig config;
    config.n = f.n;
    config.l = f.l;
    config.type = type;
    config.m_grid = f.m_grid;
    config.k_grid = f.k_grid;
    config.trials = f.trials;
    config.master_seed = seed_value;
    config.threads = f.threads;

    const jointcs::SweepResult result = jointcs::sweep(config);

    const std::string sweep_file = csv_name("sweep", type, f.l);
    {
      auto ofs = open_output(out_dir / sweep_file);
      jointcs::write_sweep_csv(ofs, result);
    }
    outputs.push_back(sweep_file);
    std::cout << "wrote " << (out_dir / sweep_file).string() << '\n';

    if (with_phase) {
      const std::string phase_file = csv_name("phase", type, f.l);
      auto ofs = open_output(out_dir / phase_file);
      jointcs::write_phase_csv(ofs, result, algos, f.level);
      outputs.push_back(phase_file);
      std::cout << "wrote " << (out_dir / phase_file).string() << '\n';
    }
  }

  std::vector<std::string> algo_names;
  for (jointcs::Algorithm a : algos)
    algo_names.emplace_back(jointcs::algorithm_name(a));

  json meta{{"subcommand", with_phase ? "phase" : "sweep"},
            {"config",
             {{"n", f.n},
              {"l", f.l},
              {"type", f.type},
              {"m_grid", f.m_grid},
              {"k_grid", f.k_grid},
              {"trials", f.trials},
              {"seed", seed_value},
              {"algorithms", algo_names},
              {"threads", f.threads}}},
            {"outputs", outputs}};
  if (with_phase) {
    meta["config"]["level"] = f.level;
    meta["phase_scan"] =
        "per k, smallest grid m whose success probability reaches level";
  }
  write_metadata(out_dir, std::move(meta));
  return 0;
}

int cmd_metrics(const InstanceFlags& f) {
  const std::uint64_t seed_value = resolve_seed(f.seed_given, f.seed);
  const jointcs::Seed seed(seed_value);
  const jointcs::SignalType type = single_type(f.type);
  const jointcs::ProblemDims dims{f.n, 1, f.l, f.k};
  dims.validate();
  const jointcs::SupportSet omega = jointcs::draw_support(f.n, f.k, seed);
  const jointcs::SignalEnsemble signals =
      jointcs::gen_signals(type, dims, omega, seed);
  const jointcs::EnsembleMetrics metrics = jointcs::ensemble_metrics(signals);

  std::cout << "instance: n=" << f.n << " k=" << f.k << " l=" << f.l
            << " type=" << f.type << " seed=" << seed_value << '\n';
  std::cout << "eps1 = " << jointcs::format_double(metrics.eps1) << '\n';
  std::cout << "eps2 = " << jointcs::format_double(metrics.eps2) << '\n';
  std::cout << "eps3 = " << jointcs::format_double(metrics.eps3) << '\n';

  const auto out_dir = ensure_out_dir(f.out);
  write_metadata(out_dir, json{{"subcommand", "metrics"},
                               {"config", instance_json(f, seed_value)},
                               {"eps1", metrics.eps1},
                               {"eps2", metrics.eps2},
                               {"eps3", metrics.eps3}});
  return 0;
}

const char* ric_mode_label(jointcs::RicMode mode) {
  return mode == jointcs::RicMode::Exact ? "Exact" : "SampledLowerBound";
}

int cmd_ric(const InstanceFlags& f, std::int64_t samples) {
  const std::uint64_t seed_value = resolve_seed(f.seed_given, f.seed);
  const jointcs::Seed seed(seed_value);
  const jointcs::ProblemDims dims{f.n, f.m, 1, std::min<Index>(f.k, f.n)};
  dims.validate();
  const jointcs::SensingEnsemble sensing = jointcs::draw_sensing(dims, seed);
  const jointcs::Matrix scaled =
      sensing.phis[0] / std::sqrt(double(f.m));

  const jointcs::RicValue ric =
      samples > 0
          ? jointcs::ric_sampled(scaled, f.k, samples, seed.derived(0x524943))
          : jointcs::ric_exact(scaled, f.k);

  std::cout << "matrix: m=" << f.m << " n=" << f.n
            << " (entries scaled by 1/sqrt(m)) seed=" << seed_value << '\n';
  std::cout << "delta_" << ric.order << " = "
            << jointcs::format_double(ric.value) << "  mode="
            << ric_mode_label(ric.mode);
  if (ric.mode == jointcs::RicMode::SampledLowerBound)
    std::cout << "  samples=" << ric.samples;
  std::cout << '\n';

  const auto out_dir = ensure_out_dir(f.out);
  write_metadata(out_dir, json{{"subcommand", "ric"},
                               {"config",
                                {{"n", f.n},
                                 {"m", f.m},
                                 {"order", f.k},
                                 {"samples", samples},
                                 {"seed", seed_value}}},
                               {"delta", ric.value},
                               {"mode", ric_mode_label(ric.mode)}});
  return 0;
}

int cmd_check(const InstanceFlags& f, std::int64_t samples) {
  const std::uint64_t seed_value = resolve_seed(f.seed_given, f.seed);
  const jointcs::Seed seed(seed_value);
  const jointcs::SignalType type = single_type(f.type);
  const jointcs::Problem problem = make_instance(f, type, seed);
  const jointcs::ConditionReport report =
      jointcs::evaluate_conditions(problem, samples, seed.derived(0x434b));

  std::cout << "instance: n=" << f.n << " m=" << f.m << " k=" << f.k
            << " l=" << f.l << " type=" << f.type << " seed=" << seed_value
            << '\n';
  std::cout << "eps1 = " << jointcs::format_double(report.metrics.eps1)
            << "  eps2 = " << jointcs::format_double(report.metrics.eps2)
            << "  eps3 = " << jointcs::format_double(report.metrics.eps3)
            << '\n';
  for (std::size_t i = 0; i < report.delta_per_sensor.size(); ++i) {
    const jointcs::RicValue& d = report.delta_per_sensor[i];
    std::cout << "sensor " << i + 1 << " delta_" << d.order << " = "
              << jointcs::format_double(d.value) << "  mode="
              << ric_mode_label(d.mode);
    if (d.mode == jointcs::RicMode::SampledLowerBound)
      std::cout << "  samples=" << d.samples;
    std::cout << '\n';
  }
  std::cout << "stacked delta_" << report.delta_stacked.order << " = "
            << jointcs::format_double(report.delta_stacked.value) << "  mode="
            << ric_mode_label(report.delta_stacked.mode);
  if (report.delta_stacked.mode == jointcs::RicMode::SampledLowerBound)
    std::cout << "  samples=" << report.delta_stacked.samples;
  std::cout << '\n';
  std::cout << "delta_max = " << jointcs::format_double(report.delta_max)
            << '\n';
  const auto verdict = [](bool ok) { return ok ? "satisfied" : "not satisfied"; };
  std::cout << "detection condition (per-sensor):   "
            << verdict(report.theorem1) << '\n';
  std::cout << "detection condition (uniform):      "
            << verdict(report.corollary1) << '\n';
  std::cout << "shared-estimate recovery condition: "
            << verdict(report.theorem2) << '\n';
  std::cout << "averaged-signal recovery condition: "
            << verdict(report.theorem3) << '\n';

  const auto out_dir = ensure_out_dir(f.out);
  json meta{{"subcommand", "check"},
            {"config", instance_json(f, seed_value)},
            {"samples", samples},
            {"eps1", report.metrics.eps1},
            {"eps2", report.metrics.eps2},
            {"eps3", report.metrics.eps3},
            {"delta_max", report.delta_max},
            {"delta_stacked", report.delta_stacked.value},
            {"checks",
             {{"per_sensor_detection", report.theorem1},
              {"uniform_detection", report.corollary1},
              {"shared_estimate", report.theorem2},
              {"averaged_signal", report.theorem3}}}};
  write_metadata(out_dir, std::move(meta));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed compressive sensing MMV toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("jointcs ") + jointcs::kVersion);

  InstanceFlags solve_flags;
  std::string detect = "a", estimate = "c";
  CLI::App* solve = app.add_subcommand(
      "solve", "generate one instance and run one solver configuration");
  add_instance_flags(solve, solve_flags);
  solve->add_option("--detect", detect, "support detection step {a,b}")
      ->capture_default_str();
  solve->add_option("--estimate", estimate, "signal estimation step {c,d}")
      ->capture_default_str();

  SweepFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Monte Carlo success-probability sweep over an (m, k) grid");
  add_sweep_flags(sweep_cmd, sweep_flags);

  SweepFlags phase_flags;
  CLI::App* phase_cmd = app.add_subcommand(
      "phase", "run a sweep and extract per-k phase-transition points");
  add_sweep_flags(phase_cmd, phase_flags);
  phase_cmd->add_option("--level", phase_flags.level,
                        "success probability threshold")
      ->capture_default_str();

  InstanceFlags metrics_flags;
  CLI::App* metrics_cmd = app.add_subcommand(
      "metrics", "ensemble similarity metrics of a generated instance");
  add_instance_flags(metrics_cmd, metrics_flags, /*with_m=*/false);

  InstanceFlags ric_flags;
  std::int64_t ric_samples = 0;
  CLI::App* ric_cmd = app.add_subcommand(
      "ric", "restricted isometry constant of a generated matrix");
  add_instance_flags(ric_cmd, ric_flags);
  ric_cmd->add_option("--samples", ric_samples,
                      "random supports to sample (0 = exact enumeration)")
      ->capture_default_str();

  InstanceFlags check_flags;
  std::int64_t check_samples = 0;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "evaluate the sufficient recovery conditions on an instance");
  add_instance_flags(check_cmd, check_flags);
  check_cmd->add_option("--samples", check_samples,
                        "random supports per RIC (0 = exact enumeration)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(solve))
      return cmd_solve(solve_flags, detect, estimate);
    if (app.got_subcommand(sweep_cmd)) return run_sweeps(sweep_flags, false);
    if (app.got_subcommand(phase_cmd)) return run_sweeps(phase_flags, true);
    if (app.got_subcommand(metrics_cmd)) return cmd_metrics(metrics_flags);
    if (app.got_subcommand(ric_cmd)) return cmd_ric(ric_flags, ric_samples);
    if (app.got_subcommand(check_cmd)) return cmd_check(check_flags, check_samples);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const jointcs::EnumerationLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
