#include "jointcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace jointcs {

namespace {

constexpr std::uint64_t kTrialWord = 0x5452;  // per-trial derivation tag

constexpr std::array<std::string_view, 4> kAlgorithmNames = {
    "somp_ac", "somp_bc", "somp_bd", "somp_bd_supp"};

}  // namespace

std::string_view algorithm_name(Algorithm algo) {
  return kAlgorithmNames[static_cast<std::size_t>(algo)];
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i)
    if (kAlgorithmNames[i] == name) return static_cast<Algorithm>(i);
  return std::nullopt;
}

double recovery_error(const Matrix& estimates, const Matrix& x) {
  if (estimates.rows() != x.rows() || estimates.cols() != x.cols())
    throw DimensionError("recovery_error: estimate and signal shapes differ");
  double total = 0.0;
  for (Index j = 0; j < x.cols(); ++j) total += (estimates.col(j) - x.col(j)).norm();
  return total;
}

bool success_full(const Matrix& estimates, const Matrix& x) {
  return recovery_error(estimates, x) <= kFullSuccessThreshold;
}

bool success_support(const SupportSet& truth, const SupportSet& recovered) {
  return recovered.contains_all(truth);
}

bool TrialOutcome::success(Algorithm algo) const {
  switch (algo) {
    case Algorithm::SompAC: return full_ac;
    case Algorithm::SompBC: return full_bc;
    case Algorithm::SompBD: return full_bd;
    case Algorithm::SompBDSupp: return supp_bd;
  }
  throw std::logic_error("TrialOutcome::success: unknown algorithm");
}

TrialOutcome run_trial(const Seed& master, SignalType type,
                       const ProblemDims& dims, std::int64_t trial) {
  dims.validate();
  const Seed trial_seed = master.derived(
      {kTrialWord, static_cast<std::uint64_t>(dims.m),
       static_cast<std::uint64_t>(dims.k), static_cast<std::uint64_t>(dims.l),
       static_cast<std::uint64_t>(type), static_cast<std::uint64_t>(trial)});

  const SupportSet omega = draw_support(dims.n, dims.k, trial_seed);
  const SignalEnsemble signals = gen_signals(type, dims, omega, trial_seed);
  const SensingEnsemble sensing = draw_sensing(dims, trial_seed);
  const MeasurementEnsemble ys = sense(sensing, signals);

  TrialOutcome out;
  const auto run = [&](Detection det, Estimation est) {
    return somp_run(sensing, ys, dims.k, SolverConfig{det, est});
  };

  const RecoveryResult ac = run(Detection::A, Estimation::C);
  out.err_ac = recovery_error(ac.estimates, signals.x);
  out.full_ac = out.err_ac <= kFullSuccessThreshold;

  const RecoveryResult bc = run(Detection::B, Estimation::C);
  out.err_bc = recovery_error(bc.estimates, signals.x);
  out.full_bc = out.err_bc <= kFullSuccessThreshold;

  const RecoveryResult bd = run(Detection::B, Estimation::D);
  out.err_bd = recovery_error(bd.estimates, signals.x);
  out.full_bd = out.err_bd <= kFullSuccessThreshold;
  out.supp_bd = success_support(omega, bd.support);

  return out;
}

void SweepConfig::validate() const {
  if (n < 1) throw std::invalid_argument("sweep: n must be >= 1");
  if (l < 1) throw std::invalid_argument("sweep: l must be >= 1");
  if (trials < 0) throw std::invalid_argument("sweep: trials must be >= 0");
  if (m_grid.empty() || k_grid.empty())
    throw std::invalid_argument("sweep: grids must be nonempty");
  for (Index m : m_grid)
    if (m < 1) throw std::invalid_argument("sweep: grid m must be >= 1");
  for (Index k : k_grid)
    if (k < 1 || k > n)
      throw std::invalid_argument("sweep: grid k must be in [1, n]");
}

double CellCounts::probability(Algorithm algo) const {
  if (trials == 0) return std::numeric_limits<double>::quiet_NaN();
  return double(successes[static_cast<std::size_t>(algo)]) / double(trials);
}

const CellCounts& SweepResult::cell(Index m, Index k) const {
  for (const CellCounts& c : cells)
    if (c.m == m && c.k == k) return c;
  throw std::out_of_range("SweepResult: no cell (" + std::to_string(m) + ", " +
                          std::to_string(k) + ")");
}

SweepResult sweep(const SweepConfig& config) {
  config.validate();

  SweepResult result;
  result.config = config;
  result.cells.reserve(config.m_grid.size() * config.k_grid.size());
  for (Index m : config.m_grid)
    for (Index k : config.k_grid)
      result.cells.push_back(CellCounts{m, k, config.trials, {}});

  const std::size_t n_cells = result.cells.size();
  const std::int64_t total_tasks =
      static_cast<std::int64_t>(n_cells) * config.trials;
  if (total_tasks == 0) return result;

  std::vector<std::array<std::atomic<std::int64_t>, 4>> counts(n_cells);
  for (auto& cell : counts)
    for (auto& c : cell) c.store(0, std::memory_order_relaxed);

  const Seed master(config.master_seed);
  std::atomic<std::int64_t> next_task{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};

  const auto worker = [&] {
    while (true) {
      const std::int64_t task = next_task.fetch_add(1, std::memory_order_relaxed);
      if (task >= total_tasks || failed.load(std::memory_order_relaxed)) return;
      const std::size_t cell = static_cast<std::size_t>(task / config.trials);
      const std::int64_t trial = task % config.trials;
      const CellCounts& c = result.cells[cell];
      try {
        const ProblemDims dims{config.n, c.m, config.l, c.k};
        const TrialOutcome out = run_trial(master, config.type, dims, trial);
        for (Algorithm algo : kAllAlgorithms)
          if (out.success(algo))
            counts[cell][static_cast<std::size_t>(algo)].fetch_add(
                1, std::memory_order_relaxed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          try {
            std::throw_with_nested(std::runtime_error(
                "sweep: trial " + std::to_string(trial) + " failed in cell m=" +
                std::to_string(c.m) + " k=" + std::to_string(c.k)));
          } catch (...) {
            first_error = std::current_exception();
          }
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(
      std::min<std::int64_t>(n_threads, total_tasks));

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t i = 0; i < n_cells; ++i)
    for (std::size_t a = 0; a < 4; ++a)
      result.cells[i].successes[a] = counts[i][a].load();
  return result;
}

std::vector<PhasePoint> phase_transition(const SweepResult& result,
                                         Algorithm algo, double level) {
  if (!(level > 0.0) || level > 1.0)
    throw std::invalid_argument("phase_transition: level must be in (0, 1]");

  std::vector<Index> m_sorted = result.config.m_grid;
  std::sort(m_sorted.begin(), m_sorted.end());

  std::vector<PhasePoint> points;
  points.reserve(result.config.k_grid.size());
  for (Index k : result.config.k_grid) {
    PhasePoint p{k, std::nullopt};
    for (Index m : m_sorted) {
      const double prob = result.cell(m, k).probability(algo);
      if (prob >= level) {
        p.m_min = m;
        break;
      }
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace jointcs
