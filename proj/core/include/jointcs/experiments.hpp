#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jointcs/generation.hpp"
#include "jointcs/solver.hpp"

namespace jointcs {

/// A recovery counts as exact when the summed per-sensor errors reach
/// this floor (inclusive).
inline constexpr double kFullSuccessThreshold = 1e-5;

/// The solver variants tracked by the sweep. The first three are scored
/// on full recovery, the last is the (b, d) run scored on support
/// recovery only.
enum class Algorithm { SompAC = 0, SompBC = 1, SompBD = 2, SompBDSupp = 3 };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {
    Algorithm::SompAC, Algorithm::SompBC, Algorithm::SompBD,
    Algorithm::SompBDSupp};

std::string_view algorithm_name(Algorithm algo);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

/// Sum over sensors of ||xhat^i - x^i||_2.
double recovery_error(const Matrix& estimates, const Matrix& x);

bool success_full(const Matrix& estimates, const Matrix& x);

/// True when every true support index was detected.
bool success_support(const SupportSet& truth, const SupportSet& recovered);

/// One generated instance solved under all three solver configurations.
struct TrialOutcome {
  bool full_ac = false;
  bool full_bc = false;
  bool full_bd = false;
  bool supp_bd = false;
  double err_ac = 0.0;
  double err_bc = 0.0;
  double err_bd = 0.0;

  bool success(Algorithm algo) const;
};

/// Generates the instance for (dims, type, trial) from the master seed
/// and scores the three solver runs. The per-trial seed depends on every
/// cell coordinate, so cells are independent and reruns reproduce.
TrialOutcome run_trial(const Seed& master, SignalType type,
                       const ProblemDims& dims, std::int64_t trial);

struct SweepConfig {
  Index n = 100;
  Index l = 1;
  SignalType type = SignalType::TypeI;
  std::vector<Index> m_grid;
  std::vector<Index> k_grid;
  std::int64_t trials = 100;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 picks hardware concurrency

  void validate() const;
};

struct CellCounts {
  Index m = 0;
  Index k = 0;
  std::int64_t trials = 0;
  std::array<std::int64_t, 4> successes{};  // indexed by Algorithm

  double probability(Algorithm algo) const;
};

/// Cells ordered m-major: for each m in m_grid, each k in k_grid.
struct SweepResult {
  SweepConfig config;
  std::vector<CellCounts> cells;

  const CellCounts& cell(Index m, Index k) const;
};

/// Runs trials for every (m, k) cell in parallel worker threads. Counts
/// are accumulated atomically, so the result is independent of thread
/// scheduling.
SweepResult sweep(const SweepConfig& config);

/// Smallest m on the grid whose success probability reaches `level`;
/// empty when no grid m suffices for that k.
struct PhasePoint {
  Index k = 0;
  std::optional<Index> m_min;
};

std::vector<PhasePoint> phase_transition(const SweepResult& result,
                                         Algorithm algo, double level);

}  // namespace jointcs
