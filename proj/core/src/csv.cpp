#include "jointcs/csv.hpp"

#include <cstdio>

namespace jointcs {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "signal_type,N,M,K,L,algorithm,trials,successes,probability\n";
  const int type = static_cast<int>(result.config.type);
  for (const CellCounts& cell : result.cells) {
    for (Algorithm algo : kAllAlgorithms) {
      os << type << ',' << result.config.n << ',' << cell.m << ',' << cell.k
         << ',' << result.config.l << ',' << algorithm_name(algo) << ','
         << cell.trials << ',' << cell.successes[static_cast<std::size_t>(algo)]
         << ',' << format_double(cell.probability(algo)) << '\n';
    }
  }
}

void write_phase_csv(std::ostream& os, const SweepResult& result,
                     const std::vector<Algorithm>& algos, double level) {
  os << "signal_type,N,L,algorithm,level,K,M_min\n";
  const int type = static_cast<int>(result.config.type);
  for (Algorithm algo : algos) {
    const std::vector<PhasePoint> points = phase_transition(result, algo, level);
    for (const PhasePoint& p : points) {
      os << type << ',' << result.config.n << ',' << result.config.l << ','
         << algorithm_name(algo) << ',' << format_double(level) << ',' << p.k
         << ',';
      if (p.m_min) os << *p.m_min;
      os << '\n';
    }
  }
}

}  // namespace jointcs
