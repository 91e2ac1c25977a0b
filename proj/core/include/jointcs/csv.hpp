#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "jointcs/experiments.hpp"

namespace jointcs {

/// Shortest round-trip decimal form ("%.17g"); identical bytes for
/// identical doubles, so emitted tables diff cleanly across reruns.
std::string format_double(double v);

/// One row per (cell, algorithm), cells m-major as stored, algorithms in
/// enum order. Header:
/// signal_type,N,M,K,L,algorithm,trials,successes,probability
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// One row per (algorithm, k). Header:
/// signal_type,N,L,algorithm,level,K,M_min
/// M_min is left empty when no grid m reaches the level.
void write_phase_csv(std::ostream& os, const SweepResult& result,
                     const std::vector<Algorithm>& algos, double level);

}  // namespace jointcs
