#pragma once

#include <cstdint>
#include <vector>

#include "jointcs/generation.hpp"
#include "jointcs/types.hpp"

namespace jointcs {

/// Subset enumeration over the support is capped at this sparsity.
inline constexpr Index kEpsilonEnumerationCap = 24;

/// Exact support enumeration is capped at this many index sets.
inline constexpr std::int64_t kRicEnumerationBudget = 1'000'000;

/// The norm-ratio constant can be aggregated over subsets two ways: the
/// published formula takes the max; the conservative reading of the
/// proof takes the min. Max is the default.
enum class Epsilon1Variant { MaxOverSubsets, MinOverSubsets };

/// epsilon_1 = max over nonempty U of min_j ||x^j_U|| / max_j ||x^j_U||.
/// A subset whose largest column norm is zero contributes ratio 0.
double epsilon1(const SignalEnsemble& x,
                Epsilon1Variant variant = Epsilon1Variant::MaxOverSubsets);

/// epsilon_2 = max over nonempty U of
///   sum_i ||x^i_U - x*_U|| / (L ||x*_U||), with x* the column mean.
/// Returns +infinity when some subset has x*_U = 0.
double epsilon2(const SignalEnsemble& x);

/// epsilon_3: same shape as epsilon_2 but the numerator uses full-vector
/// distances sum_i ||x^i - x*||, constant over U.
double epsilon3(const SignalEnsemble& x);

/// The three constants plus the ensemble mean, computed together.
struct EnsembleMetrics {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;
  Vector x_star;
};

EnsembleMetrics ensemble_metrics(const SignalEnsemble& x);

enum class RicMode { Exact, SampledLowerBound };

struct RicValue {
  Index order = 0;
  double value = 0.0;
  RicMode mode = RicMode::Exact;
  std::int64_t samples = 0;  // 0 when exact
};

/// Exact restricted isometry constant of the given order:
/// max over all supports S, |S| = order, of
/// max(lambda_max(G_S) - 1, 1 - lambda_min(G_S)) with G_S = phi_S^T phi_S.
/// Callers scale phi beforehand; no normalization happens here.
/// Throws EnumerationLimitError when C(N, order) exceeds the budget.
RicValue ric_exact(const Matrix& phi, Index order);

/// Same quantity maximized over `samples` uniformly drawn supports; a
/// lower bound on the exact value. With a fixed seed the draw sequence
/// extends, so the value is non-decreasing in `samples`.
RicValue ric_sampled(const Matrix& phi, Index order, std::int64_t samples,
                     const Seed& seed);

/// Sufficient condition for recovery with detection (a), estimation (c):
/// sum_i (e1 d_i^2 - (sqrt(k) + 2 e1) d_i + e1) / (1 - d_i) > 0,
/// over per-sensor order-(k+1) constants d_i. Throws std::domain_error
/// when any d_i >= 1.
bool check_theorem1(const std::vector<double>& delta_per_sensor, double eps1,
                    Index k);

/// Signal-independent variant: delta_max < 1 / (sqrt(k) + 2).
bool check_corollary1(double delta_max, Index k);

/// Sufficient condition for detection (b), estimation (c):
/// (sqrt(k)+1) delta_a + (1 + (sqrt(k)+1) l eps2) delta_max < 1,
/// with delta_a computed on the 1/sqrt(L)-scaled stack.
bool check_theorem2(double delta_a, double delta_max, double eps2, Index k,
                    Index l);

/// Sufficient condition for detection (b), estimation (d):
/// sqrt(k) (1 + l^2 eps3) delta_a + (1 + l eps3) delta_max < 1.
bool check_theorem3(double delta_a, double delta_max, double eps3, Index k,
                    Index l);

/// Everything cmd_check prints: RIC inputs at order k+1 (sensors scaled
/// by 1/sqrt(M), the stack additionally by 1/sqrt(L)), the ensemble
/// constants, and the four verdicts. samples = 0 requests exact RICs.
struct ConditionReport {
  std::vector<RicValue> delta_per_sensor;
  RicValue delta_stacked;
  double delta_max = 0.0;
  EnsembleMetrics metrics;
  bool theorem1 = false;
  bool corollary1 = false;
  bool theorem2 = false;
  bool theorem3 = false;
};

ConditionReport evaluate_conditions(const Problem& problem,
                                    std::int64_t samples = 0,
                                    const Seed& seed = Seed(0));

}  // namespace jointcs
