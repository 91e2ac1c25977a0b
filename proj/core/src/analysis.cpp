#include "jointcs/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <limits>

namespace jointcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_subset_cap(const SignalEnsemble& x) {
  if (x.omega.size() < 1)
    throw std::invalid_argument("epsilon: support is empty");
  if (x.omega.size() > kEpsilonEnumerationCap)
    throw EnumerationLimitError(
        "epsilon: support size " + std::to_string(x.omega.size()) +
        " exceeds the subset enumeration cap of " +
        std::to_string(kEpsilonEnumerationCap));
}

// Walks the nonempty subsets of omega in Gray-code order, flipping one
// support row at a time, and hands (added, row) to the visitor before
// each evaluation point.
template <typename Flip, typename Visit>
void for_each_subset(Index k, Flip&& flip, Visit&& visit) {
  std::uint32_t prev = 0;
  const std::uint32_t total = std::uint32_t{1} << k;
  for (std::uint32_t i = 1; i < total; ++i) {
    const std::uint32_t gray = i ^ (i >> 1);
    const std::uint32_t changed = gray ^ prev;
    flip(static_cast<Index>(std::countr_zero(changed)), (gray & changed) != 0);
    prev = gray;
    visit();
  }
}

double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }

std::int64_t binomial_capped(Index n, Index k, std::int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (Index i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

double gram_deviation(const Matrix& gram_sub) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_sub, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return std::max(ev.maxCoeff() - 1.0, 1.0 - ev.minCoeff());
}

Matrix gram_submatrix(const Matrix& gram, const std::vector<Index>& support) {
  const Index k = static_cast<Index>(support.size());
  Matrix sub(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      sub(a, b) = gram(support[static_cast<std::size_t>(a)],
                       support[static_cast<std::size_t>(b)]);
  return sub;
}

}  // namespace

double epsilon1(const SignalEnsemble& x, Epsilon1Variant variant) {
  check_subset_cap(x);
  const Index k = x.omega.size(), l = x.l();

  std::vector<double> norms2(static_cast<std::size_t>(l), 0.0);
  const bool take_max = variant == Epsilon1Variant::MaxOverSubsets;
  double best = take_max ? -kInf : kInf;

  for_each_subset(
      k,
      [&](Index bit, bool added) {
        const Index row = x.omega[static_cast<std::size_t>(bit)];
        for (Index j = 0; j < l; ++j) {
          const double sq = x.x(row, j) * x.x(row, j);
          norms2[static_cast<std::size_t>(j)] = clamp_nonneg(
              norms2[static_cast<std::size_t>(j)] + (added ? sq : -sq));
        }
      },
      [&] {
        double mn = kInf, mx = -kInf;
        for (double v : norms2) {
          mn = std::min(mn, v);
          mx = std::max(mx, v);
        }
        const double ratio = mx > 0.0 ? std::sqrt(mn / mx) : 0.0;
        best = take_max ? std::max(best, ratio) : std::min(best, ratio);
      });
  return best;
}

double epsilon2(const SignalEnsemble& x) {
  check_subset_cap(x);
  const Index k = x.omega.size(), l = x.l();
  const Vector x_star = x.x.rowwise().mean();

  std::vector<double> dist2(static_cast<std::size_t>(l), 0.0);
  double star2 = 0.0;
  double best = -kInf;

  for_each_subset(
      k,
      [&](Index bit, bool added) {
        const Index row = x.omega[static_cast<std::size_t>(bit)];
        const double sign = added ? 1.0 : -1.0;
        for (Index j = 0; j < l; ++j) {
          const double d = x.x(row, j) - x_star(row);
          dist2[static_cast<std::size_t>(j)] =
              clamp_nonneg(dist2[static_cast<std::size_t>(j)] + sign * d * d);
        }
        star2 = clamp_nonneg(star2 + sign * x_star(row) * x_star(row));
      },
      [&] {
        if (star2 <= 0.0) {
          best = kInf;
          return;
        }
        double num = 0.0;
        for (double v : dist2) num += std::sqrt(v);
        best = std::max(best, num / (double(l) * std::sqrt(star2)));
      });
  return best;
}

double epsilon3(const SignalEnsemble& x) {
  check_subset_cap(x);
  const Index l = x.l();
  const Vector x_star = x.x.rowwise().mean();

  double numerator = 0.0;
  for (Index j = 0; j < l; ++j) numerator += (x.x.col(j) - x_star).norm();

  // The denominator L*||x*_U|| is minimized over nonempty U at a
  // singleton, so the subset maximum reduces to the smallest |x*| entry
  // on the support.
  double min_abs = kInf;
  for (Index row : x.omega) min_abs = std::min(min_abs, std::abs(x_star(row)));
  if (min_abs <= 0.0) return kInf;
  return numerator / (double(l) * min_abs);
}

EnsembleMetrics ensemble_metrics(const SignalEnsemble& x) {
  EnsembleMetrics m;
  m.eps1 = epsilon1(x);
  m.eps2 = epsilon2(x);
  m.eps3 = epsilon3(x);
  m.x_star = x.x.rowwise().mean();
  return m;
}

RicValue ric_exact(const Matrix& phi, Index order) {
  if (order < 1 || order > phi.cols())
    throw std::invalid_argument("ric_exact: order must be in [1, N]");
  const std::int64_t count = binomial_capped(phi.cols(), order, kRicEnumerationBudget);
  if (count > kRicEnumerationBudget)
    throw EnumerationLimitError(
        "ric_exact: C(" + std::to_string(phi.cols()) + ", " +
        std::to_string(order) + ") exceeds the enumeration budget of " +
        std::to_string(kRicEnumerationBudget) + "; use ric_sampled");

  const Matrix gram = phi.transpose() * phi;
  std::vector<Index> support(static_cast<std::size_t>(order));
  for (Index i = 0; i < order; ++i) support[static_cast<std::size_t>(i)] = i;

  double value = 0.0;
  const Index n = phi.cols();
  while (true) {
    value = std::max(value, gram_deviation(gram_submatrix(gram, support)));
    // next lexicographic combination
    Index pos = order - 1;
    while (pos >= 0 && support[static_cast<std::size_t>(pos)] == n - order + pos) --pos;
    if (pos < 0) break;
    ++support[static_cast<std::size_t>(pos)];
    for (Index i = pos + 1; i < order; ++i)
      support[static_cast<std::size_t>(i)] = support[static_cast<std::size_t>(i - 1)] + 1;
  }
  return RicValue{order, value, RicMode::Exact, 0};
}

RicValue ric_sampled(const Matrix& phi, Index order, std::int64_t samples,
                     const Seed& seed) {
  if (order < 1 || order > phi.cols())
    throw std::invalid_argument("ric_sampled: order must be in [1, N]");
  if (samples < 1)
    throw std::invalid_argument("ric_sampled: samples must be >= 1");

  const Matrix gram = phi.transpose() * phi;
  const Index n = phi.cols();
  auto eng = seed.engine();

  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::vector<Index> support(static_cast<std::size_t>(order));
  double value = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < order; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(pick(eng))]);
      support[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    // sorted order makes the submatrix bit-identical to the one the
    // exhaustive path sees, so the lower-bound property is exact
    std::sort(support.begin(), support.end());
    value = std::max(value, gram_deviation(gram_submatrix(gram, support)));
  }
  return RicValue{order, value, RicMode::SampledLowerBound, samples};
}

bool check_theorem1(const std::vector<double>& delta_per_sensor, double eps1,
                    Index k) {
  const double sqrt_k = std::sqrt(double(k));
  double sum = 0.0;
  for (double d : delta_per_sensor) {
    if (d >= 1.0)
      throw std::domain_error("check_theorem1: delta >= 1 makes the bound vacuous");
    sum += (eps1 * d * d - (sqrt_k + 2.0 * eps1) * d + eps1) / (1.0 - d);
  }
  return sum > 0.0;
}

bool check_corollary1(double delta_max, Index k) {
  return delta_max < 1.0 / (std::sqrt(double(k)) + 2.0);
}

bool check_theorem2(double delta_a, double delta_max, double eps2, Index k,
                    Index l) {
  if (!std::isfinite(eps2)) return false;
  const double sqrt_k = std::sqrt(double(k));
  return (sqrt_k + 1.0) * delta_a +
             (1.0 + (sqrt_k + 1.0) * double(l) * eps2) * delta_max <
         1.0;
}

bool check_theorem3(double delta_a, double delta_max, double eps3, Index k,
                    Index l) {
  if (!std::isfinite(eps3)) return false;
  const double sqrt_k = std::sqrt(double(k));
  return sqrt_k * (1.0 + double(l) * double(l) * eps3) * delta_a +
             (1.0 + double(l) * eps3) * delta_max <
         1.0;
}

ConditionReport evaluate_conditions(const Problem& problem, std::int64_t samples,
                                    const Seed& seed) {
  const Index k = problem.dims.k, l = problem.dims.l;
  const Index order = std::min(k + 1, problem.dims.n);
  const double m_scale = 1.0 / std::sqrt(double(problem.dims.m));

  ConditionReport report;
  report.metrics = ensemble_metrics(problem.signals);

  std::vector<double> deltas;
  for (Index i = 0; i < l; ++i) {
    Matrix scaled = problem.sensing.phis[static_cast<std::size_t>(i)] * m_scale;
    RicValue ric = samples > 0
                       ? ric_sampled(scaled, order, samples,
                                     seed.derived(static_cast<std::uint64_t>(i)))
                       : ric_exact(scaled, order);
    deltas.push_back(ric.value);
    report.delta_per_sensor.push_back(ric);
  }
  report.delta_max = *std::max_element(deltas.begin(), deltas.end());

  Matrix scaled_stack = problem.sensing.scaled_a() * m_scale;
  report.delta_stacked =
      samples > 0 ? ric_sampled(scaled_stack, order, samples,
                                seed.derived(0x535441434bULL))
                  : ric_exact(scaled_stack, order);

  // With any delta at or above 1 the per-sensor bound is vacuous, so the
  // condition cannot certify anything; report it unsatisfied rather than
  // propagate check_theorem1's domain error.
  const bool deltas_usable =
      std::all_of(deltas.begin(), deltas.end(), [](double d) { return d < 1.0; });
  report.theorem1 =
      deltas_usable && check_theorem1(deltas, report.metrics.eps1, k);
  report.corollary1 = check_corollary1(report.delta_max, k);
  report.theorem2 = check_theorem2(report.delta_stacked.value, report.delta_max,
                                   report.metrics.eps2, k, l);
  report.theorem3 = check_theorem3(report.delta_stacked.value, report.delta_max,
                                   report.metrics.eps3, k, l);
  return report;
}

}  // namespace jointcs
