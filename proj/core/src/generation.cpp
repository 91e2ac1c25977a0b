#include "jointcs/generation.hpp"

#include <algorithm>
#include <numeric>

namespace jointcs {

SupportSet draw_support(Index n, Index k, const Seed& seed) {
  if (k < 1 || n < 1)
    throw std::invalid_argument("draw_support: need n >= 1 and k >= 1");
  if (k > n) throw std::invalid_argument("draw_support: k exceeds n");

  auto eng = seed.derived(stream_role::kSupport).engine();
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  // Partial Fisher-Yates: the first k slots become the sample.
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(pick(eng))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return SupportSet(std::move(pool));
}

SignalEnsemble gen_signals(SignalType type, const ProblemDims& dims,
                           const SupportSet& omega, const Seed& seed) {
  dims.validate();
  if (omega.size() != dims.k)
    throw SparsityError("gen_signals: |omega| = " + std::to_string(omega.size()) +
                        ", dims.k is " + std::to_string(dims.k));
  if (omega.max_index() >= dims.n)
    throw SparsityError("gen_signals: omega index out of range");

  auto eng = seed.derived(stream_role::kSignal).engine();
  std::normal_distribution<double> std_normal(0.0, 1.0);
  std::normal_distribution<double> shifted(1.0, 0.5);  // variance 0.25

  Matrix x = Matrix::Zero(dims.n, dims.l);
  for (Index c = 0; c < dims.l; ++c) {
    for (Index r : omega) {
      switch (type) {
        case SignalType::TypeI:
          x(r, c) = std_normal(eng);
          break;
        case SignalType::TypeII:
          x(r, c) = std::abs(std_normal(eng));
          break;
        case SignalType::TypeIII:
          x(r, c) = shifted(eng);
          break;
        case SignalType::TypeIV:
          x(r, c) = 1.0;
          break;
      }
    }
  }
  return SignalEnsemble{std::move(x), omega};
}

SensingEnsemble draw_sensing(const ProblemDims& dims, const Seed& seed) {
  dims.validate();
  std::vector<Matrix> phis;
  phis.reserve(static_cast<std::size_t>(dims.l));
  for (Index i = 0; i < dims.l; ++i) {
    auto eng = seed.derived({stream_role::kMatrix, static_cast<std::uint64_t>(i)}).engine();
    std::normal_distribution<double> std_normal(0.0, 1.0);
    Matrix phi(dims.m, dims.n);
    for (Index r = 0; r < dims.m; ++r)
      for (Index c = 0; c < dims.n; ++c) phi(r, c) = std_normal(eng);
    phis.push_back(std::move(phi));
  }
  return SensingEnsemble{std::move(phis)};
}

MeasurementEnsemble sense(const SensingEnsemble& phis, const SignalEnsemble& x) {
  if (phis.l() != x.l())
    throw DimensionError("sense: sensing holds " + std::to_string(phis.l()) +
                         " matrices, signals have " + std::to_string(x.l()) +
                         " columns");
  if (phis.n() != x.n())
    throw DimensionError("sense: phi has " + std::to_string(phis.n()) +
                         " columns, signals have " + std::to_string(x.n()) +
                         " rows");
  Matrix ys(phis.m(), phis.l());
  for (Index i = 0; i < phis.l(); ++i) {
    const Matrix& phi = phis.phis[static_cast<std::size_t>(i)];
    if (phi.rows() != phis.m() || phi.cols() != phis.n())
      throw DimensionError("sense: phis[" + std::to_string(i) +
                           "] differs in shape from phis[0]");
    ys.col(i) = phi * x.x.col(i);
  }
  return MeasurementEnsemble{std::move(ys)};
}

}  // namespace jointcs
