#include "jointcs/solver.hpp"

#include <limits>

namespace jointcs {

namespace {

// A freshly orthogonalized column whose norm drops below this fraction of
// the original is treated as linearly dependent on the current span.
constexpr double kDependentTol = 1e-12;

void check_residual_dims(const SensingEnsemble& phis, const Matrix& residuals) {
  if (residuals.rows() != phis.m())
    throw DimensionError("correlate: residuals have " +
                         std::to_string(residuals.rows()) + " rows, phi has " +
                         std::to_string(phis.m()));
  if (residuals.cols() != phis.l())
    throw DimensionError("correlate: residuals have " +
                         std::to_string(residuals.cols()) + " columns, ensemble size is " +
                         std::to_string(phis.l()));
}

Matrix gather_columns(const Matrix& phi, const SupportSet& s) {
  Matrix sub(phi.rows(), s.size());
  Index c = 0;
  for (Index j : s) {
    if (j >= phi.cols())
      throw DimensionError("support index " + std::to_string(j) +
                           " out of range for matrix with " +
                           std::to_string(phi.cols()) + " columns");
    sub.col(c++) = phi.col(j);
  }
  return sub;
}

Matrix stacked_columns(const SensingEnsemble& phis, const SupportSet& s) {
  const Index m = phis.m();
  Matrix sub(m * phis.l(), s.size());
  for (Index i = 0; i < phis.l(); ++i)
    sub.middleRows(i * m, m) = gather_columns(phis.phis[static_cast<std::size_t>(i)], s);
  return sub;
}

void scatter_into(Matrix& out, Index col, const SupportSet& s, const Vector& coeffs) {
  Index c = 0;
  for (Index j : s) out(j, col) = coeffs(c++);
}

}  // namespace

Vector correlate_a(const SensingEnsemble& phis, const Matrix& residuals) {
  check_residual_dims(phis, residuals);
  Vector u = Vector::Zero(phis.n());
  for (Index i = 0; i < phis.l(); ++i)
    u += (phis.phis[static_cast<std::size_t>(i)].transpose() * residuals.col(i))
             .cwiseAbs();
  return u;
}

Vector correlate_b(const SensingEnsemble& phis, const Matrix& residuals) {
  check_residual_dims(phis, residuals);
  Vector acc = Vector::Zero(phis.n());
  for (Index i = 0; i < phis.l(); ++i)
    acc += phis.phis[static_cast<std::size_t>(i)].transpose() * residuals.col(i);
  return acc.cwiseAbs();
}

Index select_index(const Vector& u, const SupportSet& excluded) {
  Index best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < u.size(); ++j) {
    if (excluded.contains(j)) continue;
    if (u(j) > best_value) {
      best_value = u(j);
      best = j;
    }
  }
  if (best < 0) throw std::logic_error("select_index: every index is excluded");
  return best;
}

Matrix estimate_c(const SensingEnsemble& phis, const SupportSet& s,
                  const MeasurementEnsemble& ys) {
  if (s.empty()) throw std::invalid_argument("estimate_c: empty support");
  if (ys.m() != phis.m() || ys.l() != phis.l())
    throw DimensionError("estimate_c: measurement shape does not match sensing");
  Matrix out = Matrix::Zero(phis.n(), phis.l());
  for (Index i = 0; i < phis.l(); ++i) {
    Matrix sub = gather_columns(phis.phis[static_cast<std::size_t>(i)], s);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
    Vector z = cod.solve(ys.ys.col(i));
    scatter_into(out, i, s, z);
  }
  return out;
}

Matrix estimate_d(const SensingEnsemble& phis, const SupportSet& s,
                  const MeasurementEnsemble& ys) {
  if (s.empty()) throw std::invalid_argument("estimate_d: empty support");
  if (ys.m() != phis.m() || ys.l() != phis.l())
    throw DimensionError("estimate_d: measurement shape does not match sensing");
  Matrix sub = stacked_columns(phis, s);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
  Vector z = cod.solve(ys.stacked_y());
  Matrix out = Matrix::Zero(phis.n(), phis.l());
  for (Index i = 0; i < phis.l(); ++i) scatter_into(out, i, s, z);
  return out;
}

Matrix update_residuals(const SensingEnsemble& phis, const SupportSet& s,
                        const Matrix& estimates, const MeasurementEnsemble& ys) {
  if (ys.m() != phis.m() || ys.l() != phis.l())
    throw DimensionError("update_residuals: measurement shape does not match sensing");
  if (estimates.rows() != phis.n() || estimates.cols() != phis.l())
    throw DimensionError("update_residuals: estimates are " +
                         std::to_string(estimates.rows()) + "x" +
                         std::to_string(estimates.cols()) + ", expected " +
                         std::to_string(phis.n()) + "x" + std::to_string(phis.l()));
  Matrix r(ys.m(), ys.l());
  for (Index i = 0; i < phis.l(); ++i) {
    Matrix sub = gather_columns(phis.phis[static_cast<std::size_t>(i)], s);
    Vector coeffs(s.size());
    Index c = 0;
    for (Index j : s) coeffs(c++) = estimates(j, i);
    r.col(i) = ys.ys.col(i) - sub * coeffs;
  }
  return r;
}

SompState::SompState(const SensingEnsemble& phis, const MeasurementEnsemble& ys,
                     const SolverConfig& config)
    : phis_(phis), ys_(ys), config_(config), residuals_(ys.ys) {
  config_.validate();
  check_residual_dims(phis, residuals_);
  const Index m = phis.m(), n = phis.n(), l = phis.l();
  if (config_.estimation == Estimation::C) {
    bases_.assign(static_cast<std::size_t>(l), Matrix(m, std::min(m, n)));
    base_rank_.assign(static_cast<std::size_t>(l), 0);
  } else {
    bases_.assign(1, Matrix(m * l, std::min(m * l, n)));
    base_rank_.assign(1, 0);
    stacked_residual_ = ys.stacked_y();
  }
}

double SompState::max_residual_norm() const {
  return residuals_.colwise().norm().maxCoeff();
}

void SompState::append_direction(Matrix& basis, Index& rank, const Vector& column,
                                 Eigen::Ref<Vector> residual) {
  const double column_norm = column.norm();
  if (column_norm == 0.0) return;
  Vector w = column;
  // Two Gram-Schmidt passes keep the basis orthonormal even under heavy
  // cancellation.
  for (int pass = 0; pass < 2 && rank > 0; ++pass)
    w -= basis.leftCols(rank) * (basis.leftCols(rank).transpose() * w);
  const double w_norm = w.norm();
  if (w_norm <= kDependentTol * column_norm) return;  // span unchanged
  if (rank == basis.cols()) return;                   // span already full
  basis.col(rank) = w / w_norm;
  residual -= basis.col(rank) * basis.col(rank).dot(residual);
  ++rank;
}

Index SompState::step() {
  Vector u = config_.detection == Detection::A ? correlate_a(phis_, residuals_)
                                               : correlate_b(phis_, residuals_);
  const Index chosen = select_index(u, s_);
  s_ = s_.inserted(chosen);
  history_.push_back(chosen);

  const Index m = phis_.m(), l = phis_.l();
  if (config_.estimation == Estimation::C) {
    for (Index i = 0; i < l; ++i) {
      Vector col = phis_.phis[static_cast<std::size_t>(i)].col(chosen);
      append_direction(bases_[static_cast<std::size_t>(i)],
                       base_rank_[static_cast<std::size_t>(i)], col,
                       residuals_.col(i));
    }
  } else {
    Vector col(m * l);
    for (Index i = 0; i < l; ++i)
      col.segment(i * m, m) = phis_.phis[static_cast<std::size_t>(i)].col(chosen);
    append_direction(bases_[0], base_rank_[0], col, stacked_residual_);
    for (Index i = 0; i < l; ++i) residuals_.col(i) = stacked_residual_.segment(i * m, m);
  }
  ++t_;
  return chosen;
}

RecoveryResult somp_run(const SensingEnsemble& phis, const MeasurementEnsemble& ys,
                        Index k, const SolverConfig& config) {
  if (k < 1) throw std::invalid_argument("somp_run: k must be >= 1");
  config.validate();

  SompState state(phis, ys, config);
  const Index iterations = config.max_iters.value_or(k);
  const double floor_abs = config.residual_floor * ys.ys.norm();

  RecoveryResult result;
  for (Index t = 0; t < iterations; ++t) {
    if (state.max_residual_norm() <= floor_abs) {
      result.early_stopped = true;
      break;
    }
    state.step();
  }

  result.support = state.support();
  result.iterations_run = state.t();
  result.estimates = result.support.empty()
                         ? Matrix::Zero(phis.n(), phis.l())
                         : estimate_c(phis, result.support, ys);
  return result;
}

}  // namespace jointcs
