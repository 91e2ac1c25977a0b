#pragma once

#include <vector>

#include "jointcs/types.hpp"

namespace jointcs {

/// Detection step (a): u[j] = sum_i |<phi^i_j, r^i>|.
Vector correlate_a(const SensingEnsemble& phis, const Matrix& residuals);

/// Detection step (b): u[j] = |sum_i <phi^i_j, r^i>|.
Vector correlate_b(const SensingEnsemble& phis, const Matrix& residuals);

/// Smallest index attaining the maximum of u over indices not in
/// `excluded`. Throws std::logic_error when every index is excluded.
Index select_index(const Vector& u, const SupportSet& excluded);

/// Estimation step (c): per-sensor minimum-norm least squares
/// x^i_S = pinv(phi^i_S) y^i, zero off S. Returns an n x l matrix.
Matrix estimate_c(const SensingEnsemble& phis, const SupportSet& s,
                  const MeasurementEnsemble& ys);

/// Estimation step (d): one minimum-norm least squares on the raw
/// stacked system A_S z = y_hat, broadcast to all l columns.
Matrix estimate_d(const SensingEnsemble& phis, const SupportSet& s,
                  const MeasurementEnsemble& ys);

/// r^i = y^i - phi^i_S * (estimate column i restricted to S).
/// Estimates must be zero off S.
Matrix update_residuals(const SensingEnsemble& phis, const SupportSet& s,
                        const Matrix& estimates, const MeasurementEnsemble& ys);

/// Final solver output. Estimates are nonzero only on rows in `support`.
struct RecoveryResult {
  SupportSet support;
  Matrix estimates;  // n x l
  Index iterations_run = 0;
  bool early_stopped = false;
};

/// One SOMP run in progress: iteration counter, detected support,
/// residual columns, and the selection history. step() advances one full
/// iteration (detect, support update, estimate, residual update).
///
/// Residuals are maintained through an incrementally grown orthonormal
/// basis of the selected columns' span (per sensor in mode C, of the
/// stacked system in mode D); the refit residual equals the projection
/// onto that span's orthocomplement, so no per-iteration least-squares
/// solve is materialized. update_residuals(estimate_*(...)) gives the
/// same columns and the unit tests pin the two routes against each other.
///
/// Holds references to the sensing and measurement ensembles; they must
/// outlive the state.
class SompState {
public:
  SompState(const SensingEnsemble& phis, const MeasurementEnsemble& ys,
            const SolverConfig& config);

  Index t() const { return t_; }
  const SupportSet& support() const { return s_; }
  const Matrix& residuals() const { return residuals_; }
  const std::vector<Index>& history() const { return history_; }

  /// Largest residual column norm; drives the early-stop test.
  double max_residual_norm() const;

  /// Runs one iteration and returns the chosen index.
  Index step();

private:
  void append_direction(Matrix& basis, Index& rank, const Vector& column,
                        Eigen::Ref<Vector> residual);

  const SensingEnsemble& phis_;
  const MeasurementEnsemble& ys_;
  SolverConfig config_;

  Index t_ = 0;
  SupportSet s_;
  std::vector<Index> history_;
  Matrix residuals_;  // m x l

  std::vector<Matrix> bases_;     // mode C: one per sensor; mode D: single stacked
  std::vector<Index> base_rank_;  // orthonormal columns in use
  Vector stacked_residual_;       // mode D only
};

/// Full SOMP: iterates for k rounds (or config.max_iters when set),
/// stopping early once every residual column norm falls to
/// config.residual_floor * ||Y||_F. The returned estimates are always
/// the per-sensor refit pinv(phi^i_S) y^i, whatever the estimation mode
/// used during the iterations.
RecoveryResult somp_run(const SensingEnsemble& phis, const MeasurementEnsemble& ys,
                        Index k, const SolverConfig& config);

}  // namespace jointcs
