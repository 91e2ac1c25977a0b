#include "jointcs/types.hpp"

namespace jointcs {

Problem validate_problem(const ProblemDims& dims, SignalEnsemble signals,
                         SensingEnsemble sensing) {
  dims.validate();

  if (signals.x.rows() != dims.n)
    throw DimensionError("validate_problem: signals.x has " +
                         std::to_string(signals.x.rows()) + " rows, dims.n is " +
                         std::to_string(dims.n));
  if (signals.x.cols() != dims.l)
    throw DimensionError("validate_problem: signals.x has " +
                         std::to_string(signals.x.cols()) + " columns, dims.l is " +
                         std::to_string(dims.l));
  if (sensing.l() != dims.l)
    throw DimensionError("validate_problem: sensing holds " +
                         std::to_string(sensing.l()) + " matrices, dims.l is " +
                         std::to_string(dims.l));
  for (Index i = 0; i < sensing.l(); ++i) {
    const Matrix& phi = sensing.phis[static_cast<std::size_t>(i)];
    if (phi.rows() != dims.m || phi.cols() != dims.n)
      throw DimensionError("validate_problem: phis[" + std::to_string(i) +
                           "] is " + std::to_string(phi.rows()) + "x" +
                           std::to_string(phi.cols()) + ", expected " +
                           std::to_string(dims.m) + "x" + std::to_string(dims.n));
  }

  if (signals.omega.size() != dims.k)
    throw SparsityError("validate_problem: |omega| = " +
                        std::to_string(signals.omega.size()) + ", dims.k is " +
                        std::to_string(dims.k));
  if (signals.omega.max_index() >= dims.n)
    throw SparsityError("validate_problem: omega contains index " +
                        std::to_string(signals.omega.max_index()) +
                        " >= n = " + std::to_string(dims.n));

  for (Index r = 0; r < dims.n; ++r) {
    if (signals.omega.contains(r)) continue;
    for (Index c = 0; c < dims.l; ++c) {
      if (signals.x(r, c) != 0.0)
        throw SparsityError("validate_problem: x(" + std::to_string(r) + "," +
                            std::to_string(c) + ") is nonzero off omega");
    }
  }

  return Problem{dims, std::move(signals), std::move(sensing)};
}

}  // namespace jointcs
