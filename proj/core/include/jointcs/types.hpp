#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jointcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dimension disagreement between objects that must match; the message
/// names the offending field.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Joint-sparsity contract violated: wrong support cardinality or a
/// nonzero entry outside the declared support.
class SparsityError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An exact combinatorial computation would exceed its budget.
class EnumerationLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Problem sizes: signal length n, measurements per sensor m, ensemble
/// size l, joint sparsity k.
struct ProblemDims {
  Index n = 0;
  Index m = 0;
  Index l = 0;
  Index k = 0;

  void validate() const {
    if (k < 1) throw std::invalid_argument("ProblemDims: k must be >= 1");
    if (n < k) throw std::invalid_argument("ProblemDims: k must be <= n");
    if (m < 1) throw std::invalid_argument("ProblemDims: m must be >= 1");
    if (l < 1) throw std::invalid_argument("ProblemDims: l must be >= 1");
  }
};

/// Ordered set of column indices. Strictly increasing, no duplicates.
/// The upper bound (signal length) is checked where it is known.
class SupportSet {
public:
  SupportSet() = default;

  /// Takes indices in any order; sorts them and rejects duplicates or
  /// negative entries.
  explicit SupportSet(std::vector<Index> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (idx_[i] < 0)
        throw std::invalid_argument("SupportSet: negative index");
      if (i > 0 && idx_[i] == idx_[i - 1])
        throw std::invalid_argument("SupportSet: duplicate index");
    }
  }

  Index size() const { return static_cast<Index>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  const std::vector<Index>& indices() const { return idx_; }
  Index operator[](std::size_t i) const { return idx_[i]; }

  bool contains(Index j) const {
    return std::binary_search(idx_.begin(), idx_.end(), j);
  }

  /// True iff every index of `other` is also in *this.
  bool contains_all(const SupportSet& other) const {
    return std::includes(idx_.begin(), idx_.end(), other.idx_.begin(),
                         other.idx_.end());
  }

  Index max_index() const { return idx_.empty() ? -1 : idx_.back(); }

  /// Copy with one more index. Throws on duplicates.
  SupportSet inserted(Index j) const {
    std::vector<Index> v = idx_;
    v.push_back(j);
    return SupportSet(std::move(v));
  }

  bool operator==(const SupportSet& other) const = default;

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

private:
  std::vector<Index> idx_;
};

/// Jointly sparse signal matrix, one signal per column, with its ground
/// truth support. All rows outside `omega` must be identically zero;
/// validate_problem enforces this.
struct SignalEnsemble {
  Matrix x;          // n x l
  SupportSet omega;  // |omega| = k

  Index n() const { return x.rows(); }
  Index l() const { return x.cols(); }
};

/// Per-sensor sensing matrices plus the two stacked forms used
/// downstream: the raw vertical stack and its 1/sqrt(L) rescaling.
struct SensingEnsemble {
  std::vector<Matrix> phis;  // each m x n

  Index l() const { return static_cast<Index>(phis.size()); }
  Index m() const { return phis.empty() ? 0 : phis.front().rows(); }
  Index n() const { return phis.empty() ? 0 : phis.front().cols(); }

  /// Vertical stack [phi^1; ...; phi^L], (m*l) x n.
  Matrix stacked_a() const {
    const Index rows = m() * l(), cols = n();
    Matrix a(rows, cols);
    for (Index i = 0; i < l(); ++i) {
      if (phis[static_cast<std::size_t>(i)].rows() != m() ||
          phis[static_cast<std::size_t>(i)].cols() != n())
        throw DimensionError("SensingEnsemble: phis[" + std::to_string(i) +
                             "] differs in shape from phis[0]");
      a.middleRows(i * m(), m()) = phis[static_cast<std::size_t>(i)];
    }
    return a;
  }

  /// (1/sqrt(L)) * stacked_a, the scaling the condition checkers expect.
  Matrix scaled_a() const { return stacked_a() / std::sqrt(double(l())); }
};

/// Per-sensor measurement columns y^i and their stacked vector.
struct MeasurementEnsemble {
  Matrix ys;  // m x l

  Index m() const { return ys.rows(); }
  Index l() const { return ys.cols(); }

  /// [y^1; ...; y^L] as one (m*l)-vector.
  Vector stacked_y() const {
    Vector v(ys.size());
    for (Index i = 0; i < ys.cols(); ++i) v.segment(i * ys.rows(), ys.rows()) = ys.col(i);
    return v;
  }
};

enum class Detection { A, B };
enum class Estimation { C, D };

/// Solver knobs. `max_iters` empty means "run k iterations".
/// `residual_floor` is relative to ||Y||_F; once every residual column
/// drops below it the iteration stops early.
struct SolverConfig {
  Detection detection = Detection::A;
  Estimation estimation = Estimation::C;
  std::optional<Index> max_iters;
  double residual_floor = 1e-12;

  void validate() const {
    if (max_iters && *max_iters < 1)
      throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(residual_floor > 0.0))
      throw std::invalid_argument("SolverConfig: residual_floor must be > 0");
  }
};

/// A dimension- and sparsity-checked problem instance.
struct Problem {
  ProblemDims dims;
  SignalEnsemble signals;
  SensingEnsemble sensing;
};

/// Checks every type invariant and all cross-object dimensions. Throws
/// DimensionError / SparsityError naming the offending field.
Problem validate_problem(const ProblemDims& dims, SignalEnsemble signals,
                         SensingEnsemble sensing);

}  // namespace jointcs
