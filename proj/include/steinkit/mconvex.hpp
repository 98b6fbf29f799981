#pragma once

#include <vector>

#include "steinkit/types.hpp"

namespace steinkit {

// Absolute tolerance on ||sum_j v_j^* v_j - I||_2 for isometry tuples.
inline constexpr double kIsometryTol = 1e-10;

/// A tuple of blocks v_1, ..., v_k with v_j of size eta_j x n whose squares
/// sum to the identity: sum_j v_j^* v_j = I_n. The blocks may have different
/// row counts eta_j. Construction checks shapes and finiteness only; whether
/// the defining sum property holds is a separate question answered by
/// validate_isometry (so that near-misses can be inspected rather than
/// rejected outright).
class IsometryTuple {
 public:
  IsometryTuple(Eigen::Index target_order, std::vector<ComplexMatrix> blocks);

  Eigen::Index target_order() const { return n_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }

 private:
  Eigen::Index n_;
  std::vector<ComplexMatrix> blocks_;
};

struct IsometryValidation {
  Verdict verdict;
  double defect;  // ||sum_j v_j^* v_j - I_n||_2
};

/// Checks the sum-to-identity property within kIsometryTol (absolute).
IsometryValidation validate_isometry(const IsometryTuple& t);

/// Matrix-convex combination sum_j v_j^* a_j v_j, accumulated in input order.
/// a_j must be square of size eta_j. Throws InvalidIsometryError when the
/// tuple fails validation and ShapeError on any size mismatch.
ComplexMatrix mconvex_combine(const IsometryTuple& t, const std::vector<ComplexMatrix>& blocks);

/// The classical counterexample showing the Frobenius-norm ball is not closed
/// under matrix-convex combinations: A = diag(4, 3) has ||A||_F = 5, yet
/// compressing diag(A, A) by a 4x2 isometry yields 4*I_2 with Frobenius norm
/// 4*sqrt(2) > 5.
struct FrobeniusCounterexample {
  ComplexMatrix a;        // diag(4, 3)
  ComplexMatrix upsilon;  // 4x2 isometry
  ComplexMatrix a_hat;    // upsilon^* diag(a, a) upsilon = 4*I_2
  double a_frobenius = 0.0;      // 5
  double a_hat_frobenius = 0.0;  // 4*sqrt(2)
};

FrobeniusCounterexample frobenius_counterexample();

/// Dilation u a u^* by a single isometry u (u^* u = I). Preserves the
/// spectral norm of a and produces a matrix of rank at most a's order.
/// Throws NotIsometryError when u^* u deviates from I by more than
/// kIsometryTol in spectral norm.
ComplexMatrix dilate_by_isometry(const ComplexMatrix& u, const ComplexMatrix& a);

}  // namespace steinkit
