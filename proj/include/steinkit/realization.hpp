#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "steinkit/mconvex.hpp"
#include "steinkit/types.hpp"

namespace steinkit {

/// State-space realization of the rational matrix function
/// F(z) = C (zI - A)^{-1} B + D, carried both as the block array
/// [[A, B], [C, D]] and as the flat (n+m) x (n+m) matrix face.
///
/// n = 0 (constant functions F = D) is allowed; m must be positive. Real
/// systems are stored as complex matrices with zero imaginary parts.
class RealizationArray {
 public:
  RealizationArray(Eigen::Index n, Eigen::Index m, ComplexMatrix a, ComplexMatrix b,
                   ComplexMatrix c, ComplexMatrix d);

  /// Splits a flat (n+m) x (n+m) matrix into the four blocks.
  static RealizationArray from_matrix(const ComplexMatrix& r, Eigen::Index n, Eigen::Index m);

  Eigen::Index state_order() const { return n_; }
  Eigen::Index port_size() const { return m_; }
  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& b() const { return b_; }
  const ComplexMatrix& c() const { return c_; }
  const ComplexMatrix& d() const { return d_; }

  /// The flat matrix face [[A, B], [C, D]].
  ComplexMatrix matrix() const;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  ComplexMatrix a_, b_, c_, d_;
};

/// Eigenvalues of the state matrix; where the poles of F can live.
ComplexVector pole_candidates(const RealizationArray& r);

/// Evaluates F(z). Throws NearPoleError when z is within
/// 1e-12 * (1 + |z|) of an eigenvalue of A.
ComplexMatrix evaluate(const RealizationArray& r, Complex z);

/// Same, with the eigenvalues of A supplied by the caller so that repeated
/// evaluation does not redo the eigensolve.
ComplexMatrix evaluate(const RealizationArray& r, Complex z, const ComplexVector& poles);

/// Cascade realization of the product function z -> F_a(z) F_b(z):
/// A = [[A_a, B_a C_b], [0, A_b]], B = [B_a D_b; B_b],
/// C = [C_a, D_a C_b], D = D_a D_b. Port sizes must match.
RealizationArray series_product(const RealizationArray& a, const RealizationArray& b);

/// Isometry tuple acting block-diagonally on the two faces of a realization:
/// each element is diag(v_{j,n}, v_{j,m}) with square blocks of sizes n and m,
/// and the elements' squares sum to I_{n+m}.
class BlockDiagIsometryTuple {
 public:
  BlockDiagIsometryTuple(Eigen::Index n, Eigen::Index m,
                         std::vector<std::pair<ComplexMatrix, ComplexMatrix>> blocks);

  Eigen::Index state_order() const { return n_; }
  Eigen::Index port_size() const { return m_; }
  const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& blocks() const { return blocks_; }

  /// The j-th element as a flat (n+m) x (n+m) block-diagonal matrix.
  ComplexMatrix element(std::size_t j) const;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> blocks_;
};

IsometryValidation validate_isometry(const BlockDiagIsometryTuple& t);

/// Matrix-convex combination sum_j v_j^* R_j v_j on the flat matrix face,
/// with v_j the block-diagonal tuple elements. All R_j must share (n, m).
RealizationArray combine_realizations(const BlockDiagIsometryTuple& t,
                                      const std::vector<RealizationArray>& rs);

/// A (candidate) certificate that F is bounded by one in operator norm
/// outside the closed unit disk: P > 0 together with the residual
/// diag(P, I_m) - R^* diag(P, I_m) R, which must be PSD.
struct KypCertificate {
  ComplexMatrix p;
  ComplexMatrix residual;
  double lambda_min = 0.0;  // of the residual
  Verdict verdict = Verdict::no;
};

/// Evaluates the certificate inequality for a given P > 0 (of order n).
/// Throws NotPositiveDefiniteError when P is not positive definite.
KypCertificate kyp_check(const RealizationArray& r, const ComplexMatrix& p);

/// The balanced special case P = I_n: residual I_{n+m} - R^* R.
KypCertificate kyp_check_balanced(const RealizationArray& r);

/// Change of state coordinates by T = P^{1/2} turning a valid certificate
/// (R, P) into a balanced one: returns (T A T^{-1}, T B, C T^{-1}, D), which
/// realizes the same function and passes kyp_check_balanced. Throws
/// PreconditionFailedError when (R, P) itself does not pass kyp_check.
RealizationArray normalize_certificate(const RealizationArray& r, const ComplexMatrix& p);

/// Searches for a certificate by the fixed-point iteration
///   P_{k+1} = A^* P_k A + C^* C
///             + (A^* P_k B + C^* D) (I - D^* D - B^* P_k B)^{-1} (B^* P_k A + D^* C)
/// started from P_0 = 0. Stops when ||P_{k+1} - P_k||_2 <= tol. Returns
/// nothing (inconclusive, not a refutation) when the pivot loses positive
/// definiteness or the iteration fails to settle within max_iter steps.
/// Throws UnstableError when spectral_radius(A) >= 1 - 1e-9.
std::optional<KypCertificate> certificate_search(const RealizationArray& r, int max_iter = 1000,
                                                 double tol = 1e-11);

/// Controllability and observability gramians X = A X A^* + B B^*,
/// Y = A^* Y A + C^* C, computed by the doubling iteration
/// (A_{k+1} = A_k^2, Q_{k+1} = Q_k + A_k Q_k A_k^*) until the increment
/// drops below 1e-12. Requires a stable A; the Stein-equation residuals are
/// verified to 1e-9 before returning.
struct Gramians {
  ComplexMatrix controllability;
  ComplexMatrix observability;
};

Gramians gramians(const RealizationArray& r);

/// The plane-rotation realization [[cos t, -sin t], [sin t, cos t]] of the
/// scalar function f(z) = (z cos t - 1)/(z - cos t); orthogonal, so
/// I - R^T R = 0 and the realized function has unit modulus on the circle.
RealizationArray rotation_realization(double theta);

/// The reflected variant diag(-1, 1) * rotation: [[-cos t, sin t],
/// [sin t, cos t]], realizing (z cos t + 1)/(z + cos t).
RealizationArray reflect_realization(double theta);

/// Givens rotation of the given order acting in coordinate plane (p, q),
/// 0 <= p < q < order: identity except entries (p,p) = (q,q) = cos t,
/// (p,q) = -sin t, (q,p) = sin t.
ComplexMatrix planar_rotation(Eigen::Index order, Eigen::Index p, Eigen::Index q, double theta);

/// Reads the same flat matrix with a different state/port split.
RealizationArray repartition(const RealizationArray& r, Eigen::Index new_n, Eigen::Index new_m);

/// A five-member demonstration family of scalar bounded realizations built
/// from parameters theta in (0, 1) and a > 1:
///   f1(z) = theta (a + z)/(a z + 1)   with symmetric 2x2 array,
///   f2 its sign-conjugated reflection, f3 = midpoint of the two arrays,
///   f4 a 3x3 array realizing the product f1 * f2 (state order 2),
///   f5 the midpoint of f4 and a rotated copy, output sign normalized so the
///      feedthrough entry is nonnegative.
struct ExampleFamily {
  RealizationArray f1, f2, f3, f4, f5;
};

ExampleFamily example_family(double theta, double a);

}  // namespace steinkit
