#pragma once

#include "steinkit/numerics.hpp"
#include "steinkit/types.hpp"

namespace steinkit {

/// A scaled Stein set: the matrices A with H - (1/alpha^2) A^* H A positive
/// definite (open variant) or positive semidefinite (closed variant).
///
/// H must be Hermitian; it does not have to be positive definite. Whether it
/// is gets decided once at construction and cached, since several operations
/// are only available in the positive definite case.
class SteinSetSpec {
 public:
  SteinSetSpec(ComplexMatrix h, double alpha, bool closed);

  const ComplexMatrix& h() const { return h_; }
  double alpha() const { return alpha_; }
  bool closed() const { return closed_; }
  bool positive_definite_h() const { return positive_definite_; }
  Eigen::Index order() const { return h_.rows(); }

 private:
  ComplexMatrix h_;
  double alpha_;
  bool closed_;
  bool positive_definite_;
};

/// Result of a membership test via the defining inequality.
struct SteinGapReport {
  ComplexMatrix gap;  // H - (1/alpha^2) A^* H A, Hermitian
  double lambda_min;
  Verdict member;
};

/// Computes the Stein gap of `a` against `set` and decides membership:
/// strict positive definiteness for open sets, semidefiniteness for closed.
SteinGapReport stein_gap(const SteinSetSpec& set, const ComplexMatrix& a);

/// ||H^{1/2} A H^{-1/2}||_2, defined when H is positive definite.
double weighted_spectral_norm(const SteinSetSpec& set, const ComplexMatrix& a);

/// Membership via the equivalent weighted-norm characterization
/// ||H^{1/2} A H^{-1/2}||_2 < alpha (<= alpha for the closed set).
/// Requires positive definite H; agrees with stein_gap outside the
/// tolerance band. This is an independent route from stein_gap on purpose.
Verdict norm_membership(const SteinSetSpec& set, const ComplexMatrix& a);

struct ProductClosureReport {
  SteinGapReport product;              // gap of AB at scale alpha*beta
  ComplexMatrix constructive_residual; // (1/beta^2) B^* Q_a B + Q_b
  double mismatch;                     // ||gap(AB) - constructive||_2
};

/// Verifies that membership is preserved under products: for verified members
/// A (scale alpha) and B (scale beta) of the Stein set of H, the product AB is
/// a member at scale alpha*beta, and its gap decomposes constructively as
/// (1/beta^2) B^* Q_a B + Q_b with Q_a, Q_b the factor gaps. Throws
/// PreconditionFailedError when A or B fails its own membership test.
ProductClosureReport product_closure_check(const ComplexMatrix& h, bool closed,
                                           const ComplexMatrix& a, double alpha,
                                           const ComplexMatrix& b, double beta);

/// Witness that no set containing a matrix of spectral norm 1 + eps > 1 stays
/// inside the closed unit-norm ball under products: pairs B with
/// A = B^*/(1 + 2 eps), whose norm is below one while ||AB||_2 exceeds one.
struct MaximalityWitness {
  ComplexMatrix a;
  double epsilon;         // ||B||_2 - 1
  double a_norm;          // (1+eps)/(1+2eps), strictly below 1
  double product_norm;    // ||AB||_2 = (1+eps)^2/(1+2eps), strictly above 1
  double product_radius;  // spectral radius of AB; equals product_norm (AB is PSD)
};

/// Builds the witness for any B with ||B||_2 > 1. Throws NotOutsideError when
/// ||B||_2 <= 1. All advertised identities are verified to 1e-10 before
/// returning.
MaximalityWitness maximality_witness(const ComplexMatrix& b);

/// For positive definite H and a member A of the closed set at scale alpha,
/// returns spectral_radius(a) after asserting it does not exceed alpha
/// (within tolerance). Throws PreconditionFailedError for non-members.
double spectral_radius_bound_check(const SteinSetSpec& set, const ComplexMatrix& a);

}  // namespace steinkit
