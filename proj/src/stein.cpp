#include "steinkit/stein.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Cholesky>

namespace steinkit {

SteinSetSpec::SteinSetSpec(ComplexMatrix h, double alpha, bool closed)
    : h_(std::move(h)), alpha_(alpha), closed_(closed) {
  require_finite(h_, "H");
  if (h_.rows() != h_.cols() || h_.rows() == 0) {
    throw ShapeError("SteinSetSpec: H must be square and non-empty");
  }
  if (!(alpha_ > 0.0)) {
    throw ParameterError("SteinSetSpec: alpha must be positive");
  }
  auto e = detail::herm_eig(h_, "SteinSetSpec");  // enforces Hermitian H
  positive_definite_ = e.eigenvalues(0) > kPsdTolFactor * (1.0 + e.norm2);
}

namespace {

void check_member_shape(const SteinSetSpec& set, const ComplexMatrix& a, const char* caller) {
  require_finite(a, "A");
  if (a.rows() != set.order() || a.cols() != set.order()) {
    throw ShapeError(std::string(caller) + ": A must match the order of H");
  }
}

}  // namespace

SteinGapReport stein_gap(const SteinSetSpec& set, const ComplexMatrix& a) {
  check_member_shape(set, a, "stein_gap");
  const double inv = 1.0 / (set.alpha() * set.alpha());
  ComplexMatrix gap =
      hermitian_part(set.h() - inv * a.adjoint() * set.h() * a);  // exact in theory; kill rounding skew
  auto e = detail::herm_eig(gap, "stein_gap");
  Verdict member = detail::is_psd_impl(gap, /*strict=*/!set.closed(), -1.0);
  return {std::move(gap), e.eigenvalues(0), member};
}

double weighted_spectral_norm(const SteinSetSpec& set, const ComplexMatrix& a) {
  check_member_shape(set, a, "weighted_spectral_norm");
  if (!set.positive_definite_h()) {
    throw NotPositiveDefiniteError("weighted_spectral_norm: H must be positive definite");
  }
  ComplexMatrix t = hermitian_sqrt(set.h());
  Eigen::LLT<ComplexMatrix> llt(t);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("weighted_spectral_norm: H^{1/2} factorization failed");
  }
  // T A T^{-1} with T Hermitian: right-solve via the adjoint system.
  ComplexMatrix weighted = llt.solve((t * a).adjoint()).adjoint();
  return spectral_norm(weighted);
}

Verdict norm_membership(const SteinSetSpec& set, const ComplexMatrix& a) {
  check_member_shape(set, a, "norm_membership");
  if (!set.positive_definite_h()) {
    throw NotPositiveDefiniteError("norm_membership: H must be positive definite");
  }
  const double w = weighted_spectral_norm(set, a);
  const double band = kPsdTolFactor * (1.0 + w);
  const double margin = set.alpha() - w;
  if (set.closed()) {
    return margin >= -band ? Verdict::yes : Verdict::no;
  }
  if (margin > band) return Verdict::yes;
  if (std::abs(margin) <= band) return Verdict::marginal;
  return Verdict::no;
}

ProductClosureReport product_closure_check(const ComplexMatrix& h, bool closed,
                                           const ComplexMatrix& a, double alpha,
                                           const ComplexMatrix& b, double beta) {
  SteinSetSpec set_a(h, alpha, closed);
  SteinSetSpec set_b(h, beta, closed);
  SteinGapReport rep_a = stein_gap(set_a, a);
  SteinGapReport rep_b = stein_gap(set_b, b);
  if (rep_a.member != Verdict::yes) {
    throw PreconditionFailedError("product_closure_check: A is not a verified member at scale alpha");
  }
  if (rep_b.member != Verdict::yes) {
    throw PreconditionFailedError("product_closure_check: B is not a verified member at scale beta");
  }

  SteinSetSpec set_ab(h, alpha * beta, closed);
  SteinGapReport rep_ab = stein_gap(set_ab, a * b);

  ComplexMatrix constructive =
      hermitian_part((1.0 / (beta * beta)) * b.adjoint() * rep_a.gap * b + rep_b.gap);
  const double mismatch = spectral_norm(rep_ab.gap - constructive);
  if (mismatch > 1e-10 * std::max(1.0, spectral_norm(rep_ab.gap))) {
    throw Error("product_closure_check: constructive residual does not match the product gap");
  }
  return {std::move(rep_ab), std::move(constructive), mismatch};
}

MaximalityWitness maximality_witness(const ComplexMatrix& b) {
  require_finite(b, "B");
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw ShapeError("maximality_witness: B must be square and non-empty");
  }
  const double sigma = spectral_norm(b);
  if (!(sigma > 1.0)) {
    throw NotOutsideError("maximality_witness: ||B||_2 must exceed 1");
  }
  const double eps = sigma - 1.0;
  ComplexMatrix a = (1.0 / (1.0 + 2.0 * eps)) * b.adjoint();
  ComplexMatrix ab = a * b;

  const double a_norm = spectral_norm(a);
  const double product_norm = spectral_norm(ab);
  const double product_radius = spectral_radius(ab);
  const double expected_a = (1.0 + eps) / (1.0 + 2.0 * eps);
  const double expected_p = (1.0 + eps) * (1.0 + eps) / (1.0 + 2.0 * eps);

  const double tol = 1e-10 * (1.0 + expected_p);
  if (std::abs(a_norm - expected_a) > tol || std::abs(product_norm - expected_p) > tol ||
      std::abs(product_radius - product_norm) > tol ||
      is_psd(ab, /*strict=*/false) != Verdict::yes) {
    throw Error("maximality_witness: verification of the witness identities failed");
  }
  return {std::move(a), eps, a_norm, product_norm, product_radius};
}

double spectral_radius_bound_check(const SteinSetSpec& set, const ComplexMatrix& a) {
  check_member_shape(set, a, "spectral_radius_bound_check");
  if (!set.positive_definite_h()) {
    throw NotPositiveDefiniteError("spectral_radius_bound_check: H must be positive definite");
  }
  // Membership in the closed set is what the bound needs.
  SteinSetSpec closed_set(set.h(), set.alpha(), /*closed=*/true);
  if (stein_gap(closed_set, a).member != Verdict::yes) {
    throw PreconditionFailedError(
        "spectral_radius_bound_check: A is not a member of the closed set");
  }
  const double rho = spectral_radius(a);
  if (rho > set.alpha() + 1e-9 * (1.0 + set.alpha())) {
    throw Error("spectral_radius_bound_check: spectral radius exceeds the scale bound");
  }
  return rho;
}

}  // namespace steinkit
