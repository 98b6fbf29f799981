#include "steinkit/realization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>

#include "steinkit/numerics.hpp"

namespace steinkit {

namespace {

// Relative exclusion radius around eigenvalues of A during evaluation.
constexpr double kPoleExclusionFactor = 1e-12;
// State matrices with spectral radius above this are treated as unstable by
// the iterative solvers (certificate search, gramians).
constexpr double kStableRadiusBound = 1.0 - 1e-9;

}  // namespace

RealizationArray::RealizationArray(Eigen::Index n, Eigen::Index m, ComplexMatrix a,
                                   ComplexMatrix b, ComplexMatrix c, ComplexMatrix d)
    : n_(n), m_(m), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (n_ < 0 || m_ < 1) {
    throw InvalidInputError("RealizationArray: need state order >= 0 and port size >= 1");
  }
  if (a_.rows() != n_ || a_.cols() != n_ || b_.rows() != n_ || b_.cols() != m_ ||
      c_.rows() != m_ || c_.cols() != n_ || d_.rows() != m_ || d_.cols() != m_) {
    throw ShapeError("RealizationArray: block shapes inconsistent with (n, m)");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(d_, "D");
}

RealizationArray RealizationArray::from_matrix(const ComplexMatrix& r, Eigen::Index n,
                                               Eigen::Index m) {
  if (n < 0 || m < 1) {
    throw InvalidInputError("RealizationArray: need state order >= 0 and port size >= 1");
  }
  if (r.rows() != r.cols() || r.rows() != n + m) {
    throw ShapeError("RealizationArray: flat matrix must be square of order n + m");
  }
  return RealizationArray(n, m, r.topLeftCorner(n, n), r.topRightCorner(n, m),
                          r.bottomLeftCorner(m, n), r.bottomRightCorner(m, m));
}

ComplexMatrix RealizationArray::matrix() const {
  ComplexMatrix r(n_ + m_, n_ + m_);
  r.topLeftCorner(n_, n_) = a_;
  r.topRightCorner(n_, m_) = b_;
  r.bottomLeftCorner(m_, n_) = c_;
  r.bottomRightCorner(m_, m_) = d_;
  return r;
}

ComplexVector pole_candidates(const RealizationArray& r) {
  if (r.state_order() == 0) return ComplexVector(0);
  return eigenvalues(r.a());
}

ComplexMatrix evaluate(const RealizationArray& r, Complex z) {
  return evaluate(r, z, pole_candidates(r));
}

ComplexMatrix evaluate(const RealizationArray& r, Complex z, const ComplexVector& poles) {
  const double exclusion = kPoleExclusionFactor * (1.0 + std::abs(z));
  for (Eigen::Index i = 0; i < poles.size(); ++i) {
    if (std::abs(z - poles(i)) <= exclusion) {
      throw NearPoleError("evaluate: z within exclusion radius of an eigenvalue of A", poles(i));
    }
  }
  if (r.state_order() == 0) return r.d();
  ComplexMatrix shifted = -r.a();
  shifted.diagonal().array() += z;
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  return r.c() * lu.solve(r.b()) + r.d();
}

RealizationArray series_product(const RealizationArray& a, const RealizationArray& b) {
  if (a.port_size() != b.port_size()) {
    throw ShapeError("series_product: port sizes must match");
  }
  const Eigen::Index na = a.state_order(), nb = b.state_order(), m = a.port_size();
  ComplexMatrix ca = ComplexMatrix::Zero(na + nb, na + nb);
  ca.topLeftCorner(na, na) = a.a();
  ca.topRightCorner(na, nb) = a.b() * b.c();
  ca.bottomRightCorner(nb, nb) = b.a();
  ComplexMatrix cb(na + nb, m);
  cb.topRows(na) = a.b() * b.d();
  cb.bottomRows(nb) = b.b();
  ComplexMatrix cc(m, na + nb);
  cc.leftCols(na) = a.c();
  cc.rightCols(nb) = a.d() * b.c();
  return RealizationArray(na + nb, m, std::move(ca), std::move(cb), std::move(cc),
                          a.d() * b.d());
}

BlockDiagIsometryTuple::BlockDiagIsometryTuple(
    Eigen::Index n, Eigen::Index m, std::vector<std::pair<ComplexMatrix, ComplexMatrix>> blocks)
    : n_(n), m_(m), blocks_(std::move(blocks)) {
  if (n_ < 0 || m_ < 1) {
    throw InvalidInputError("BlockDiagIsometryTuple: need n >= 0 and m >= 1");
  }
  if (blocks_.empty()) {
    throw InvalidInputError("BlockDiagIsometryTuple: at least one element required");
  }
  for (const auto& [vn, vm] : blocks_) {
    if (vn.rows() != n_ || vn.cols() != n_ || vm.rows() != m_ || vm.cols() != m_) {
      throw ShapeError("BlockDiagIsometryTuple: element blocks must be n x n and m x m");
    }
    require_finite(vn, "state block");
    require_finite(vm, "port block");
  }
}

ComplexMatrix BlockDiagIsometryTuple::element(std::size_t j) const {
  if (j >= blocks_.size()) throw IndexError("BlockDiagIsometryTuple: element index out of range");
  ComplexMatrix e = ComplexMatrix::Zero(n_ + m_, n_ + m_);
  e.topLeftCorner(n_, n_) = blocks_[j].first;
  e.bottomRightCorner(m_, m_) = blocks_[j].second;
  return e;
}

IsometryValidation validate_isometry(const BlockDiagIsometryTuple& t) {
  const Eigen::Index d = t.state_order() + t.port_size();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < t.blocks().size(); ++j) {
    ComplexMatrix e = t.element(j);
    sum += e.adjoint() * e;
  }
  const double defect = spectral_norm(sum - ComplexMatrix::Identity(d, d));
  return {defect <= kIsometryTol ? Verdict::yes : Verdict::no, defect};
}

RealizationArray combine_realizations(const BlockDiagIsometryTuple& t,
                                      const std::vector<RealizationArray>& rs) {
  if (rs.size() != t.blocks().size()) {
    throw ShapeError("combine_realizations: one realization per tuple element required");
  }
  for (const auto& r : rs) {
    if (r.state_order() != t.state_order() || r.port_size() != t.port_size()) {
      throw ShapeError("combine_realizations: all realizations must share the tuple's (n, m)");
    }
  }
  IsometryValidation v = validate_isometry(t);
  if (v.verdict != Verdict::yes) {
    throw InvalidIsometryError("combine_realizations: tuple defect " + std::to_string(v.defect) +
                               " exceeds " + std::to_string(kIsometryTol));
  }
  const Eigen::Index d = t.state_order() + t.port_size();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < rs.size(); ++j) {
    ComplexMatrix e = t.element(j);
    sum += e.adjoint() * rs[j].matrix() * e;
  }
  return RealizationArray::from_matrix(sum, t.state_order(), t.port_size());
}

namespace {

// Certificate residual without the positive-definiteness gate on P; the
// Riccati search validates its converged (possibly singular PSD) iterate here.
KypCertificate make_certificate(const RealizationArray& r, const ComplexMatrix& p) {
  const Eigen::Index n = r.state_order(), m = r.port_size();
  ComplexMatrix w = ComplexMatrix::Zero(n + m, n + m);
  w.topLeftCorner(n, n) = p;
  w.bottomRightCorner(m, m).setIdentity();
  const ComplexMatrix rf = r.matrix();
  ComplexMatrix residual = hermitian_part(w - rf.adjoint() * w * rf);
  auto e = detail::herm_eig(residual, "kyp_check");
  KypCertificate cert;
  cert.p = p;
  cert.residual = std::move(residual);
  cert.lambda_min = e.eigenvalues(0);
  cert.verdict = detail::is_psd_impl(cert.residual, /*strict=*/false, -1.0);
  return cert;
}

}  // namespace

KypCertificate kyp_check(const RealizationArray& r, const ComplexMatrix& p) {
  if (p.rows() != r.state_order() || p.cols() != r.state_order()) {
    throw ShapeError("kyp_check: P must be square of the state order");
  }
  require_finite(p, "P");
  if (r.state_order() > 0) {
    auto e = detail::herm_eig(p, "kyp_check");  // throws NotHermitianError if skewed
    if (!(e.eigenvalues(0) > kPsdTolFactor * (1.0 + e.norm2))) {
      throw NotPositiveDefiniteError("kyp_check: P must be positive definite");
    }
  }
  return make_certificate(r, p);
}

KypCertificate kyp_check_balanced(const RealizationArray& r) {
  return make_certificate(r, ComplexMatrix::Identity(r.state_order(), r.state_order()));
}

RealizationArray normalize_certificate(const RealizationArray& r, const ComplexMatrix& p) {
  KypCertificate cert = kyp_check(r, p);
  if (cert.verdict != Verdict::yes) {
    throw PreconditionFailedError("normalize_certificate: (R, P) does not satisfy the certificate inequality");
  }
  if (r.state_order() == 0) return r;
  ComplexMatrix t = hermitian_sqrt(p);
  Eigen::LLT<ComplexMatrix> llt(t);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("normalize_certificate: P^{1/2} factorization failed");
  }
  // X T^{-1} for Hermitian T, via the adjoint system.
  ComplexMatrix a = llt.solve((t * r.a()).adjoint()).adjoint();
  ComplexMatrix c = llt.solve(r.c().adjoint()).adjoint();
  RealizationArray out(r.state_order(), r.port_size(), std::move(a), t * r.b(), std::move(c),
                       r.d());
  if (kyp_check_balanced(out).verdict != Verdict::yes) {
    throw Error("normalize_certificate: balanced form failed the certificate inequality");
  }
  return out;
}

std::optional<KypCertificate> certificate_search(const RealizationArray& r, int max_iter,
                                                 double tol) {
  if (max_iter < 1 || !(tol > 0.0)) {
    throw InvalidInputError("certificate_search: need max_iter >= 1 and tol > 0");
  }
  const Eigen::Index n = r.state_order(), m = r.port_size();
  if (n == 0) {
    KypCertificate cert = make_certificate(r, ComplexMatrix(0, 0));
    if (cert.verdict == Verdict::yes) return cert;
    return std::nullopt;
  }
  if (detail::spectral_radius_impl(r.a()) >= kStableRadiusBound) {
    throw UnstableError("certificate_search: spectral_radius(A) must stay below 1");
  }
  const ComplexMatrix dd = r.d().adjoint() * r.d();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    ComplexMatrix pivot =
        hermitian_part(ComplexMatrix::Identity(m, m) - dd - r.b().adjoint() * p * r.b());
    auto pe = detail::herm_eig(pivot, "certificate_search");
    if (!(pe.eigenvalues(0) > 1e-12 * (1.0 + pe.norm2))) return std::nullopt;
    Eigen::LLT<ComplexMatrix> llt(pivot);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const ComplexMatrix cross = r.b().adjoint() * p * r.a() + r.d().adjoint() * r.c();
    ComplexMatrix next = hermitian_part(r.a().adjoint() * p * r.a() + r.c().adjoint() * r.c() +
                                        cross.adjoint() * llt.solve(cross));
    const double step = detail::spectral_norm_impl(next - p);
    p = std::move(next);
    if (step <= tol) {
      KypCertificate cert = make_certificate(r, p);
      if (cert.verdict == Verdict::yes) return cert;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

// Partial sums of sum_k A^k Q A^{*k} by repeated squaring of A.
ComplexMatrix stein_sum(const ComplexMatrix& a0, const ComplexMatrix& q0, const char* what) {
  ComplexMatrix q = q0;
  ComplexMatrix ak = a0;
  for (int it = 0; it < 100; ++it) {
    ComplexMatrix inc = ak * q * ak.adjoint();
    q = hermitian_part(q + inc);
    if (detail::spectral_norm_impl(inc) <= 1e-12) return q;
    ak = ComplexMatrix(ak * ak);
  }
  throw Error(std::string(what) + ": doubling iteration did not converge");
}

void check_stein_residual(const ComplexMatrix& a, const ComplexMatrix& q,
                          const ComplexMatrix& rhs, const char* what) {
  const double res = detail::spectral_norm_impl(q - a * q * a.adjoint() - rhs);
  if (res > 1e-9) {
    throw Error(std::string(what) + ": Stein equation residual " + std::to_string(res) +
                " exceeds 1e-9");
  }
}

}  // namespace

Gramians gramians(const RealizationArray& r) {
  if (r.state_order() == 0) return {ComplexMatrix(0, 0), ComplexMatrix(0, 0)};
  if (detail::spectral_radius_impl(r.a()) >= kStableRadiusBound) {
    throw UnstableError("gramians: spectral_radius(A) must stay below 1");
  }
  const ComplexMatrix at = r.a().adjoint();
  ComplexMatrix x = stein_sum(r.a(), hermitian_part(r.b() * r.b().adjoint()), "controllability");
  ComplexMatrix y = stein_sum(at, hermitian_part(r.c().adjoint() * r.c()), "observability");
  check_stein_residual(r.a(), x, r.b() * r.b().adjoint(), "controllability");
  check_stein_residual(at, y, r.c().adjoint() * r.c(), "observability");
  return {std::move(x), std::move(y)};
}

RealizationArray rotation_realization(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  RealMatrix r(2, 2);
  r << c, -s, s, c;
  return RealizationArray::from_matrix(to_complex(r), 1, 1);
}

RealizationArray reflect_realization(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  RealMatrix r(2, 2);
  r << -c, s, s, c;
  return RealizationArray::from_matrix(to_complex(r), 1, 1);
}

ComplexMatrix planar_rotation(Eigen::Index order, Eigen::Index p, Eigen::Index q, double theta) {
  if (!(0 <= p && p < q && q < order)) {
    throw IndexError("planar_rotation: need 0 <= p < q < order");
  }
  ComplexMatrix r = ComplexMatrix::Identity(order, order);
  const double c = std::cos(theta), s = std::sin(theta);
  r(p, p) = c;
  r(q, q) = c;
  r(p, q) = -s;
  r(q, p) = s;
  return r;
}

RealizationArray repartition(const RealizationArray& r, Eigen::Index new_n, Eigen::Index new_m) {
  if (new_n < 0 || new_m < 1 || new_n + new_m != r.state_order() + r.port_size()) {
    throw ShapeError("repartition: new split must preserve n + m with new_m >= 1");
  }
  return RealizationArray::from_matrix(r.matrix(), new_n, new_m);
}

ExampleFamily example_family(double theta, double a) {
  if (!(theta > 0.0 && theta < 1.0) || !(a > 1.0)) {
    throw ParameterError("example_family: requires theta in (0, 1) and a > 1");
  }
  const double g = std::sqrt(theta * (a * a - 1.0));

  RealMatrix r1(2, 2);
  r1 << -1.0, g, g, theta;
  r1 /= a;

  RealMatrix flip_l(2, 2), flip_r(2, 2);
  flip_l << 1.0, 0.0, 0.0, -1.0;
  flip_r << -1.0, 0.0, 0.0, 1.0;
  RealMatrix r2 = flip_l * r1 * flip_r;

  RealMatrix r3 = 0.5 * (r1 + r2);

  RealMatrix r4(3, 3);
  r4 << -1.0, (theta / a) * (1.0 - a * a), (theta / a) * g,  //
      0.0, 1.0, g,                                           //
      -g, (theta / a) * g, -theta * theta / a;
  r4 /= a;

  RealMatrix pi(3, 3);
  pi << 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  RealMatrix r5 = 0.5 * (r4 + RealMatrix(pi.transpose() * r4 * pi));
  if (r5(2, 2) < 0.0) {
    // Sign of the scalar output row is a free normalization (it conjugates the
    // realized function by -1); pick the representative with feedthrough >= 0.
    r5.row(2) *= -1.0;
  }

  return ExampleFamily{RealizationArray::from_matrix(to_complex(r1), 1, 1),
                       RealizationArray::from_matrix(to_complex(r2), 1, 1),
                       RealizationArray::from_matrix(to_complex(r3), 1, 1),
                       RealizationArray::from_matrix(to_complex(r4), 2, 1),
                       RealizationArray::from_matrix(to_complex(r5), 2, 1)};
}

}  // namespace steinkit
