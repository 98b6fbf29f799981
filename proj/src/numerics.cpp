#include "steinkit/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace steinkit {
namespace detail {

double spectral_norm_impl(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexVector eigenvalues_impl(const ComplexMatrix& m) {
  if (m.rows() == 0) return ComplexVector();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error("eigenvalues: solver failed to converge");
  }
  return es.eigenvalues();
}

double spectral_radius_impl(const ComplexMatrix& m) {
  if (m.rows() == 0) return 0.0;
  return eigenvalues_impl(m).cwiseAbs().maxCoeff();
}

Svd svd_impl(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

HermEigData herm_eig(const ComplexMatrix& m, const char* caller) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(caller) + ": matrix must be square");
  }
  if (m.rows() == 0) {
    return {RealVector(), ComplexMatrix(), 0.0};
  }
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(std::string(caller) + ": eigensolver failed to converge");
  }
  const double norm2 = es.eigenvalues().cwiseAbs().maxCoeff();
  if (defect > kHermitianTolFactor * std::max(1.0, norm2)) {
    throw NotHermitianError(std::string(caller) + ": matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
  return {es.eigenvalues(), es.eigenvectors(), norm2};
}

Verdict is_psd_impl(const ComplexMatrix& h, bool strict, double tol) {
  auto e = herm_eig(h, "is_psd");
  if (h.rows() == 0) return Verdict::yes;
  if (tol < 0.0) tol = kPsdTolFactor * (1.0 + e.norm2);
  const double lmin = e.eigenvalues(0);
  if (strict) {
    if (lmin > tol) return Verdict::yes;
    if (std::abs(lmin) <= tol) return Verdict::marginal;
    return Verdict::no;
  }
  return lmin >= -tol ? Verdict::yes : Verdict::no;
}

ComplexMatrix hermitian_sqrt_impl(const ComplexMatrix& h, double tol) {
  auto e = herm_eig(h, "hermitian_sqrt");
  if (h.rows() == 0) return h;
  if (tol < 0.0) tol = kPsdTolFactor * (1.0 + e.norm2);
  if (e.eigenvalues(0) < -tol) {
    throw NotPsdError("hermitian_sqrt: matrix is not positive semidefinite (lambda_min " +
                      std::to_string(e.eigenvalues(0)) + ")");
  }
  // Clamp the within-tolerance negatives before taking square roots.
  RealVector clamped = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  ComplexMatrix s = e.eigenvectors * clamped.asDiagonal() * e.eigenvectors.adjoint();
  return 0.5 * (s + s.adjoint());
}

}  // namespace detail
}  // namespace steinkit
