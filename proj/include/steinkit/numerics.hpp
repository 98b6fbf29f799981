#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "steinkit/types.hpp"

namespace steinkit {

// Tolerance conventions used across the library.
inline constexpr double kHermitianTolFactor = 1e-12;  // x max(1, ||M||_2)
inline constexpr double kPsdTolFactor = 1e-10;        // x (1 + ||H||_2)

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // unitary; column j pairs with eigenvalues(j)
};

/// Thin singular value decomposition m = u * diag(s) * v^*, s descending.
struct Svd {
  ComplexMatrix u;
  RealVector singular_values;
  ComplexMatrix v;
};

namespace detail {

double spectral_norm_impl(const ComplexMatrix& m);
double spectral_radius_impl(const ComplexMatrix& m);
Svd svd_impl(const ComplexMatrix& m);

// Symmetrizes, eigensolves, and enforces the Hermitian tolerance gate in one
// pass so callers don't pay for a second decomposition.
struct HermEigData {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
  double norm2;  // max |eigenvalue|
};
HermEigData herm_eig(const ComplexMatrix& m, const char* caller);

Verdict is_psd_impl(const ComplexMatrix& h, bool strict, double tol);
ComplexMatrix hermitian_sqrt_impl(const ComplexMatrix& h, double tol);
ComplexVector eigenvalues_impl(const ComplexMatrix& m);

}  // namespace detail

/// Throws InvalidInputError if the expression has NaN/Inf entries.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what = "matrix") {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + " has non-finite entries");
  }
}

template <typename Derived>
ComplexMatrix to_complex(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<Complex>();
}

/// Largest singular value. Accurate to ~1e-12 relative at desk scale.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  return detail::spectral_norm_impl(to_complex(m));
}

/// Square root of the sum of squared entry moduli.
template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  return m.norm();
}

/// Largest eigenvalue modulus of a square matrix.
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  if (m.rows() != m.cols()) throw ShapeError("spectral_radius: matrix must be square");
  return detail::spectral_radius_impl(to_complex(m));
}

/// All eigenvalues of a square matrix (unordered).
template <typename Derived>
ComplexVector eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  if (m.rows() != m.cols()) throw ShapeError("eigenvalues: matrix must be square");
  return detail::eigenvalues_impl(to_complex(m));
}

/// (m + m^*)/2, evaluated through a temporary so callers may assign the
/// result back to the argument without transpose aliasing.
template <typename Derived>
ComplexMatrix hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_part: matrix must be square");
  ComplexMatrix c = to_complex(m);
  ComplexMatrix ct = c.adjoint();
  return 0.5 * (c + ct);
}

/// Entrywise deviation from Hermitian symmetry, max |m - m^*|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_defect: matrix must be square");
  if (m.rows() == 0) return 0.0;
  ComplexMatrix c = to_complex(m);
  return (c - c.adjoint()).cwiseAbs().maxCoeff();
}

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitianError if the
/// input deviates from Hermitian symmetry by more than 1e-12 * max(1, ||m||_2).
template <typename Derived>
HermitianEigen hermitian_eigendecomposition(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  auto e = detail::herm_eig(to_complex(m), "hermitian_eigendecomposition");
  return {std::move(e.eigenvalues), std::move(e.eigenvectors)};
}

/// Thin SVD with descending singular values and orthonormal u, v columns.
template <typename Derived>
Svd svd(const Eigen::MatrixBase<Derived>& m) {
  require_finite(m);
  return detail::svd_impl(to_complex(m));
}

/// Tolerance-aware positive (semi)definiteness test for a Hermitian matrix.
///
/// strict mode: yes if lambda_min > tol, marginal if |lambda_min| <= tol,
/// no otherwise. Semi mode: yes iff lambda_min >= -tol. A negative `tol`
/// selects the default 1e-10 * (1 + ||h||_2).
template <typename Derived>
Verdict is_psd(const Eigen::MatrixBase<Derived>& h, bool strict, double tol = -1.0) {
  require_finite(h);
  return detail::is_psd_impl(to_complex(h), strict, tol);
}

/// Hermitian square root of a PSD matrix. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything below -tol raises NotPsdError.
template <typename Derived>
ComplexMatrix hermitian_sqrt(const Eigen::MatrixBase<Derived>& h, double tol = -1.0) {
  require_finite(h);
  return detail::hermitian_sqrt_impl(to_complex(h), tol);
}

}  // namespace steinkit
