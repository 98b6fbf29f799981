#include "steinkit/mconvex.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "steinkit/numerics.hpp"

namespace steinkit {

IsometryTuple::IsometryTuple(Eigen::Index target_order, std::vector<ComplexMatrix> blocks)
    : n_(target_order), blocks_(std::move(blocks)) {
  if (n_ <= 0) throw ShapeError("IsometryTuple: target order must be positive");
  if (blocks_.empty()) throw ShapeError("IsometryTuple: at least one block required");
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const ComplexMatrix& v = blocks_[j];
    require_finite(v, "isometry block");
    if (v.cols() != n_ || v.rows() == 0) {
      throw ShapeError("IsometryTuple: block " + std::to_string(j) +
                       " must have " + std::to_string(n_) + " columns");
    }
  }
}

IsometryValidation validate_isometry(const IsometryTuple& t) {
  ComplexMatrix sum = ComplexMatrix::Zero(t.target_order(), t.target_order());
  for (const ComplexMatrix& v : t.blocks()) {
    sum += v.adjoint() * v;
  }
  const double defect =
      spectral_norm(sum - ComplexMatrix::Identity(t.target_order(), t.target_order()));
  return {defect <= kIsometryTol ? Verdict::yes : Verdict::no, defect};
}

ComplexMatrix mconvex_combine(const IsometryTuple& t, const std::vector<ComplexMatrix>& blocks) {
  if (blocks.size() != t.blocks().size()) {
    throw ShapeError("mconvex_combine: expected " + std::to_string(t.blocks().size()) +
                     " matrices, got " + std::to_string(blocks.size()));
  }
  auto validation = validate_isometry(t);
  if (validation.verdict != Verdict::yes) {
    throw InvalidIsometryError("mconvex_combine: tuple defect " +
                               std::to_string(validation.defect) + " exceeds tolerance");
  }
  ComplexMatrix acc = ComplexMatrix::Zero(t.target_order(), t.target_order());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const ComplexMatrix& a = blocks[j];
    require_finite(a, "combination block");
    const Eigen::Index eta = t.blocks()[j].rows();
    if (a.rows() != eta || a.cols() != eta) {
      throw ShapeError("mconvex_combine: matrix " + std::to_string(j) + " must be " +
                       std::to_string(eta) + "x" + std::to_string(eta));
    }
    acc += t.blocks()[j].adjoint() * a * t.blocks()[j];
  }
  return acc;
}

FrobeniusCounterexample frobenius_counterexample() {
  FrobeniusCounterexample out;
  out.a = ComplexMatrix(2, 2);
  out.a << 4, 0, 0, 3;
  out.upsilon = ComplexMatrix(4, 2);
  out.upsilon << 1, 0, 0, 0, 0, 1, 0, 0;

  ComplexMatrix big = ComplexMatrix::Zero(4, 4);
  big.topLeftCorner(2, 2) = out.a;
  big.bottomRightCorner(2, 2) = out.a;
  out.a_hat = out.upsilon.adjoint() * big * out.upsilon;

  out.a_frobenius = frobenius_norm(out.a);
  out.a_hat_frobenius = frobenius_norm(out.a_hat);
  if (!(out.a_hat_frobenius > out.a_frobenius) ||
      (out.a_hat - 4.0 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() != 0.0) {
    throw Error("frobenius_counterexample: construction check failed");
  }
  return out;
}

ComplexMatrix dilate_by_isometry(const ComplexMatrix& u, const ComplexMatrix& a) {
  require_finite(u, "U");
  require_finite(a, "A");
  if (a.rows() != a.cols()) throw ShapeError("dilate_by_isometry: A must be square");
  if (u.cols() != a.rows() || u.rows() < u.cols()) {
    throw ShapeError("dilate_by_isometry: U must be tall with as many columns as A's order");
  }
  const double defect = spectral_norm(
      ComplexMatrix(u.adjoint() * u) - ComplexMatrix::Identity(u.cols(), u.cols()));
  if (defect > kIsometryTol) {
    throw NotIsometryError("dilate_by_isometry: U^* U deviates from identity by " +
                           std::to_string(defect));
  }
  return u * a * u.adjoint();
}

}  // namespace steinkit
