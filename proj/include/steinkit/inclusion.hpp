#pragma once

#include <cstdint>
#include <vector>

#include "steinkit/stein.hpp"
#include "steinkit/types.hpp"

namespace steinkit {

/// The right-hand side of the difference inclusion x(j+1) in {A x(j) : A in M}:
/// a finite set of real square matrices of a common order.
class MatrixSet {
 public:
  MatrixSet(Eigen::Index order, std::vector<RealMatrix> members);

  Eigen::Index order() const { return order_; }
  const std::vector<RealMatrix>& members() const { return members_; }

 private:
  Eigen::Index order_;
  std::vector<RealMatrix> members_;
};

/// Per-step member selection rule.
///
/// fixed: caller-supplied index list. uniform_random: member index drawn as
/// rng() % k from a seeded mt19937_64 (deterministic across platforms).
/// adversarial_greedy: argmax_j ||A_j x||_2 one step ahead, ties to the
/// lowest index.
class Schedule {
 public:
  enum class Kind { fixed, uniform_random, adversarial_greedy };

  static Schedule fixed(std::vector<int> indices);
  static Schedule uniform_random(std::uint64_t seed);
  static Schedule adversarial_greedy();

  Kind kind() const { return kind_; }
  const std::vector<int>& indices() const { return indices_; }
  std::uint64_t seed() const { return seed_; }

 private:
  explicit Schedule(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<int> indices_;
  std::uint64_t seed_ = 0;
};

struct Trajectory {
  std::vector<RealVector> states;  // x(0), ..., x(J)
  std::vector<int> schedule;       // chosen member at steps 0, ..., J-1
  std::vector<double> norms;       // ||x(j)||_2
};

Trajectory simulate(const MatrixSet& m, const RealVector& x0, int steps,
                    const Schedule& schedule);

/// Exponential-convergence certificate at rate alpha via the unweighted
/// common Stein factor H = I: verdict yes iff every member's spectral norm
/// is at most alpha + 1e-10, which bounds every trajectory by
/// ||x(j)|| <= alpha^j ||x(0)||, regardless of schedule.
struct InclusionCertificate {
  Verdict verdict;
  double alpha;
  std::vector<double> member_norms;     // ||A_j||_2
  std::vector<SteinGapReport> reports;  // against the closed Stein set, H = I
};

InclusionCertificate certify(const MatrixSet& m, double alpha);

/// Weighted variant: membership of every A_j in the closed scaled Stein set
/// with factor H > 0. On yes, ||H^{1/2} x(j)||_2 contracts by alpha per step;
/// in the plain 2-norm the bound picks up beta = sqrt(cond(H)):
/// ||x(j)|| <= beta alpha^j ||x(0)||.
struct WeightedInclusionCertificate {
  Verdict verdict;
  double alpha;
  double beta;
  std::vector<double> weighted_norms;  // ||H^{1/2} A_j H^{-1/2}||_2
  std::vector<SteinGapReport> reports;
};

WeightedInclusionCertificate certify_weighted(const MatrixSet& m, double alpha,
                                              const ComplexMatrix& h);

}  // namespace steinkit
