#include "steinkit/inclusion.hpp"

#include <random>
#include <utility>

#include "steinkit/numerics.hpp"

namespace steinkit {

MatrixSet::MatrixSet(Eigen::Index order, std::vector<RealMatrix> members)
    : order_(order), members_(std::move(members)) {
  if (order_ < 1) throw InvalidInputError("MatrixSet: order must be positive");
  if (members_.empty()) throw InvalidInputError("MatrixSet: at least one member required");
  for (const RealMatrix& m : members_) {
    if (m.rows() != order_ || m.cols() != order_) {
      throw ShapeError("MatrixSet: every member must be square of the set order");
    }
    require_finite(m, "member");
  }
}

Schedule Schedule::fixed(std::vector<int> indices) {
  Schedule s(Kind::fixed);
  s.indices_ = std::move(indices);
  return s;
}

Schedule Schedule::uniform_random(std::uint64_t seed) {
  Schedule s(Kind::uniform_random);
  s.seed_ = seed;
  return s;
}

Schedule Schedule::adversarial_greedy() { return Schedule(Kind::adversarial_greedy); }

Trajectory simulate(const MatrixSet& m, const RealVector& x0, int steps,
                    const Schedule& schedule) {
  if (x0.size() != m.order()) throw ShapeError("simulate: x0 must have the set's order");
  require_finite(x0, "x0");
  if (steps < 0) throw InvalidInputError("simulate: steps must be >= 0");
  const int k = static_cast<int>(m.members().size());
  if (schedule.kind() == Schedule::Kind::fixed) {
    if (static_cast<int>(schedule.indices().size()) < steps) {
      throw InvalidInputError("simulate: fixed schedule shorter than the requested horizon");
    }
    for (int idx : schedule.indices()) {
      if (idx < 0 || idx >= k) throw IndexError("simulate: schedule index out of range");
    }
  }

  std::mt19937_64 rng(schedule.seed());
  Trajectory out;
  out.states.reserve(steps + 1);
  out.schedule.reserve(steps);
  out.norms.reserve(steps + 1);
  out.states.push_back(x0);
  out.norms.push_back(x0.norm());
  for (int j = 0; j < steps; ++j) {
    const RealVector& x = out.states.back();
    int pick = 0;
    switch (schedule.kind()) {
      case Schedule::Kind::fixed:
        pick = schedule.indices()[j];
        break;
      case Schedule::Kind::uniform_random:
        pick = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
        break;
      case Schedule::Kind::adversarial_greedy: {
        double best = -1.0;
        for (int i = 0; i < k; ++i) {
          const double grown = (m.members()[i] * x).norm();
          if (grown > best) {
            best = grown;
            pick = i;
          }
        }
        break;
      }
    }
    out.states.emplace_back(m.members()[pick] * x);
    out.schedule.push_back(pick);
    out.norms.push_back(out.states.back().norm());
  }
  return out;
}

InclusionCertificate certify(const MatrixSet& m, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("certify: alpha must lie in (0, 1]");
  }
  SteinSetSpec spec(ComplexMatrix::Identity(m.order(), m.order()), alpha, /*closed=*/true);
  InclusionCertificate out;
  out.verdict = Verdict::yes;
  out.alpha = alpha;
  for (const RealMatrix& member : m.members()) {
    const double norm = spectral_norm(member);
    out.member_norms.push_back(norm);
    out.reports.push_back(stein_gap(spec, to_complex(member)));
    if (!(norm <= alpha + 1e-10)) out.verdict = Verdict::no;
  }
  return out;
}

WeightedInclusionCertificate certify_weighted(const MatrixSet& m, double alpha,
                                              const ComplexMatrix& h) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("certify_weighted: alpha must lie in (0, 1]");
  }
  SteinSetSpec spec(h, alpha, /*closed=*/true);
  if (!spec.positive_definite_h()) {
    throw NotPositiveDefiniteError("certify_weighted: H must be positive definite");
  }
  if (h.rows() != m.order()) {
    throw ShapeError("certify_weighted: H must share the set's order");
  }
  auto he = detail::herm_eig(spec.h(), "certify_weighted");
  WeightedInclusionCertificate out;
  out.verdict = Verdict::yes;
  out.alpha = alpha;
  out.beta = std::sqrt(he.eigenvalues(he.eigenvalues.size() - 1) / he.eigenvalues(0));
  for (const RealMatrix& member : m.members()) {
    ComplexMatrix a = to_complex(member);
    out.weighted_norms.push_back(weighted_spectral_norm(spec, a));
    out.reports.push_back(stein_gap(spec, a));
    if (out.reports.back().member != Verdict::yes) out.verdict = Verdict::no;
  }
  return out;
}

}  // namespace steinkit
