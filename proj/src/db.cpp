#include "steinkit/db.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "steinkit/numerics.hpp"

namespace steinkit {

std::string to_string(DbStatus s) {
  switch (s) {
    case DbStatus::certified:
      return "certified";
    case DbStatus::sampled_pass:
      return "sampled-pass";
    case DbStatus::fail:
      return "fail";
    case DbStatus::inconclusive:
      return "inconclusive";
  }
  throw Error("to_string: unknown DbStatus");
}

namespace {

constexpr double kUnstablePoleExcess = 1e-9;  // |eigenvalue| > 1 + this triggers probes
constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_options(const DbOptions& opts) {
  if (opts.boundary_samples < 0) {
    throw InvalidInputError("db options: boundary_samples must be >= 0");
  }
  for (double r : opts.radii) {
    if (!(r > 1.0)) throw InvalidInputError("db options: every radius must exceed 1");
  }
  if (!(opts.threshold_excess > 0.0)) {
    throw InvalidInputError("db options: threshold_excess must be positive");
  }
}

struct SampleScan {
  double sup = 0.0;
  Complex worst{0.0, 0.0};
  bool any = false;

  void feed(const RealizationArray& r, const ComplexVector& poles, Complex z) {
    double val;
    try {
      val = detail::spectral_norm_impl(evaluate(r, z, poles));
    } catch (const NearPoleError&) {
      return;
    }
    any = true;
    if (val > sup) {
      sup = val;
      worst = z;
    }
  }
};

}  // namespace

DbVerdict db_check(const RealizationArray& r, const DbOptions& opts) {
  validate_options(opts);
  DbVerdict out;
  const ComplexVector poles = pole_candidates(r);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < poles.size(); ++i) rho = std::max(rho, std::abs(poles(i)));

  if (opts.try_certificate && (r.state_order() == 0 || rho < 1.0 - 1e-9)) {
    out.certificate = certificate_search(r, opts.search_max_iter, opts.search_tol);
  }

  SampleScan scan;
  for (double radius : opts.radii) {
    for (int k = 0; k < opts.boundary_samples; ++k) {
      const double phi = kTwoPi * k / opts.boundary_samples;
      scan.feed(r, poles, Complex(radius * std::cos(phi), radius * std::sin(phi)));
    }
  }
  // An eigenvalue of A outside the closed disk means F is unbounded there
  // unless the mode cancels; approach it and let the samples decide.
  for (Eigen::Index i = 0; i < poles.size(); ++i) {
    if (std::abs(poles(i)) > 1.0 + kUnstablePoleExcess) {
      for (double delta : {1e-3, 1e-4, 1e-5, 1e-6}) {
        scan.feed(r, poles, poles(i) * (1.0 + delta));
      }
    }
  }

  out.sampled_sup = scan.sup;
  out.worst_z = scan.worst;
  if (scan.any && scan.sup > 1.0 + opts.threshold_excess) {
    out.status = DbStatus::fail;
  } else if (out.certificate.has_value()) {
    out.status = DbStatus::certified;
  } else if (scan.any) {
    out.status = DbStatus::sampled_pass;
  } else {
    out.status = DbStatus::inconclusive;
  }
  return out;
}

DbVerdict db_product_check(const RealizationArray& a, const RealizationArray& b,
                           const DbOptions& opts) {
  for (const RealizationArray* r : {&a, &b}) {
    DbVerdict v = db_check(*r, opts);
    if (v.status != DbStatus::certified && v.status != DbStatus::sampled_pass) {
      throw PreconditionFailedError("db_product_check: both factors must pass db_check");
    }
  }
  return db_check(series_product(a, b), opts);
}

DbCombineResult db_mconvex_combine(const IsometryTuple& t,
                                   const std::vector<RealizationArray>& rs,
                                   const DbOptions& opts) {
  if (rs.size() != t.blocks().size()) {
    throw ShapeError("db_mconvex_combine: one realization per tuple block required");
  }
  for (std::size_t j = 0; j < rs.size(); ++j) {
    if (t.blocks()[j].rows() != rs[j].port_size()) {
      throw ShapeError("db_mconvex_combine: tuple block height must match the port size");
    }
  }
  IsometryValidation v = validate_isometry(t);
  if (v.verdict != Verdict::yes) {
    throw InvalidIsometryError("db_mconvex_combine: tuple defect " + std::to_string(v.defect) +
                               " exceeds " + std::to_string(kIsometryTol));
  }

  const Eigen::Index mg = t.target_order();
  Eigen::Index total_states = 0;
  for (const auto& r : rs) total_states += r.state_order();

  ComplexMatrix a = ComplexMatrix::Zero(total_states, total_states);
  ComplexMatrix b = ComplexMatrix::Zero(total_states, mg);
  ComplexMatrix c = ComplexMatrix::Zero(mg, total_states);
  ComplexMatrix d = ComplexMatrix::Zero(mg, mg);
  Eigen::Index at = 0;
  for (std::size_t j = 0; j < rs.size(); ++j) {
    const Eigen::Index nj = rs[j].state_order();
    const ComplexMatrix& vj = t.blocks()[j];
    a.block(at, at, nj, nj) = rs[j].a();
    b.middleRows(at, nj) = rs[j].b() * vj;
    c.middleCols(at, nj) = vj.adjoint() * rs[j].c();
    d += vj.adjoint() * rs[j].d() * vj;
    at += nj;
  }
  RealizationArray combined(total_states, mg, std::move(a), std::move(b), std::move(c),
                            std::move(d));

  // The assembled realization must agree with direct summation of the
  // component evaluations; checked at a fixed handful of points off the axes.
  const Complex probes[] = {{2.0, 0.7}, {-1.9, 1.1}, {3.3, 0.0}, {1.4, -1.8}, {-2.6, -0.4}};
  const ComplexVector combined_poles = pole_candidates(combined);
  for (Complex z : probes) {
    ComplexMatrix direct = ComplexMatrix::Zero(mg, mg);
    ComplexMatrix assembled;
    try {
      for (std::size_t j = 0; j < rs.size(); ++j) {
        direct += t.blocks()[j].adjoint() * evaluate(rs[j], z) * t.blocks()[j];
      }
      assembled = evaluate(combined, z, combined_poles);
    } catch (const NearPoleError&) {
      continue;
    }
    const double mismatch = detail::spectral_norm_impl(assembled - direct);
    if (mismatch > 1e-10 * std::max(1.0, detail::spectral_norm_impl(direct))) {
      throw Error("db_mconvex_combine: assembled realization disagrees with direct evaluation");
    }
  }

  DbVerdict verdict = db_check(combined, opts);
  return {std::move(combined), std::move(verdict)};
}

RealnessReport realness_check(const RealizationArray& r, const std::vector<double>& samples) {
  double coeff_imag = 0.0;
  for (const ComplexMatrix* m : {&r.a(), &r.b(), &r.c(), &r.d()}) {
    if (m->size() > 0) coeff_imag = std::max(coeff_imag, m->imag().cwiseAbs().maxCoeff());
  }
  const ComplexVector poles = pole_candidates(r);
  double max_imag = 0.0;
  for (double x : samples) {
    ComplexMatrix f;
    try {
      f = evaluate(r, Complex(x, 0.0), poles);
    } catch (const NearPoleError&) {
      continue;
    }
    max_imag = std::max(max_imag, f.imag().cwiseAbs().maxCoeff());
  }
  return {coeff_imag == 0.0, max_imag, max_imag <= 1e-10 ? Verdict::yes : Verdict::no};
}

}  // namespace steinkit
