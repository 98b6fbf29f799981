#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steinkit/mconvex.hpp"
#include "steinkit/realization.hpp"
#include "steinkit/types.hpp"

namespace steinkit {

/// Outcome lattice for bounded-realness tests. Sampling alone can refute but
/// never prove membership, hence the split between certified (KYP) and
/// sampled_pass (no counterexample found).
enum class DbStatus { certified, sampled_pass, fail, inconclusive };

std::string to_string(DbStatus s);

struct DbOptions {
  int boundary_samples = 720;  // angles per ring
  std::vector<double> radii = {1.0 + 1e-6, 1.01, 1.1, 2.0, 10.0};
  double threshold_excess = 1e-8;  // fail when sup exceeds 1 + this
  bool try_certificate = true;
  int search_max_iter = 1000;
  double search_tol = 1e-11;
};

struct DbVerdict {
  DbStatus status = DbStatus::inconclusive;
  double sampled_sup = 0.0;  // max of ||F(z)||_2 over evaluated samples
  Complex worst_z{0.0, 0.0};
  std::optional<KypCertificate> certificate;
};

/// Tests whether ||F(z)||_2 <= 1 for all |z| > 1. Tries a KYP certificate
/// (skipped when A has spectral radius >= 1 - 1e-9), then samples rings
/// |z| = r for every radius r > 1 in the options plus divergence probes next
/// to any eigenvalue of A outside the closed unit disk. A single sample above
/// 1 + threshold_excess refutes membership.
DbVerdict db_check(const RealizationArray& r, const DbOptions& opts = {});

/// db_check of the cascade product. Both factors must pass db_check
/// themselves (certified or sampled_pass), else PreconditionFailedError.
DbVerdict db_product_check(const RealizationArray& a, const RealizationArray& b,
                           const DbOptions& opts = {});

struct DbCombineResult {
  RealizationArray combined;
  DbVerdict verdict;
};

/// Matrix-convex combination at the function level:
/// G(z) = sum_j v_j^* F_j(z) v_j with v_j of shape m_j x n. Assembles the
/// block realization (A = diag(A_j), B stacks B_j v_j, C concatenates
/// v_j^* C_j, D = sum v_j^* D_j v_j), cross-checks it against direct
/// evaluation at fixed sample points, and runs db_check on the result.
DbCombineResult db_mconvex_combine(const IsometryTuple& t,
                                   const std::vector<RealizationArray>& rs,
                                   const DbOptions& opts = {});

struct RealnessReport {
  bool real_coefficients;  // all of A, B, C, D have exactly zero imaginary part
  double max_imag;         // over entries of F(z) at the evaluated real samples
  Verdict verdict;         // yes iff max_imag <= 1e-10
};

/// Checks that F maps real points to real matrices (samples with a pole
/// nearby are skipped).
RealnessReport realness_check(const RealizationArray& r, const std::vector<double>& samples);

}  // namespace steinkit
