#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "prgd/algorithm.hpp"

namespace prgd {

/// Second-order criticality of a point: ||grad f(x)|| <= eps and
/// lambda_min(Hessian of the pullback at 0) >= -sqrt(rho eps).
struct CriticalityReport {
  double grad_norm;
  double min_eig_pullback;  // from finite differences of the pullback value
  double min_eig_hess;      // from finite differences of the Riemannian gradient
  double eps;
  double rho;
  bool verdict;
  Vector escape_direction;  // unit eigenvector for min_eig_pullback, ambient coordinates
};

CriticalityReport check_second_order_point(const CostPtr& problem, const Point& x, double eps, double rho,
                                           double fd_h = kDefaultHessianStep);

/// Riemannian Hessian at x in the intrinsic basis of T_x, by central
/// differences of grad f along retraction curves. Independent of the pullback
/// value, so it serves as a cross-check of the pullback Hessian.
SymMatrix riemannian_hessian_fd(const CostPtr& problem, const Point& x, double h = kDefaultGradientStep);

/// Largest ||grad fhat_x(s) - grad fhat_x(0)|| / ||s|| over random x and s
/// uniform in the tangent ball of radius `ball` (samples with ||s|| < 1e-8 are
/// skipped). Sample i uses rng.split(i).
double empirical_grad_lipschitz(const CostPtr& problem, double ball, std::int64_t n_samples,
                                const RngStream& rng);

/// As empirical_grad_lipschitz for ||Hess fhat_x(s) - Hess fhat_x(0)|| / ||s||
/// with finite-difference Hessians in the intrinsic basis.
double empirical_hess_lipschitz(const CostPtr& problem, double ball, std::int64_t n_samples, double fd_h,
                                const RngStream& rng);

struct LemmaViolation {
  std::string lemma;
  std::size_t event_index;
  double lhs;
  double rhs;

  std::string describe() const;
};

/// Outcome of checking the decrease and localization inequalities on a trace.
struct LemmaReport {
  std::int64_t manifold_steps_checked = 0;
  std::int64_t tangent_steps_checked = 0;
  std::int64_t decrease_violations = 0;      // manifold step drops by >= eta eps^2 / 2
  std::int64_t sufficient_violations = 0;    // every step drops by >= alpha eta |g|^2 / 2
  std::int64_t localization_violations = 0;  // |s_j - s_0| <= sqrt(2 eta j (f(s_0) - f(s_j)))
  std::optional<LemmaViolation> first;

  bool ok() const noexcept {
    return decrease_violations == 0 && sufficient_violations == 0 && localization_violations == 0;
  }
};

LemmaReport check_trace_lemmas(const RunTrace& trace, const PrgdParams& params, double slack = 1e-9);

struct CouplingResult {
  double drop1;       // fhat(s_T) - fhat(s_0) from +eta r0 / 2 e1
  double drop2;       // same from -eta r0 / 2 e1
  double omega;       // 2^{2 - chi} ell locality
  double min_eig;     // lambda_min of the pullback Hessian at 0
  Vector e1;          // ambient coordinates
};

/// Runs two tangent-step sequences started at +-(eta r0 / 2) e1 for the full
/// horizon. Whenever the hypotheses hold, min(drop1, drop2) <= -F.
///
/// Requires lambda_min(Hess fhat_x(0)) <= -sqrt(rho eps) and omega < r0 <= 2r;
/// throws InvalidArgument naming the failed hypothesis otherwise.
CouplingResult coupling_experiment(const CostPtr& problem, const Point& x, const PrgdParams& params, double r0,
                                   double fd_h = kDefaultHessianStep);

}  // namespace prgd
