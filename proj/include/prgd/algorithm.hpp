#pragma once

#include <optional>

#include "prgd/params.hpp"
#include "prgd/pullback.hpp"
#include "prgd/trace.hpp"

namespace prgd {

/// The step fraction alpha in (0, 1] with ||s - alpha eta g|| = ball.
///
/// Requires ||s|| < ball <= ||s - eta g||; otherwise no such root exists and
/// InternalError is thrown.
double boundary_alpha(const Vector& s, const Vector& g, double eta, double ball);

/// Result of a run of gradient steps on one pullback.
struct TangentPhase {
  Tangent s_final;
  double f_start;  // pullback value at s_0
  double f_final;  // pullback value at s_final
  std::vector<TraceEvent> steps;
  std::int64_t gradient_queries = 0;
  bool truncated = false;
};

/// Up to `horizon` gradient steps on the pullback from s0, stopping at the
/// boundary of the ball of radius `ball` with a truncated step.
///
/// `initial_gradient` may carry the already known gradient at s0; it is not
/// counted as a query.
TangentPhase tangent_space_steps(const Pullback& pullback, const Tangent& s0, double eta, double ball,
                                 std::int64_t horizon,
                                 const std::optional<Tangent>& initial_gradient = std::nullopt);

struct PrgdOptions {
  /// Halt after a perturbation phase whose decrease is smaller than F / 2 and
  /// report the iterate as a suspected second-order point.
  bool terminate_on_small_decrease = false;
};

/// Perturbed Riemannian gradient descent.
RunTrace run_prgd(const CostPtr& problem, const Point& x0, const PrgdParams& params, const RngStream& rng,
                  const PrgdOptions& options = {});

/// Plain Riemannian gradient descent x <- Retr_x(-eta grad f(x)) until the
/// gradient norm is at most epsilon or `max_iters` steps were taken.
RunTrace run_rgd(const CostPtr& problem, const Point& x0, double eta, double epsilon, std::int64_t max_iters);

}  // namespace prgd
