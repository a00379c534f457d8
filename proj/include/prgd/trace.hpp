#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "prgd/manifold.hpp"

namespace prgd {

enum class EventKind {
  manifold_step,        // departure from x_t with a large gradient
  perturbation,         // s_0 = eta * xi drawn at x_t
  tangent_step,         // full step s_{j+1} = s_j - eta grad(s_j)
  boundary_truncation,  // final step cut back to the ball boundary
  small_grad_visit,     // x_t with ||grad f(x_t)|| <= epsilon
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

/// One record of a run.
///
/// `t` is the outer counter of the iterate x_t the event belongs to. For
/// manifold_step and small_grad_visit, `f` and `grad_norm` describe x_t.
/// For perturbation, `f` is the pullback value at s_0. For tangent_step and
/// boundary_truncation, `f` is the pullback value after the step,
/// `grad_norm` the norm of the gradient the step used and `tangent_norm`
/// the norm of the new tangent iterate.
struct TraceEvent {
  std::int64_t t = 0;
  EventKind kind = EventKind::tangent_step;
  double f = 0.0;
  std::optional<double> grad_norm;
  std::optional<double> tangent_norm;

  // Not part of the CSV schema; kept for the lemma checks.
  std::int64_t step = 0;                 // j + 1 within the phase
  std::optional<double> step_fraction;   // alpha
  std::optional<double> displacement;    // ||s_{j+1} - s_0||
};

struct RunTrace {
  std::vector<TraceEvent> events;
  Point final_point;
  std::int64_t final_t = 0;
  std::int64_t gradient_queries = 0;
  std::int64_t n_manifold_steps = 0;
  std::int64_t n_perturbations = 0;
  std::int64_t n_truncations = 0;
  /// Every iterate at which the gradient test failed, in order.
  std::vector<Point> small_grad_points;
  /// Set when early termination fired; the halting iterate.
  std::optional<Point> suspect;

  explicit RunTrace(Point start) : final_point(std::move(start)) {}

  bool terminated_early() const noexcept { return suspect.has_value(); }
};

}  // namespace prgd
