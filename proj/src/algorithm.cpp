#include "prgd/algorithm.hpp"

#include <cmath>
#include <sstream>

#include "prgd/errors.hpp"

namespace prgd {

double boundary_alpha(const Vector& s, const Vector& g, double eta, double ball) {
  // Larger root of eta^2 |g|^2 a^2 - 2 eta <s,g> a + |s|^2 - b^2 = 0. With
  // |s| < b the constant term is negative, so the roots have opposite signs.
  const double quad = eta * eta * g.squaredNorm();
  const double half_lin = eta * s.dot(g);
  const double constant = s.squaredNorm() - ball * ball;
  if (!(quad > 0.0) || !(constant < 0.0)) {
    throw InternalError("boundary_alpha: requires ||s|| < ball and a nonzero step");
  }
  const double root = std::sqrt(half_lin * half_lin - quad * constant);
  const double alpha = half_lin >= 0.0 ? (half_lin + root) / quad : -constant / (root - half_lin);
  if (!(alpha > 0.0) || !(alpha <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "boundary_alpha: root " << alpha << " outside (0, 1]; the full step stays inside the ball";
    throw InternalError(os.str());
  }
  return std::min(alpha, 1.0);
}

TangentPhase tangent_space_steps(const Pullback& pullback, const Tangent& s0, double eta, double ball,
                                 std::int64_t horizon, const std::optional<Tangent>& initial_gradient) {
  if (!(eta > 0.0)) throw InvalidArgument("tangent_space_steps: eta must be positive");
  if (!(ball > 0.0)) throw InvalidArgument("tangent_space_steps: ball radius must be positive");
  if (horizon < 1) throw InvalidArgument("tangent_space_steps: horizon must be at least 1");
  if (!(s0.base() == pullback.base())) {
    throw InvalidArgument("tangent_space_steps: s0 is not based at the pullback's point");
  }
  if (!(s0.norm() <= ball)) throw InvalidArgument("tangent_space_steps: ||s0|| exceeds the ball radius");

  const Manifold& manifold = pullback.manifold();
  const Point& x = pullback.base();

  TangentPhase phase{s0, pullback.value(s0), 0.0, {}, 0, false};
  phase.f_final = phase.f_start;
  phase.steps.reserve(static_cast<std::size_t>(std::min<std::int64_t>(horizon, 1 << 16)));

  Tangent s = s0;
  for (std::int64_t j = 0; j < horizon; ++j) {
    Tangent grad = Tangent::zero(x);
    if (j == 0 && initial_gradient) {
      grad = *initial_gradient;
    } else {
      grad = pullback.gradient(s);
      ++phase.gradient_queries;
    }
    if (!grad.coords().allFinite()) throw NumericalFailure("tangent_space_steps: non-finite gradient");

    Vector next = s.coords() - eta * grad.coords();
    if (!next.allFinite()) throw NumericalFailure("tangent_space_steps: tangent iterate overflowed");

    double alpha = 1.0;
    EventKind kind = EventKind::tangent_step;
    if (next.norm() >= ball) {
      alpha = boundary_alpha(s.coords(), grad.coords(), eta, ball);
      next = s.coords() - (alpha * eta) * grad.coords();
      kind = EventKind::boundary_truncation;
      phase.truncated = true;
    }
    s = manifold.project(x, next);
    const double f = pullback.value(s);
    if (!std::isfinite(f)) throw NumericalFailure("tangent_space_steps: non-finite cost value");

    TraceEvent ev;
    ev.kind = kind;
    ev.f = f;
    ev.grad_norm = grad.norm();
    ev.tangent_norm = s.norm();
    ev.step = j + 1;
    ev.step_fraction = alpha;
    ev.displacement = (s.coords() - s0.coords()).norm();
    phase.steps.push_back(ev);
    phase.f_final = f;
    if (phase.truncated) break;
  }
  phase.s_final = std::move(s);
  return phase;
}

namespace {

void append_phase(RunTrace& trace, TangentPhase& phase, std::int64_t t) {
  for (TraceEvent& ev : phase.steps) {
    ev.t = t;
    trace.events.push_back(ev);
  }
  trace.gradient_queries += phase.gradient_queries;
  if (phase.truncated) ++trace.n_truncations;
}

}  // namespace

RunTrace run_prgd(const CostPtr& problem, const Point& x0, const PrgdParams& params, const RngStream& rng,
                  const PrgdOptions& options) {
  if (!problem) throw InvalidArgument("run_prgd: null problem");
  const Manifold& manifold = problem->manifold();
  manifold.require_member(x0);
  if (!(params.eta > 0.0) || params.horizon < 1 || !(params.radius >= 0.0) || !(params.ball > 0.0)) {
    throw InvalidArgument("run_prgd: parameters are not valid");
  }

  RunTrace trace(x0);
  Point x = x0;
  RngStream stream = rng;
  std::int64_t t = 0;

  while (t <= params.budget) {
    const Pullback pullback(problem, x);
    const Tangent grad = problem->riemannian_gradient(x);
    ++trace.gradient_queries;
    const double grad_norm = grad.norm();
    if (!std::isfinite(grad_norm)) throw NumericalFailure("run_prgd: non-finite gradient");
    const double fx = problem->value(x);

    if (grad_norm > params.epsilon) {
      TangentPhase phase = tangent_space_steps(pullback, Tangent::zero(x), params.eta, params.ball, 1, grad);
      TraceEvent ev;
      ev.t = t;
      ev.kind = EventKind::manifold_step;
      ev.f = fx;
      ev.grad_norm = grad_norm;
      ev.tangent_norm = phase.s_final.norm();
      trace.events.push_back(ev);
      append_phase(trace, phase, t);
      ++trace.n_manifold_steps;
      x = manifold.retract(x, phase.s_final);
      t += 1;
      continue;
    }

    TraceEvent visit;
    visit.t = t;
    visit.kind = EventKind::small_grad_visit;
    visit.f = fx;
    visit.grad_norm = grad_norm;
    trace.events.push_back(visit);
    trace.small_grad_points.push_back(x);

    auto [xi, next_stream] = manifold.sample_ball(x, params.radius, stream);
    stream = next_stream;
    const Tangent s0 = manifold.project(x, params.eta * xi.coords());
    TangentPhase phase = tangent_space_steps(pullback, s0, params.eta, params.ball, params.horizon);

    TraceEvent perturb;
    perturb.t = t;
    perturb.kind = EventKind::perturbation;
    perturb.f = phase.f_start;
    perturb.tangent_norm = s0.norm();
    trace.events.push_back(perturb);
    append_phase(trace, phase, t);
    ++trace.n_perturbations;

    if (options.terminate_on_small_decrease) {
      const double decrease = phase.f_final - pullback.value(Tangent::zero(x));
      if (decrease > -params.score_drop / 2.0) {
        trace.suspect = x;
        trace.final_point = x;
        trace.final_t = t + params.horizon;
        return trace;
      }
    }
    x = manifold.retract(x, phase.s_final);
    t += params.horizon;
  }
  trace.final_point = std::move(x);
  trace.final_t = t;
  return trace;
}

RunTrace run_rgd(const CostPtr& problem, const Point& x0, double eta, double epsilon, std::int64_t max_iters) {
  if (!problem) throw InvalidArgument("run_rgd: null problem");
  if (!(eta > 0.0)) throw InvalidArgument("run_rgd: eta must be positive");
  if (max_iters < 0) throw InvalidArgument("run_rgd: max_iters must be non-negative");
  const Manifold& manifold = problem->manifold();
  manifold.require_member(x0);

  RunTrace trace(x0);
  Point x = x0;
  std::int64_t t = 0;
  for (;;) {
    const Tangent grad = problem->riemannian_gradient(x);
    ++trace.gradient_queries;
    const double grad_norm = grad.norm();
    if (!std::isfinite(grad_norm)) throw NumericalFailure("run_rgd: non-finite gradient");
    const double fx = problem->value(x);
    if (grad_norm <= epsilon) {
      TraceEvent visit;
      visit.t = t;
      visit.kind = EventKind::small_grad_visit;
      visit.f = fx;
      visit.grad_norm = grad_norm;
      trace.events.push_back(visit);
      trace.small_grad_points.push_back(x);
      break;
    }
    if (t >= max_iters) break;

    const Tangent step = manifold.project(x, -eta * grad.coords());
    Point next = manifold.retract(x, step);
    const double f_next = problem->value(next);
    if (!std::isfinite(f_next)) throw NumericalFailure("run_rgd: non-finite cost value");

    TraceEvent ev;
    ev.t = t;
    ev.kind = EventKind::manifold_step;
    ev.f = fx;
    ev.grad_norm = grad_norm;
    ev.tangent_norm = step.norm();
    trace.events.push_back(ev);

    TraceEvent moved;
    moved.t = t;
    moved.kind = EventKind::tangent_step;
    moved.f = f_next;
    moved.grad_norm = grad_norm;
    moved.tangent_norm = step.norm();
    moved.step = 1;
    moved.step_fraction = 1.0;
    moved.displacement = step.norm();
    trace.events.push_back(moved);

    ++trace.n_manifold_steps;
    x = std::move(next);
    ++t;
  }
  trace.final_point = std::move(x);
  trace.final_t = t;
  return trace;
}

}  // namespace prgd
