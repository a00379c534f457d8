#include "prgd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "prgd/errors.hpp"

namespace prgd {

CriticalityReport check_second_order_point(const CostPtr& problem, const Point& x, double eps, double rho,
                                           double fd_h) {
  if (!problem) throw InvalidArgument("check_second_order_point: null problem");
  if (!(eps > 0.0) || !(rho >= 0.0)) throw InvalidArgument("check_second_order_point: need eps > 0, rho >= 0");
  const Pullback pullback(problem, x);
  const double grad_norm = problem->riemannian_gradient(x).norm();

  const EigenPair pair = min_eigpair(pullback.hessian_at_zero(fd_h));
  const EigenPair riem = min_eigpair(riemannian_hessian_fd(problem, x));

  CriticalityReport report{grad_norm, pair.value, riem.value, eps, rho, false, pullback.basis() * pair.vector};
  report.verdict = grad_norm <= eps && pair.value >= -std::sqrt(rho * eps);
  return report;
}

SymMatrix riemannian_hessian_fd(const CostPtr& problem, const Point& x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("riemannian_hessian_fd: step must be positive");
  const Manifold& manifold = problem->manifold();
  manifold.require_member(x);
  const Matrix basis = manifold.tangent_basis(x);
  const Eigen::Index k = basis.cols();
  Matrix hess(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vector dir = basis.col(i);
    const Point plus = manifold.retract(x, manifold.project(x, h * dir));
    const Point minus = manifold.retract(x, manifold.project(x, -h * dir));
    const Vector diff =
        (problem->riemannian_gradient(plus).coords() - problem->riemannian_gradient(minus).coords()) / (2.0 * h);
    hess.col(i) = basis.transpose() * diff;
  }
  require_finite(Eigen::Map<const Vector>(hess.data(), hess.size()), "riemannian_hessian_fd");
  return SymMatrix(0.5 * (hess + hess.transpose()));
}

namespace {

struct SamplePair {
  Pullback pullback;
  Tangent s;
};

// x random on the manifold, s uniform in the tangent ball. Empty when ||s|| is
// below the exclusion threshold.
std::optional<SamplePair> draw_sample(const CostPtr& problem, double ball, const RngStream& rng) {
  const Manifold& manifold = problem->manifold();
  auto [x, after_x] = manifold.random_point(rng);
  auto [s, after_s] = manifold.sample_ball(x, ball, after_x);
  (void)after_s;
  if (s.norm() < 1e-8) return std::nullopt;
  return SamplePair{Pullback(problem, x), std::move(s)};
}

void check_sampling_args(const CostPtr& problem, double ball, std::int64_t n_samples) {
  if (!problem) throw InvalidArgument("empirical Lipschitz: null problem");
  if (n_samples < 1) throw InvalidArgument("empirical Lipschitz: n_samples must be >= 1");
  if (!(ball > 0.0) || !std::isfinite(ball)) throw InvalidArgument("empirical Lipschitz: ball must be finite and positive");
}

}  // namespace

double empirical_grad_lipschitz(const CostPtr& problem, double ball, std::int64_t n_samples,
                                const RngStream& rng) {
  check_sampling_args(problem, ball, n_samples);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    auto sample = draw_sample(problem, ball, rng.split(static_cast<std::uint64_t>(i)));
    if (!sample) continue;
    const Pullback& pb = sample->pullback;
    const Vector diff = pb.gradient(sample->s).coords() - pb.gradient(Tangent::zero(pb.base())).coords();
    worst = std::max(worst, diff.norm() / sample->s.norm());
  }
  return worst;
}

double empirical_hess_lipschitz(const CostPtr& problem, double ball, std::int64_t n_samples, double fd_h,
                                const RngStream& rng) {
  check_sampling_args(problem, ball, n_samples);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    auto sample = draw_sample(problem, ball, rng.split(static_cast<std::uint64_t>(i)));
    if (!sample) continue;
    const Pullback& pb = sample->pullback;
    const Matrix diff = pb.hessian_at(sample->s, fd_h).matrix() - pb.hessian_at_zero(fd_h).matrix();
    worst = std::max(worst, operator_norm(SymMatrix(diff)) / sample->s.norm());
  }
  return worst;
}

std::string LemmaViolation::describe() const {
  std::ostringstream os;
  os << lemma << " violated at event " << event_index << ": " << lhs << " > " << rhs;
  return os.str();
}

LemmaReport check_trace_lemmas(const RunTrace& trace, const PrgdParams& params, double slack) {
  LemmaReport report;
  const auto& events = trace.events;
  const double eta = params.eta;

  auto flag = [&report](std::int64_t& counter, const char* lemma, std::size_t index, double lhs, double rhs) {
    ++counter;
    if (!report.first) report.first = LemmaViolation{lemma, index, lhs, rhs};
  };

  double phase_start_f = 0.0;
  double prev_f = 0.0;
  bool in_phase = false;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& ev = events[i];
    switch (ev.kind) {
      case EventKind::manifold_step: {
        phase_start_f = prev_f = ev.f;
        in_phase = true;
        if (ev.grad_norm && *ev.grad_norm > params.epsilon) {
          ++report.manifold_steps_checked;
          // The step's outcome is the next event.
          if (i + 1 >= events.size() || (events[i + 1].kind != EventKind::tangent_step &&
                                         events[i + 1].kind != EventKind::boundary_truncation)) {
            flag(report.decrease_violations, "manifold-step decrease", i, 0.0, 0.0);
            break;
          }
          const double change = events[i + 1].f - ev.f;
          const double bound = -eta * params.epsilon * params.epsilon / 2.0 + slack;
          if (change > bound) flag(report.decrease_violations, "manifold-step decrease", i + 1, change, bound);
        }
        break;
      }
      case EventKind::perturbation:
        phase_start_f = prev_f = ev.f;
        in_phase = true;
        break;
      case EventKind::tangent_step:
      case EventKind::boundary_truncation: {
        if (!in_phase || !ev.grad_norm || !ev.step_fraction || !ev.displacement) {
          flag(report.sufficient_violations, "tangent step without phase context", i, 0.0, 0.0);
          break;
        }
        ++report.tangent_steps_checked;
        const double alpha = *ev.step_fraction;
        const double g = *ev.grad_norm;
        const double change = ev.f - prev_f;
        const double suff_bound = -(alpha * eta / 2.0) * g * g + slack;
        if (change > suff_bound) flag(report.sufficient_violations, "sufficient decrease", i, change, suff_bound);

        // f values carry a few ulps of rounding each; near a critical point the
        // true decrease can be far below that, so it is credited here.
        const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(phase_start_f) + std::abs(ev.f));
        const double budget = std::max(0.0, phase_start_f - ev.f + roundoff);
        const double loc_bound = std::sqrt(2.0 * eta * static_cast<double>(ev.step) * budget) + slack;
        if (*ev.displacement > loc_bound) {
          flag(report.localization_violations, "improve-or-localize", i, *ev.displacement, loc_bound);
        }
        prev_f = ev.f;
        break;
      }
      case EventKind::small_grad_visit:
        in_phase = false;
        break;
    }
  }
  return report;
}

CouplingResult coupling_experiment(const CostPtr& problem, const Point& x, const PrgdParams& params, double r0,
                                   double fd_h) {
  if (!problem) throw InvalidArgument("coupling_experiment: null problem");
  const Pullback pullback(problem, x);
  const EigenPair pair = min_eigpair(pullback.hessian_at_zero(fd_h));
  const double threshold = -std::sqrt(params.lip_hess * params.epsilon);
  if (!(pair.value <= threshold)) {
    std::ostringstream os;
    os << "coupling hypothesis λ_min(∇²f̂_x(0)) ≤ −√(ρε) failed: " << pair.value << " > " << threshold;
    throw InvalidArgument(os.str());
  }
  const double omega = std::ldexp(params.ell * params.locality, 2) * std::exp2(-params.chi);
  if (!(r0 > omega)) {
    std::ostringstream os;
    os << "coupling hypothesis r0 > ω = 2^{2-χ}ℓℒ failed: r0 = " << r0 << ", ω = " << omega;
    throw InvalidArgument(os.str());
  }
  if (!(r0 <= 2.0 * params.radius)) {
    std::ostringstream os;
    os << "coupling hypothesis r0 ≤ 2r (both starts in the perturbation ball) failed: r0 = " << r0
       << ", 2r = " << 2.0 * params.radius;
    throw InvalidArgument(os.str());
  }

  const Vector e1 = pullback.basis() * pair.vector;
  const double half = params.eta * r0 / 2.0;
  const Manifold& manifold = problem->manifold();
  const Tangent plus = manifold.project(x, half * e1);
  const Tangent minus = manifold.project(x, -half * e1);

  const TangentPhase a = tangent_space_steps(pullback, plus, params.eta, params.ball, params.horizon);
  const TangentPhase b = tangent_space_steps(pullback, minus, params.eta, params.ball, params.horizon);
  return {a.f_final - a.f_start, b.f_final - b.f_start, omega, pair.value, e1};
}

}  // namespace prgd
