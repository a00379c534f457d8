#include "prgd/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "prgd/errors.hpp"

namespace prgd {

std::string_view to_string(ParamMode mode) {
  return mode == ParamMode::theoretical ? "theoretical" : "practical";
}

ParamMode parse_param_mode(std::string_view text) {
  if (text == "theoretical") return ParamMode::theoretical;
  if (text == "practical") return ParamMode::practical;
  throw InvalidArgument("unknown parameter mode '" + std::string(text) + "'");
}

double chi_lower_bound(double ell, Eigen::Index dim, double gap, double delta, double rho, double epsilon) {
  const double ratio = std::ldexp(1.0, 31) * ell * ell * std::sqrt(static_cast<double>(dim)) * gap /
                       (delta * std::sqrt(rho) * std::pow(epsilon, 2.5));
  return 4.0 * std::log2(ratio);
}

namespace {

[[noreturn]] void violated(const std::string& inequality, double lhs, double rhs) {
  std::ostringstream os;
  os << "hypothesis " << inequality << " violated (" << lhs << " vs " << rhs << ")";
  throw InvalidArgument(os.str());
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || std::isnan(v)) {
    throw InvalidArgument(std::string("parameter ") + name + " must be positive");
  }
}

// ceil(v), except that values within 1e-9 (relative) above an integer round
// down to it; e.g. 20 / sqrt(0.01) evaluates to 200.00000000000003.
std::int64_t integer_horizon(double v) {
  const double nearest = std::round(v);
  const double h = std::abs(v - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::ceil(v);
  if (!(h < 0x1.0p62)) throw CapacityError("tangent-step horizon does not fit in 64 bits");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(h));
}

}  // namespace

PrgdParams derive_params(const ParamInputs& in) {
  require_positive(in.epsilon, "epsilon");
  require_positive(in.ell, "ell");
  require_positive(in.lip_grad, "L");
  require_positive(in.lip_hess, "rho");
  require_positive(in.ball, "b");
  if (in.dim < 1) throw InvalidArgument("parameter d must be at least 1");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw InvalidArgument("parameter delta must lie in (0, 1)");
  if (!(in.beta >= 0.0)) throw InvalidArgument("parameter beta must be non-negative");
  if (!(in.gap >= 0.0) || !std::isfinite(in.gap)) throw InvalidArgument("gap f(x0) - f* must be finite and non-negative");

  const double eps = in.epsilon;
  const double rho = in.lip_hess;
  const double b = in.ball;
  const double sqrt_rho_eps = std::sqrt(rho * eps);

  if (!(eps <= b * b * rho)) violated("ε ≤ b²ρ (epsilon <= b^2 rho)", eps, b * b * rho);
  if (!(in.lip_grad >= sqrt_rho_eps)) violated("L ≥ √(ρε) (L >= sqrt(rho epsilon))", in.lip_grad, sqrt_rho_eps);
  if (!(in.ell >= in.lip_grad)) violated("ℓ ≥ L (ell >= L)", in.ell, in.lip_grad);
  if (!(in.ell <= in.lip_grad + rho * b)) violated("ℓ ≤ L + ρb (ell <= L + rho b)", in.ell, in.lip_grad + rho * b);

  PrgdParams p{};
  p.epsilon = eps;
  p.delta = in.delta;
  p.dim = in.dim;
  p.ell = in.ell;
  p.lip_grad = in.lip_grad;
  p.lip_hess = rho;
  p.ball = b;
  p.beta = in.beta;
  p.gap = in.gap;
  p.mode = in.mode;

  if (in.mode == ParamMode::theoretical) {
    if (in.chi) throw InvalidArgument("theoretical mode derives chi; do not supply one");
    if (in.budget) throw InvalidArgument("theoretical mode derives T; a budget override needs practical mode");
    if (!(in.gap > 0.0)) throw InvalidArgument("theoretical mode needs a positive gap f(x0) - f*");
    const double lhs = std::pow(eps, 1.5);
    const double rhs = 3.0 * std::sqrt(rho) * in.gap;
    if (!(lhs <= rhs)) violated("ε^{3/2} ≤ 3√ρ·gap (epsilon^1.5 <= 3 sqrt(rho) gap)", lhs, rhs);
    p.chi_min = std::max(std::nextafter(0.25, 1.0), chi_lower_bound(in.ell, in.dim, in.gap, in.delta, rho, eps));
  } else {
    if (!in.chi) throw InvalidArgument("practical mode requires chi");
    if (!(*in.chi > 0.25)) violated("χ > 1/4 (chi > 1/4)", *in.chi, 0.25);
    p.chi_min = *in.chi;
  }

  p.horizon = integer_horizon(in.ell * p.chi_min / sqrt_rho_eps);
  p.chi = static_cast<double>(p.horizon) * sqrt_rho_eps / in.ell;
  p.eta = 1.0 / in.ell;
  const double chi3 = p.chi * p.chi * p.chi;
  p.radius = eps / (400.0 * chi3);
  p.score_drop = std::sqrt(eps * eps * eps / rho) / (50.0 * chi3);
  p.locality = std::sqrt(eps / rho) / (4.0 * p.chi);

  const double horizon = static_cast<double>(p.horizon);
  p.budget_real = 8.0 * std::max({horizon / 3.0, in.gap * horizon / p.score_drop, in.gap / (p.eta * eps * eps)});
  if (in.budget) {
    if (*in.budget < 0) throw InvalidArgument("budget must be non-negative");
    p.budget = *in.budget;
  } else {
    const double t = std::ceil(p.budget_real);
    if (!(t < 0x1.0p63)) {
      std::ostringstream os;
      os << "iteration budget T = " << p.budget_real << " exceeds 2^63";
      throw CapacityError(os.str());
    }
    p.budget = static_cast<std::int64_t>(t);
  }
  return p;
}

}  // namespace prgd
