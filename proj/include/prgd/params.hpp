#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace prgd {

enum class ParamMode {
  /// chi from the high-probability lower bound; T from the complexity bound.
  theoretical,
  /// chi supplied by the caller; every other formula unchanged.
  practical,
};

std::string_view to_string(ParamMode mode);
ParamMode parse_param_mode(std::string_view text);

/// Problem and user inputs to the parameter calculator.
struct ParamInputs {
  double epsilon = 0.0;
  double delta = 0.1;
  Eigen::Index dim = 0;    // intrinsic dimension
  double ell = 0.0;        // Lipschitz constant of the pullback gradient in the ball
  double lip_grad = 0.0;   // L
  double lip_hess = 0.0;   // rho
  double ball = std::numeric_limits<double>::infinity();  // b
  double beta = 0.0;       // retraction acceleration bound (0 for second order)
  double gap = 0.0;        // upper bound on f(x0) - f*
  ParamMode mode = ParamMode::theoretical;
  std::optional<double> chi;             // required in practical mode
  std::optional<std::int64_t> budget;    // practical-mode override of T
};

/// Full balanced parameter set of the perturbed method.
struct PrgdParams {
  double epsilon;
  double delta;
  Eigen::Index dim;
  double ell;
  double lip_grad;
  double lip_hess;
  double ball;
  double beta;
  double gap;
  double chi_min;       // lower bound on chi (theoretical) or the requested chi (practical)
  double chi;           // enlarged so that the horizon is an integer
  double eta;           // 1 / ell
  double radius;        // perturbation radius r
  std::int64_t horizon; // tangent steps per perturbation
  double score_drop;    // expected decrease F after a successful perturbation
  double locality;      // localization radius of non-escaping sequences
  double budget_real;   // T before rounding
  std::int64_t budget;  // T
  ParamMode mode;

  bool ball_is_infinite() const noexcept { return ball == std::numeric_limits<double>::infinity(); }
};

/// Computes eta, r, horizon, F, locality radius and T from the inputs.
///
/// The horizon is rounded up to an integer and chi recomputed from it, so
/// r, F, the locality radius and T all use the enlarged chi. Hypothesis
/// violations throw InvalidArgument naming the failed inequality; a budget
/// of 2^63 or more throws CapacityError.
PrgdParams derive_params(const ParamInputs& in);

/// Raw value 4 log2(2^31 ell^2 sqrt(d) gap / (delta sqrt(rho) eps^{5/2})).
double chi_lower_bound(double ell, Eigen::Index dim, double gap, double delta, double rho, double epsilon);

}  // namespace prgd
