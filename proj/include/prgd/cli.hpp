#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prgd/verify.hpp"

namespace prgd::cli {

enum class ProblemKind { pca, quadratic_saddle };
enum class StartKind { random, saddle, file };
enum class Method { prgd, rgd };

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::pca;
  Eigen::Index dim = 10;
  std::optional<std::filesystem::path> matrix;
  std::optional<std::filesystem::path> x0_file;
  double epsilon = 1e-3;
  double delta = 0.1;
  ParamMode mode = ParamMode::practical;
  std::optional<double> chi;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  StartKind start = StartKind::saddle;
  std::filesystem::path out = "prgd_out";

  // Overrides of the problem-derived constants.
  std::optional<double> ell;
  std::optional<double> rho;  // nominal rho for quadratic_saddle (default 1)
  std::optional<double> ball;
  std::optional<double> gap;
  std::optional<std::int64_t> budget;

  bool terminate = false;
  Method method = Method::prgd;
  double fd_h = kDefaultHessianStep;
  std::int64_t samples = 1000;  // verify: Monte-Carlo samples
  double sample_ball = 5.0;     // verify: tangent ball radius for Lipschitz ratios

  /// Throws InvalidArgument describing the first inconsistency.
  void validate() const;
};

/// A concrete problem instance with its designated saddle.
struct ProblemSetup {
  CostPtr problem;
  Point saddle;
  ProblemConstants constants;
  std::optional<double> optimal_value;  // f*, when known
  std::optional<Vector> dominant;       // v_max for pca
};

ProblemSetup build_problem(const ExperimentConfig& config);
Point start_point(const ExperimentConfig& config, const ProblemSetup& setup, const RngStream& rng);
PrgdParams params_for(const ExperimentConfig& config, const ProblemSetup& setup, const Point& x0);

/// CSV trace: header `t,kind,f,grad_norm,tangent_norm`, one row per event,
/// empty fields where a value does not apply.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

struct TrialRecord {
  std::int64_t trial;
  std::uint64_t seed;
  double final_f;
  double final_grad_norm;
  bool escaped;
  std::optional<double> alignment;
  std::int64_t n_perturbations;
  std::int64_t n_manifold_steps;
  std::int64_t gradient_queries;
  bool terminated_early;
  LemmaReport lemmas;
};

struct StudyResult {
  PrgdParams params;
  std::vector<TrialRecord> trials;
  double escape_rate;
};

/// Runs `config.trials` trials from the designated saddle with seeds
/// seed, seed + 1, ... and stream id = trial index.
StudyResult escape_study(const ExperimentConfig& config);

int run_single(const ExperimentConfig& config, std::ostream& out);
int run_escape_study(const ExperimentConfig& config, std::ostream& out);
int derive_params_cmd(const ExperimentConfig& config, std::ostream& out);
int verify_cmd(const ExperimentConfig& config, std::ostream& out);

/// Parses the command line and dispatches; errors go to `err` and are mapped
/// to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prgd::cli
