#include "prgd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prgd/errors.hpp"

namespace prgd::cli {

using nlohmann::json;

namespace {

// Stream id reserved for the synthetic matrix so it never overlaps a trial.
constexpr std::uint64_t kMatrixStream = 0xA5A5'0000'0000'0001ULL;
constexpr std::uint64_t kStartChild = 0x5747;
// Practical-mode iteration caps when --budget is absent. The derived T is far
// too large to exhaust; the saddle objective is unbounded below, so its cap
// also keeps iterates finite.
constexpr std::int64_t kDefaultPcaBudget = 10000;
constexpr std::int64_t kDefaultSaddleBudget = 200;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Vector read_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open start-point file '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  long long n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    for (std::string token; row >> token;) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        throw InvalidInput("cannot parse '" + token + "'", line_no);
      }
      if (used != token.size() || !std::isfinite(v)) throw InvalidInput("bad entry '" + token + "'", line_no);
      if (n < 0) {
        if (v < 1 || v != std::floor(v)) throw InvalidInput("dimension must be a positive integer", line_no);
        n = static_cast<long long>(v);
      } else {
        values.push_back(v);
      }
    }
  }
  if (n < 0) throw InvalidInput("empty start-point file");
  if (static_cast<long long>(values.size()) != n) {
    throw InvalidInput("start point has " + std::to_string(values.size()) + " entries, expected " + std::to_string(n));
  }
  return Eigen::Map<Vector>(values.data(), n);
}

json params_to_json(const PrgdParams& p) {
  return json{{"mode", std::string(to_string(p.mode))},
              {"epsilon", p.epsilon},
              {"delta", p.delta},
              {"dim", p.dim},
              {"ell", p.ell},
              {"L", p.lip_grad},
              {"rho", p.lip_hess},
              {"b", finite_or_null(p.ball)},
              {"beta", p.beta},
              {"gap", p.gap},
              {"chi_min", p.chi_min},
              {"chi", p.chi},
              {"eta", p.eta},
              {"r", p.radius},
              {"horizon", p.horizon},
              {"F", p.score_drop},
              {"locality", p.locality},
              {"T", p.budget},
              {"T_real", p.budget_real}};
}

json lemmas_to_json(const LemmaReport& r) {
  json j{{"manifold_steps_checked", r.manifold_steps_checked},
         {"tangent_steps_checked", r.tangent_steps_checked},
         {"decrease_violations", r.decrease_violations},
         {"sufficient_decrease_violations", r.sufficient_violations},
         {"localization_violations", r.localization_violations},
         {"ok", r.ok()}};
  j["first_violation"] = r.first ? json(r.first->describe()) : json(nullptr);
  return j;
}

json report_to_json(const CriticalityReport& r) {
  return json{{"grad_norm", r.grad_norm}, {"min_eig_pullback", r.min_eig_pullback},
              {"min_eig_hess", r.min_eig_hess}, {"eps", r.eps},
              {"rho", r.rho}, {"verdict", r.verdict}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* ext) {
  return std::filesystem::path(prefix.string() + ext);
}

std::optional<double> alignment_of(const ProblemSetup& setup, const Point& x) {
  if (!setup.dominant) return std::nullopt;
  return std::abs(setup.dominant->dot(x.coords()));
}

RunTrace run_method(const ExperimentConfig& config, const ProblemSetup& setup, const Point& x0,
                    const PrgdParams& params, const RngStream& rng) {
  if (config.method == Method::rgd) {
    return run_rgd(setup.problem, x0, params.eta, params.epsilon, params.budget);
  }
  return run_prgd(setup.problem, x0, params, rng, PrgdOptions{config.terminate});
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (mode == ParamMode::practical && !chi) throw InvalidArgument("practical mode requires --chi");
  if (mode == ParamMode::theoretical && chi) throw InvalidArgument("theoretical mode derives chi; drop --chi");
  if (problem == ProblemKind::pca && start == StartKind::file && !matrix) {
    throw InvalidArgument("matrix required: pca with --start file needs --matrix");
  }
  if (start == StartKind::file && !x0_file) throw InvalidArgument("--start file needs --x0");
  if (!matrix && dim < 2 && problem == ProblemKind::pca) throw InvalidArgument("pca needs --dim >= 2");
  if (!matrix && dim < 1) throw InvalidArgument("--dim must be at least 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("--eps must be positive");
  if (!(fd_h > 0.0)) throw InvalidArgument("--fd-h must be positive");
  if (samples < 1) throw InvalidArgument("--samples must be at least 1");
}

ProblemSetup build_problem(const ExperimentConfig& config) {
  if (config.problem == ProblemKind::pca) {
    std::shared_ptr<PcaProblem> pca;
    Vector dominant, second;
    if (config.matrix) {
      SymMatrix a = load_matrix(*config.matrix);
      if (a.dim() < 2) throw InvalidArgument("pca needs a matrix of dimension >= 2");
      const Spectrum spec = eigendecompose(a);
      const Eigen::Index n = a.dim();
      dominant = spec.vectors.col(n - 1);
      second = spec.vectors.col(n - 2);
      pca = std::make_shared<PcaProblem>(std::move(a));
    } else {
      SyntheticSpectrum syn = synthetic_pca_matrix(config.dim, RngStream(config.seed, kMatrixStream));
      dominant = syn.rotation.col(0);
      second = syn.rotation.col(1);
      pca = std::make_shared<PcaProblem>(std::move(syn.matrix));
    }
    dominant.normalize();
    second.normalize();
    ProblemSetup setup{pca, Point(ManifoldKind::sphere, second), pca->constants(), pca->optimal_value(), dominant};
    return setup;
  }

  SymMatrix h = config.matrix ? load_matrix(*config.matrix) : [&] {
    Vector diag = Vector::Ones(config.dim);
    diag(0) = -0.5;
    return SymMatrix::diagonal(diag);
  }();
  auto saddle_problem = std::make_shared<QuadraticSaddle>(h);
  const Eigen::Index n = h.dim();
  return ProblemSetup{saddle_problem, Point(ManifoldKind::euclidean, Vector::Zero(n)),
                      saddle_problem->constants(config.rho.value_or(1.0)), std::nullopt, std::nullopt};
}

Point start_point(const ExperimentConfig& config, const ProblemSetup& setup, const RngStream& rng) {
  const Manifold& manifold = setup.problem->manifold();
  switch (config.start) {
    case StartKind::saddle:
      return setup.saddle;
    case StartKind::random:
      return manifold.random_point(rng.split(kStartChild)).value;
    case StartKind::file: {
      Vector v = read_vector(*config.x0_file);
      if (v.size() != manifold.ambient_dim()) throw InvalidInput("start point dimension does not match the problem");
      if (manifold.kind() == ManifoldKind::sphere) {
        const double norm = v.norm();
        if (!(norm > 0.0)) throw InvalidInput("start point for the sphere must be nonzero");
        v /= norm;
      }
      return manifold.point(std::move(v));
    }
  }
  throw InvalidArgument("unknown start kind");
}

PrgdParams params_for(const ExperimentConfig& config, const ProblemSetup& setup, const Point& x0) {
  ParamInputs in;
  in.epsilon = config.epsilon;
  in.delta = config.delta;
  in.dim = setup.problem->manifold().intrinsic_dim();
  in.lip_grad = setup.constants.lip_grad;
  in.lip_hess = setup.constants.lip_hess;
  in.ball = config.ball.value_or(setup.constants.ball);
  in.ell = config.ell.value_or(setup.constants.lip_grad);
  in.mode = config.mode;
  in.chi = config.chi;
  if (config.gap) {
    in.gap = *config.gap;
  } else if (setup.optimal_value) {
    in.gap = std::max(0.0, setup.problem->value(x0) - *setup.optimal_value);
  } else {
    in.gap = 1.0;
  }
  in.budget = config.budget;
  if (!in.budget && config.mode == ParamMode::practical) {
    in.budget = config.problem == ProblemKind::pca ? kDefaultPcaBudget : kDefaultSaddleBudget;
  }
  return derive_params(in);
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "t,kind,f,grad_norm,tangent_norm\n";
  for (const TraceEvent& ev : trace.events) {
    out << ev.t << ',' << to_string(ev.kind) << ',' << format_double(ev.f) << ',';
    if (ev.grad_norm) out << format_double(*ev.grad_norm);
    out << ',';
    if (ev.tangent_norm) out << format_double(*ev.tangent_norm);
    out << '\n';
  }
}

StudyResult escape_study(const ExperimentConfig& config) {
  config.validate();
  const ProblemSetup setup = build_problem(config);
  const PrgdParams params = params_for(config, setup, setup.saddle);

  StudyResult result{params, {}, 0.0};
  std::int64_t escaped = 0;
  for (std::int64_t i = 0; i < config.trials; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    const RngStream rng(seed, static_cast<std::uint64_t>(i));
    const RunTrace trace = run_method(config, setup, setup.saddle, params, rng);
    const Point& x = trace.final_point;
    const CriticalityReport report =
        check_second_order_point(setup.problem, x, params.epsilon, params.lip_hess, config.fd_h);
    TrialRecord rec{i,
                    seed,
                    setup.problem->value(x),
                    report.grad_norm,
                    report.verdict,
                    alignment_of(setup, x),
                    trace.n_perturbations,
                    trace.n_manifold_steps,
                    trace.gradient_queries,
                    trace.terminated_early(),
                    check_trace_lemmas(trace, params)};
    if (rec.escaped) ++escaped;
    result.trials.push_back(std::move(rec));
  }
  result.escape_rate = static_cast<double>(escaped) / static_cast<double>(config.trials);
  return result;
}

int run_single(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  const ProblemSetup setup = build_problem(config);
  const RngStream rng(config.seed, 0);
  const Point x0 = start_point(config, setup, rng);
  const PrgdParams params = params_for(config, setup, x0);
  const RunTrace trace = run_method(config, setup, x0, params, rng);

  const std::filesystem::path csv_path = with_suffix(config.out, ".csv");
  {
    std::ofstream csv(csv_path);
    if (!csv) throw InvalidInput("cannot write '" + csv_path.string() + "'");
    write_trace_csv(csv, trace);
  }

  const Point& x = trace.final_point;
  json summary{{"problem", config.problem == ProblemKind::pca ? "pca" : "quadratic_saddle"},
               {"method", config.method == Method::prgd ? "prgd" : "rgd"},
               {"seed", config.seed},
               {"final_f", setup.problem->value(x)},
               {"final_grad_norm", setup.problem->riemannian_gradient(x).norm()},
               {"final_t", trace.final_t},
               {"n_perturbations", trace.n_perturbations},
               {"n_manifold_steps", trace.n_manifold_steps},
               {"n_truncations", trace.n_truncations},
               {"gradient_queries", trace.gradient_queries},
               {"terminated_early", trace.terminated_early()},
               {"params", params_to_json(params)}};
  if (!trace.small_grad_points.empty()) {
    const CriticalityReport report = check_second_order_point(
        setup.problem, trace.small_grad_points.back(), params.epsilon, params.lip_hess, config.fd_h);
    summary["verdict"] = report.verdict;
    summary["last_small_grad_report"] = report_to_json(report);
  } else {
    summary["verdict"] = nullptr;
  }
  if (auto a = alignment_of(setup, x)) summary["alignment"] = *a;
  write_json(with_suffix(config.out, ".json"), summary);
  out << "wrote " << csv_path.string() << " (" << trace.events.size() << " events) and "
      << with_suffix(config.out, ".json").string() << '\n';
  return kExitOk;
}

int run_escape_study(const ExperimentConfig& config, std::ostream& out) {
  const StudyResult result = escape_study(config);
  json trials = json::array();
  for (const TrialRecord& rec : result.trials) {
    json t{{"trial", rec.trial},
           {"seed", rec.seed},
           {"final_f", rec.final_f},
           {"final_grad_norm", rec.final_grad_norm},
           {"escaped", rec.escaped},
           {"n_perturbations", rec.n_perturbations},
           {"n_manifold_steps", rec.n_manifold_steps},
           {"gradient_queries", rec.gradient_queries},
           {"terminated_early", rec.terminated_early},
           {"lemmas_ok", rec.lemmas.ok()}};
    t["alignment"] = rec.alignment ? json(*rec.alignment) : json(nullptr);
    trials.push_back(std::move(t));
  }
  json summary{{"problem", config.problem == ProblemKind::pca ? "pca" : "quadratic_saddle"},
               {"method", config.method == Method::prgd ? "prgd" : "rgd"},
               {"base_seed", config.seed},
               {"n_trials", config.trials},
               {"escape_rate", result.escape_rate},
               {"params", params_to_json(result.params)},
               {"trials", std::move(trials)}};
  const auto path = with_suffix(config.out, ".json");
  write_json(path, summary);
  out << "escape_rate " << result.escape_rate << " over " << config.trials << " trials; wrote " << path.string()
      << '\n';
  return kExitOk;
}

int derive_params_cmd(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  const ProblemSetup setup = build_problem(config);
  const Point x0 = start_point(config, setup, RngStream(config.seed, 0));
  const PrgdParams params = params_for(config, setup, x0);
  out << params_to_json(params).dump(2) << '\n';
  return kExitOk;
}

int verify_cmd(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  const ProblemSetup setup = build_problem(config);
  const RngStream rng(config.seed, 0);
  const Point x0 = start_point(config, setup, rng);
  const PrgdParams params = params_for(config, setup, x0);
  bool all_ok = true;
  json report;

  report["start_criticality"] =
      report_to_json(check_second_order_point(setup.problem, x0, params.epsilon, params.lip_hess, config.fd_h));

  const RngStream mc = rng.split(0x11);
  const double grad_ratio = empirical_grad_lipschitz(setup.problem, config.sample_ball, config.samples, mc);
  const double hess_ratio =
      empirical_hess_lipschitz(setup.problem, config.sample_ball, config.samples, config.fd_h, mc.split(1));
  double grad_bound = setup.constants.lip_grad;
  double hess_bound = setup.constants.lip_hess;
  if (config.problem == ProblemKind::quadratic_saddle) {
    // Linear gradient and constant Hessian: ratios are ||H|| and finite-difference noise.
    grad_bound = setup.constants.lip_grad * (1.0 + 1e-9);
    hess_bound = 1e-4 * setup.constants.lip_grad;
  }
  const bool lip_ok = grad_ratio <= grad_bound && hess_ratio <= hess_bound;
  all_ok = all_ok && lip_ok;
  report["lipschitz"] = json{{"samples", config.samples}, {"ball", config.sample_ball},
                             {"max_grad_ratio", grad_ratio}, {"grad_bound", grad_bound},
                             {"max_hess_ratio", hess_ratio}, {"hess_bound", hess_bound},
                             {"ok", lip_ok}};

  const RunTrace trace = run_method(config, setup, x0, params, rng);
  const LemmaReport lemmas = check_trace_lemmas(trace, params);
  all_ok = all_ok && lemmas.ok();
  report["trace_lemmas"] = lemmas_to_json(lemmas);

  try {
    const CouplingResult c = coupling_experiment(setup.problem, setup.saddle, params, 2.0 * params.radius, config.fd_h);
    const bool ok = std::min(c.drop1, c.drop2) <= -params.score_drop;
    all_ok = all_ok && ok;
    report["coupling"] = json{{"drop1", c.drop1}, {"drop2", c.drop2}, {"omega", c.omega},
                              {"r0", 2.0 * params.radius}, {"F", params.score_drop}, {"ok", ok}};
  } catch (const InvalidArgument& e) {
    report["coupling"] = json{{"skipped", e.what()}};
  }

  report["ok"] = all_ok;
  write_json(with_suffix(config.out, ".json"), report);
  out << report.dump(2) << '\n';
  return all_ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

namespace {

void add_common_options(CLI::App& cmd, ExperimentConfig& c, std::string& problem, std::string& mode,
                        std::string& start, std::string& method, std::string& matrix, std::string& x0,
                        std::string& out) {
  cmd.add_option("--problem", problem, "pca or quadratic_saddle")
      ->check(CLI::IsMember({"pca", "quadratic_saddle"}));
  cmd.add_option("--dim", c.dim, "ambient dimension of the synthetic problem");
  cmd.add_option("--matrix", matrix, "symmetric matrix file (A for pca, H for quadratic_saddle)");
  cmd.add_option("--x0", x0, "start point file for --start file");
  cmd.add_option("--eps", c.epsilon, "gradient tolerance epsilon");
  cmd.add_option("--delta", c.delta, "failure probability delta");
  cmd.add_option("--mode", mode, "theoretical or practical")->check(CLI::IsMember({"theoretical", "practical"}));
  cmd.add_option("--chi", c.chi, "chi (practical mode)");
  cmd.add_option("--seed", c.seed, "base seed");
  cmd.add_option("--trials", c.trials, "number of trials");
  cmd.add_option("--start", start, "random, saddle or file")->check(CLI::IsMember({"random", "saddle", "file"}));
  cmd.add_option("--out", out, "output path prefix (.csv / .json appended)");
  cmd.add_option("--ell", c.ell, "override the pullback Lipschitz constant ell");
  cmd.add_option("--rho", c.rho, "nominal Hessian Lipschitz constant for quadratic_saddle");
  cmd.add_option("--ball", c.ball, "tangent ball radius b (default: problem bound, often infinite)");
  cmd.add_option("--gap", c.gap, "upper bound on f(x0) - f*");
  cmd.add_option("--budget", c.budget, "override the iteration budget T (practical mode)");
  cmd.add_flag("--terminate", c.terminate, "halt when a perturbation phase decreases f by less than F/2");
  cmd.add_option("--method", method, "prgd or rgd (baseline)")->check(CLI::IsMember({"prgd", "rgd"}));
  cmd.add_option("--fd-h", c.fd_h, "finite-difference step for Hessian checks");
  cmd.add_option("--samples", c.samples, "Monte-Carlo samples for verify");
  cmd.add_option("--sample-ball", c.sample_ball, "tangent ball radius for the Lipschitz checks");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perturbed Riemannian gradient descent experiments"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string problem = "pca", mode = "practical", start = "saddle", method = "prgd", matrix, x0, out_path;
  std::vector<CLI::App*> subs;
  for (const char* name : {"run", "study", "params", "verify"}) {
    const char* desc = std::string_view(name) == "run"      ? "single seeded run with CSV trace and JSON summary"
                       : std::string_view(name) == "study"  ? "multi-trial escape-rate study from the saddle"
                       : std::string_view(name) == "params" ? "print the derived parameter set as JSON"
                                                            : "run the verification suites on the configured problem";
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common_options(*sub, config, problem, mode, start, method, matrix, x0, out_path);
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    config.problem = problem == "pca" ? ProblemKind::pca : ProblemKind::quadratic_saddle;
    config.mode = parse_param_mode(mode);
    config.start = start == "random" ? StartKind::random : start == "file" ? StartKind::file : StartKind::saddle;
    config.method = method == "rgd" ? Method::rgd : Method::prgd;
    if (!matrix.empty()) config.matrix = matrix;
    if (!x0.empty()) config.x0_file = x0;
    if (!out_path.empty()) config.out = out_path;

    if (subs[0]->parsed()) return run_single(config, out);
    if (subs[1]->parsed()) return run_escape_study(config, out);
    if (subs[2]->parsed()) return derive_params_cmd(config, out);
    return verify_cmd(config, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    // InvalidArgument, InvalidInput, CapacityError: the configuration cannot run.
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace prgd::cli
