#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "prgd/cli.hpp"
#include "prgd/errors.hpp"

namespace py = pybind11;
using namespace prgd;

namespace {

using PyCost = std::shared_ptr<CostFunction>;

Point make_point(const CostPtr& problem, const Vector& x) { return problem->manifold().point(x); }

py::dict trace_to_dict(const RunTrace& trace) {
  py::list events;
  for (const TraceEvent& ev : trace.events) {
    py::dict e;
    e["t"] = ev.t;
    e["kind"] = std::string(to_string(ev.kind));
    e["f"] = ev.f;
    e["grad_norm"] = ev.grad_norm;
    e["tangent_norm"] = ev.tangent_norm;
    events.append(std::move(e));
  }
  py::list small;
  for (const Point& p : trace.small_grad_points) small.append(p.coords());
  py::dict d;
  d["events"] = events;
  d["final_point"] = trace.final_point.coords();
  d["final_t"] = trace.final_t;
  d["gradient_queries"] = trace.gradient_queries;
  d["n_manifold_steps"] = trace.n_manifold_steps;
  d["n_perturbations"] = trace.n_perturbations;
  d["n_truncations"] = trace.n_truncations;
  d["small_grad_points"] = small;
  d["suspect"] = trace.suspect ? py::cast(Vector(trace.suspect->coords())) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perturbed Riemannian gradient descent";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0,
           py::arg("counter") = 0)
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("stream_id", &RngStream::stream_id)
      .def_property_readonly("counter", &RngStream::counter)
      .def("split", &RngStream::split)
      .def("uniform", [](const RngStream& r) { auto d = r.uniform(); return py::make_tuple(d.value, d.next); })
      .def("gaussian", [](const RngStream& r) { auto d = r.gaussian(); return py::make_tuple(d.value, d.next); })
      .def("__repr__", [](const RngStream& r) {
        std::ostringstream os;
        os << "RngStream(seed=" << r.seed() << ", stream_id=" << r.stream_id() << ", counter=" << r.counter() << ")";
        return os.str();
      });

  m.def("min_eigpair", [](const Matrix& a) {
    const EigenPair p = min_eigpair(SymMatrix(a));
    return py::make_tuple(p.value, p.vector);
  });
  m.def("operator_norm", [](const Matrix& a) { return operator_norm(SymMatrix(a)); });
  m.def("sample_unit_ball", [](Eigen::Index d, const RngStream& rng) {
    auto s = sample_unit_ball(d, rng);
    return py::make_tuple(s.value, s.next);
  });
  m.def("boundary_alpha", &boundary_alpha, py::arg("s"), py::arg("g"), py::arg("eta"), py::arg("ball"));

  py::class_<CostFunction, PyCost>(m, "CostFunction")
      .def("value", [](const PyCost& p, const Vector& x) { return p->value(make_point(p, x)); })
      .def("riemannian_gradient",
           [](const PyCost& p, const Vector& x) { return Vector(p->riemannian_gradient(make_point(p, x)).coords()); })
      .def("pullback_value", [](const PyCost& p, const Vector& x, const Vector& s) {
        const Point base = make_point(p, x);
        return Pullback(p, base).value(p->manifold().project(base, s));
      })
      .def("pullback_gradient", [](const PyCost& p, const Vector& x, const Vector& s) {
        const Point base = make_point(p, x);
        return Vector(Pullback(p, base).gradient(p->manifold().project(base, s)).coords());
      })
      .def("pullback_hessian", [](const PyCost& p, const Vector& x, double h) {
        return Matrix(Pullback(p, make_point(p, x)).hessian_at_zero(h).matrix());
      }, py::arg("x"), py::arg("h") = kDefaultHessianStep)
      .def("retract", [](const PyCost& p, const Vector& x, const Vector& s) {
        const Point base = make_point(p, x);
        return Vector(p->manifold().retract(base, p->manifold().project(base, s)).coords());
      });

  py::class_<PcaProblem, CostFunction, std::shared_ptr<PcaProblem>>(m, "PcaProblem")
      .def(py::init([](const Matrix& a) { return std::make_shared<PcaProblem>(SymMatrix(a)); }))
      .def_property_readonly("norm_a", &PcaProblem::norm_a)
      .def_property_readonly("optimal_value", &PcaProblem::optimal_value)
      .def("constants", [](const PcaProblem& p) {
        const ProblemConstants c = p.constants();
        return py::dict(py::arg("L") = c.lip_grad, py::arg("rho") = c.lip_hess, py::arg("b") = c.ball);
      });

  py::class_<QuadraticSaddle, CostFunction, std::shared_ptr<QuadraticSaddle>>(m, "QuadraticSaddle")
      .def(py::init([](const Matrix& h) { return std::make_shared<QuadraticSaddle>(SymMatrix(h)); }));

  m.def("synthetic_pca_matrix", [](Eigen::Index d, std::uint64_t seed) {
    const SyntheticSpectrum s = synthetic_pca_matrix(d, RngStream(seed, 0));
    return py::make_tuple(Matrix(s.matrix.matrix()), s.eigenvalues, s.rotation);
  }, py::arg("d"), py::arg("seed") = 0);

  py::enum_<ParamMode>(m, "ParamMode")
      .value("theoretical", ParamMode::theoretical)
      .value("practical", ParamMode::practical);

  py::class_<PrgdParams>(m, "PrgdParams")
      .def_readonly("epsilon", &PrgdParams::epsilon)
      .def_readonly("delta", &PrgdParams::delta)
      .def_readonly("dim", &PrgdParams::dim)
      .def_readonly("ell", &PrgdParams::ell)
      .def_readonly("lip_grad", &PrgdParams::lip_grad)
      .def_readonly("lip_hess", &PrgdParams::lip_hess)
      .def_readonly("ball", &PrgdParams::ball)
      .def_readonly("gap", &PrgdParams::gap)
      .def_readonly("chi_min", &PrgdParams::chi_min)
      .def_readonly("chi", &PrgdParams::chi)
      .def_readonly("eta", &PrgdParams::eta)
      .def_readonly("radius", &PrgdParams::radius)
      .def_readonly("horizon", &PrgdParams::horizon)
      .def_readonly("score_drop", &PrgdParams::score_drop)
      .def_readonly("locality", &PrgdParams::locality)
      .def_readonly("budget", &PrgdParams::budget)
      .def_readonly("budget_real", &PrgdParams::budget_real)
      .def_readonly("mode", &PrgdParams::mode);

  m.def("derive_params",
        [](double epsilon, Eigen::Index dim, double ell, double lip_grad, double lip_hess, double gap,
           ParamMode mode, std::optional<double> chi, double ball, double delta, std::optional<std::int64_t> budget) {
          ParamInputs in;
          in.epsilon = epsilon;
          in.dim = dim;
          in.ell = ell;
          in.lip_grad = lip_grad;
          in.lip_hess = lip_hess;
          in.gap = gap;
          in.mode = mode;
          in.chi = chi;
          in.ball = ball;
          in.delta = delta;
          in.budget = budget;
          return derive_params(in);
        },
        py::arg("epsilon"), py::arg("dim"), py::arg("ell"), py::arg("lip_grad"), py::arg("lip_hess"),
        py::arg("gap"), py::arg("mode") = ParamMode::practical, py::arg("chi") = py::none(),
        py::arg("ball") = std::numeric_limits<double>::infinity(), py::arg("delta") = 0.1,
        py::arg("budget") = py::none());

  m.def("run_prgd",
        [](const PyCost& p, const Vector& x0, const PrgdParams& params, const RngStream& rng, bool terminate) {
          return trace_to_dict(run_prgd(p, make_point(p, x0), params, rng, PrgdOptions{terminate}));
        },
        py::arg("problem"), py::arg("x0"), py::arg("params"), py::arg("rng"), py::arg("terminate") = false);

  m.def("run_rgd",
        [](const PyCost& p, const Vector& x0, double eta, double epsilon, std::int64_t max_iters) {
          return trace_to_dict(run_rgd(p, make_point(p, x0), eta, epsilon, max_iters));
        },
        py::arg("problem"), py::arg("x0"), py::arg("eta"), py::arg("epsilon"), py::arg("max_iters"));

  m.def("check_second_order_point",
        [](const PyCost& p, const Vector& x, double eps, double rho, double fd_h) {
          const CriticalityReport r = check_second_order_point(p, make_point(p, x), eps, rho, fd_h);
          return py::dict(py::arg("grad_norm") = r.grad_norm, py::arg("min_eig_pullback") = r.min_eig_pullback,
                          py::arg("min_eig_hess") = r.min_eig_hess, py::arg("verdict") = r.verdict,
                          py::arg("escape_direction") = r.escape_direction);
        },
        py::arg("problem"), py::arg("x"), py::arg("eps"), py::arg("rho"), py::arg("fd_h") = kDefaultHessianStep);

  m.def("coupling_experiment",
        [](const PyCost& p, const Vector& x, const PrgdParams& params, double r0) {
          const CouplingResult c = coupling_experiment(p, make_point(p, x), params, r0);
          return py::dict(py::arg("drop1") = c.drop1, py::arg("drop2") = c.drop2, py::arg("omega") = c.omega,
                          py::arg("min_eig") = c.min_eig);
        },
        py::arg("problem"), py::arg("x"), py::arg("params"), py::arg("r0"));

  m.def("empirical_grad_lipschitz",
        [](const PyCost& p, double ball, std::int64_t n, const RngStream& rng) {
          return empirical_grad_lipschitz(p, ball, n, rng);
        }, py::arg("problem"), py::arg("ball"),
        py::arg("n_samples"), py::arg("rng"));
  m.def("empirical_hess_lipschitz",
        [](const PyCost& p, double ball, std::int64_t n, double fd_h, const RngStream& rng) {
          return empirical_hess_lipschitz(p, ball, n, fd_h, rng);
        }, py::arg("problem"), py::arg("ball"),
        py::arg("n_samples"), py::arg("fd_h"), py::arg("rng"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
