#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfm/bench.hpp"
#include "rfm/error.hpp"

namespace py = pybind11;
using namespace rfm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

linalg::DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a 2-D array");
  linalg::DenseMatrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data());
  return m;
}

Array from_matrix(const linalg::DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data(), m.data() + m.rows() * m.cols(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array from_vector(const std::vector<double>& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

geo::Point to_point(const std::vector<double>& p) {
  if (p.empty() || p.size() > 3) throw Error(ErrorCode::DimensionMismatch, "points have 1 to 3 coordinates");
  geo::Point x{};
  std::copy(p.begin(), p.end(), x.begin());
  return x;
}

bench::KeyValues to_keys(const py::dict& d) {
  bench::KeyValues kv;
  for (const auto& [k, v] : d) {
    std::string value;
    if (py::isinstance<py::str>(v)) {
      value = v.cast<std::string>();
    } else if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (const auto& e : v) value += (value.empty() ? "" : ",") + py::str(e).cast<std::string>();
    } else {
      value = py::str(v).cast<std::string>();
    }
    kv[k.cast<std::string>()] = value;
  }
  return kv;
}

py::dict report_dict(const bench::ErrorReport& r) {
  py::dict d;
  d["problem"] = r.problem;
  d["solver"] = bench::solver_name(r.solver);
  d["status"] = r.status;
  d["termination"] = r.termination;
  d["relative_l2"] = r.relative_l2;
  d["relative_h1"] = r.relative_h1;
  d["residual_norm"] = r.residual_norm;
  d["iterations"] = r.iterations;
  d["jacobian_evaluations"] = r.jacobian_evaluations;
  d["assemble_seconds"] = r.assemble_seconds;
  d["solve_seconds"] = r.solve_seconds;
  d["precondition_seconds"] = r.precondition_seconds;
  d["lsqr_iterations"] = r.lsqr_iterations;
  d["rows"] = r.rows;
  d["cols"] = r.cols;
  d["residual_history"] = r.residual_history;
  if (r.speedup) d["speedup"] = *r.speedup;
  return d;
}

/// Owns the problem and the assembled system.
class System {
 public:
  System(const std::string& problem, const py::dict& config) {
    cfg_ = bench::apply_keys(bench::ExperimentConfig{}, to_keys(config));
    cfg_.problem = problem;
    cfg_.validate();
    sys_ = std::make_unique<disc::RfmSystem>(make_problem(problem, cfg_.params), cfg_.discretization());
  }

  std::size_t rows() const { return sys_->residuals(); }
  std::size_t cols() const { return sys_->unknowns(); }

  Array residual(const Array& u) const {
    std::vector<double> f(sys_->residuals());
    sys_->residual(checked(u), f);
    return from_vector(f);
  }

  Array jacobian(const Array& u) const {
    linalg::DenseMatrix j;
    sys_->jacobian(checked(u), j);
    return from_matrix(j);
  }

  /// Values (and optional partials) at an (P, dim) array: result shape (P, K, orders).
  Array evaluate(const Array& u, const Array& points, const std::vector<std::array<int, 3>>& orders) const {
    if (points.ndim() != 2 || points.shape(1) != sys_->problem().dim)
      throw Error(ErrorCode::DimensionMismatch, "points must have shape (P, dim)");
    std::vector<geo::Point> pts(points.shape(0));
    for (std::size_t p = 0; p < pts.size(); ++p)
      for (int a = 0; a < sys_->problem().dim; ++a) pts[p][a] = points.at(p, a);
    std::vector<MultiIndex> mis;
    for (const auto& o : orders) mis.push_back({o[0], o[1], o[2]});
    if (mis.empty()) mis.push_back(mi::V);
    const auto v = sys_->evaluate(checked(u), pts, mis);
    Array out({pts.size(), static_cast<std::size_t>(sys_->problem().components), mis.size()});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
  }

  py::dict solve(const std::string& solver) const {
    auto s = cfg_.solver_params;
    s.seed = cfg_.seed;
    const auto ns = sys_->nls_system(cfg_.scaling);
    const std::vector<double> u0(sys_->unknowns(), 0.0);
    const auto kind = bench::parse_solver(solver);
    nls::SolverReport r;
    switch (kind) {
      case bench::SolverKind::ipn: r = nls::ipn_solve(ns, u0, s); break;
      case bench::SolverKind::amipn: r = nls::amipn_solve(ns, u0, s); break;
      case bench::SolverKind::lm: r = nls::lm_solve(ns, u0, s.max_outer, s.epsilon); break;
      case bench::SolverKind::gauss_newton: r = nls::gauss_newton_solve(ns, u0, s.max_outer, s.epsilon); break;
    }
    py::dict d;
    d["u"] = from_vector(r.final_u);
    d["iterations"] = r.outer_iterations;
    d["jacobian_evaluations"] = r.jacobian_evaluations;
    d["residual_history"] = r.residual_history;
    d["termination"] = nls::termination_name(r.termination);
    return d;
  }

 private:
  std::vector<double> checked(const Array& u) const {
    auto v = to_vector(u);
    if (v.size() != sys_->unknowns()) throw Error(ErrorCode::DimensionMismatch, "coefficient vector length");
    return v;
  }

  bench::ExperimentConfig cfg_;
  std::unique_ptr<disc::RfmSystem> sys_;
};

}  // namespace

PYBIND11_MODULE(rfm, m) {
  m.doc() = "Random feature PDE discretization with sketch-preconditioned inexact Newton solvers";
  static py::exception<Error> rfm_error(m, "RfmError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = rfm_error;
      py::object inst = err(e.what());
      inst.attr("code") = error_code_name(e.code());
      PyErr_SetObject(err.ptr(), inst.ptr());
    }
  });

  m.def("count_sketch", [](const Array& j, double gamma, std::uint64_t seed) {
    const auto a = to_matrix(j);
    return from_matrix(linalg::apply_count_sketch(linalg::make_sketch_plan(a.rows(), a.cols(), gamma, seed), a));
  }, py::arg("J"), py::arg("gamma") = 3.0, py::arg("seed") = 0, "Count sketch S J with ceil(gamma n) rows.");

  m.def("thin_qr_r", [](const Array& b) {
    const auto r = linalg::thin_qr(to_matrix(b));
    const std::size_t n = r.order();
    Array out({n, n});
    std::copy(r.data(), r.data() + n * n, out.mutable_data());
    return out;
  }, py::arg("B"), "Upper-triangular R of B = QR with positive diagonal.");

  m.def("sketch_precondition", [](const Array& j, double gamma, std::uint64_t seed) {
    auto a = to_matrix(j);
    const auto r = linalg::thin_qr(linalg::apply_count_sketch(linalg::make_sketch_plan(a.rows(), a.cols(), gamma, seed), a));
    linalg::right_precondition_in_place(a, r);
    return from_matrix(a);
  }, py::arg("J"), py::arg("gamma") = 3.0, py::arg("seed") = 0, "J R^-1 with R from the sketched QR.");

  m.def("lsqr", [](const Array& a, const Array& b, double eta, std::size_t max_iter) {
    const auto mat = to_matrix(a);
    const auto r = linalg::lsqr(linalg::DenseOperator(mat), to_vector(b), eta, max_iter);
    py::dict d;
    d["x"] = from_vector(r.solution);
    d["iterations"] = r.iterations;
    d["residual_norm"] = r.residual_norm;
    d["converged"] = r.termination == linalg::LsqrTermination::tolerance_met;
    return d;
  }, py::arg("A"), py::arg("b"), py::arg("eta") = 1e-10, py::arg("max_iter") = 0);

  m.def("list_problems", &list_problems);
  m.def("describe_problem", [](const std::string& name) {
    const auto pb = make_problem(name);
    py::dict d;
    d["name"] = pb.name;
    d["description"] = pb.description;
    d["dim"] = pb.dim;
    d["components"] = pb.components;
    d["has_exact"] = pb.has_exact();
    return d;
  }, py::arg("name"));
  m.def("exact_solution", [](const std::string& name, const std::vector<double>& p) {
    const auto pb = make_problem(name);
    std::vector<double> out;
    for (const auto& j : pb.exact_jet(to_point(p))) out.push_back(j.v);
    return out;
  }, py::arg("problem"), py::arg("point"));
  m.def("source_consistency_residual", [](const std::string& name, const std::vector<double>& p) {
    return source_consistency_residual(make_problem(name), to_point(p));
  }, py::arg("problem"), py::arg("point"));

  py::class_<System>(m, "RfmSystem")
      .def(py::init<const std::string&, const py::dict&>(), py::arg("problem"), py::arg("config") = py::dict())
      .def_property_readonly("rows", &System::rows)
      .def_property_readonly("cols", &System::cols)
      .def("residual", &System::residual, py::arg("u"))
      .def("jacobian", &System::jacobian, py::arg("u"))
      .def("evaluate", &System::evaluate, py::arg("u"), py::arg("points"),
           py::arg("orders") = std::vector<std::array<int, 3>>{})
      .def("solve", &System::solve, py::arg("solver") = "amipn");

  m.def("run_experiment", [](const py::dict& config) {
    bench::ExperimentConfig c = bench::apply_keys({}, to_keys(config));
    bench::ErrorReport r;
    {
      py::gil_scoped_release release;
      r = bench::run_experiment(c);
    }
    return report_dict(r);
  }, py::arg("config"), "Config keys as in the INI format; failures are reported in 'status'.");

  m.def("csv_header", &bench::csv_header, py::arg("components") = 1, py::arg("with_speedup") = false);

  m.def("property_checks", [] {
    std::vector<py::dict> out;
    for (const auto& c : bench::run_property_checks()) {
      py::dict d;
      d["id"] = c.id;
      d["name"] = c.name;
      d["passed"] = c.pass;
      d["detail"] = c.detail;
      out.push_back(d);
    }
    return out;
  });
}
