#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spdcone/foliation.hpp"
#include "spdcone/json_io.hpp"
#include "spdcone/suites.hpp"

namespace py = pybind11;
using namespace spdcone;

namespace {

ProjectionOptions make_options(double tol, int max_iter, std::optional<ConePoint> start) {
  ProjectionOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.start = std::move(start);
  return o;
}

py::object json_to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_spdcone, mod) {
  mod.doc() = "Geometry of the positive cone of unitized Hilbert-Schmidt operators (finite-dimensional model)";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(mod, "DimensionError", base.ptr());
  py::register_exception<DomainError>(mod, "DomainError", base.ptr());
  py::register_exception<SingularError>(mod, "SingularError", base.ptr());
  py::register_exception<DegenerateError>(mod, "DegenerateError", base.ptr());
  py::register_exception<IndexError>(mod, "IndexError", base.ptr());
  py::register_exception<UsageError>(mod, "UsageError", base.ptr());
  py::register_exception<ConvergenceError>(mod, "ConvergenceError", base.ptr());

  py::class_<UnitizedHermitian>(mod, "Hermitian")
      .def(py::init<double, const Matrix&>(), py::arg("scalar"), py::arg("hs"))
      .def_static("zero", &UnitizedHermitian::zero)
      .def_static("identity", &UnitizedHermitian::identity)
      .def_static("from_matrix", &UnitizedHermitian::from_matrix, py::arg("m"), py::arg("scalar") = 1.0)
      .def_property_readonly("scalar", &UnitizedHermitian::scalar)
      .def_property_readonly("hs", &UnitizedHermitian::hs)
      .def_property_readonly("dim", &UnitizedHermitian::dim)
      .def("materialize", &UnitizedHermitian::materialize)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def(py::self * double())
      .def(-py::self)
      .def("__repr__", [](const UnitizedHermitian& x) { return "Hermitian(" + to_json(x).dump() + ")"; });

  py::class_<UnitizedOperator>(mod, "Operator")
      .def(py::init<Complex, Matrix>(), py::arg("scalar"), py::arg("mat"))
      .def(py::init<const UnitizedHermitian&>())
      .def_static("identity", &UnitizedOperator::identity)
      .def_static("from_matrix", &UnitizedOperator::from_matrix, py::arg("m"), py::arg("scalar") = Complex(1.0))
      .def_property_readonly("scalar", &UnitizedOperator::scalar)
      .def_property_readonly("mat", &UnitizedOperator::mat)
      .def_property_readonly("dim", &UnitizedOperator::dim)
      .def("materialize", &UnitizedOperator::materialize)
      .def("hermitian", &UnitizedOperator::hermitian);
  py::implicitly_convertible<UnitizedHermitian, UnitizedOperator>();

  py::class_<ConePoint>(mod, "Point")
      .def(py::init<const UnitizedHermitian&>())
      .def(py::init([](double scalar, const Matrix& hs) { return ConePoint(UnitizedHermitian(scalar, hs)); }),
           py::arg("scalar"), py::arg("hs"))
      .def_static("identity", &ConePoint::identity)
      .def_property_readonly("scalar", &ConePoint::scalar)
      .def_property_readonly("hs", &ConePoint::hs)
      .def_property_readonly("dim", &ConePoint::dim)
      .def_property_readonly("op", &ConePoint::op)
      .def("materialize", &ConePoint::materialize)
      .def("condition_number", &ConePoint::condition_number)
      .def("__repr__", [](const ConePoint& p) { return "Point(" + to_json(p.op()).dump() + ")"; });
  py::implicitly_convertible<ConePoint, UnitizedHermitian>();

  mod.def("hs_inner", &hs_inner);
  mod.def("hs_norm", &hs_norm);
  mod.def("mat_exp", &mat_exp);
  mod.def("mat_log", &mat_log);
  mod.def("mat_pow", &mat_pow);
  mod.def("frechet_exp", &frechet_exp);

  mod.def("metric_at", &metric_at);
  mod.def("norm_at", &norm_at);
  mod.def("exp_point", &exp_point);
  mod.def("log_point", &log_point);
  mod.def("geodesic_eval", &geodesic_eval);
  mod.def("distance", &distance);
  mod.def("parallel_transport", &parallel_transport);
  mod.def("curvature", &curvature);
  mod.def("sectional", &sectional);
  mod.def("symmetry", &symmetry);
  mod.def("transvection", &transvection);
  mod.def("jacobi_field", &jacobi_field);

  py::class_<TripleSystem>(mod, "TripleSystem")
      .def(py::init<std::vector<UnitizedHermitian>, std::string, double>(), py::arg("basis"),
           py::arg("kind") = "custom", py::arg("tol") = kTripleTol)
      .def_static("diagonal", &TripleSystem::diagonal)
      .def_static("scalar", &TripleSystem::scalar)
      .def_static("commutant", &TripleSystem::commutant)
      .def_static("block", &TripleSystem::block)
      .def_static("polynomial", &TripleSystem::polynomial)
      .def_static("full", &TripleSystem::full)
      .def_property_readonly("basis", &TripleSystem::basis)
      .def_property_readonly("dim", &TripleSystem::dim)
      .def_property_readonly("n", &TripleSystem::n)
      .def_property_readonly("kind", &TripleSystem::kind)
      .def("project", &TripleSystem::project)
      .def("span_residual", &TripleSystem::span_residual);

  mod.def("is_triple_system", [](const std::vector<UnitizedHermitian>& v, double tol) {
    const ClosureCheck c = is_triple_system(v, tol);
    return py::make_tuple(c.ok, c.max_residual);
  }, py::arg("vectors"), py::arg("tol") = kTripleTol);
  mod.def("contains_point", &contains_point, py::arg("m"), py::arg("p"), py::arg("tol") = 1e-7);
  mod.def("project_tangent", &project_tangent);
  mod.def("tangent_basis_at", &tangent_basis_at);

  py::class_<ProjectionResult>(mod, "ProjectionResult")
      .def_readonly("foot", &ProjectionResult::foot)
      .def_readonly("normal", &ProjectionResult::normal)
      .def_readonly("iterations", &ProjectionResult::iterations)
      .def_readonly("residual", &ProjectionResult::residual);

  mod.def("project", [](const TripleSystem& m, const ConePoint& p, double tol, int max_iter,
                         std::optional<ConePoint> start) { return project(m, p, make_options(tol, max_iter, start)); },
          py::arg("m"), py::arg("p"), py::arg("tol") = 1e-10, py::arg("max_iter") = 500, py::arg("start") = py::none());

  mod.def("decompose_mvm", [](const TripleSystem& m, const UnitizedHermitian& a) {
    const MvmDecomposition d = decompose_mvm(m, a);
    return py::make_tuple(d.x, d.v);
  });
  mod.def("polar_relative", [](const TripleSystem& m, const UnitizedOperator& g) {
    const RelativePolar d = polar_relative(m, g);
    return py::make_tuple(d.ex, d.ev, d.u);
  });
  mod.def("diag_decompose", [](const Matrix& a, double lambda) {
    const DiagDecomposition d = diag_decompose(a, lambda);
    return py::make_tuple(d.d, d.w);
  });
  mod.def("nm_coords", [](const TripleSystem& m, const ConePoint& p) {
    const NormalCoords c = nm_coords(m, p);
    return py::make_tuple(c.q, c.v);
  });
  mod.def("e_map", &e_map, py::arg("m"), py::arg("q"), py::arg("v"), py::arg("tol") = 1e-8);
  mod.def("block_decompose", [](const Matrix& b, int k) {
    const BlockDecomposition d = block_decompose(b, k);
    return py::make_tuple(d.a, d.x, d.y, d.distance);
  });
  mod.def("full_block_polar", [](const UnitizedOperator& g, int k) {
    const BlockPolar d = full_block_polar(g, k);
    return py::make_tuple(d.lambda, d.r, d.v, d.u);
  });

  mod.def("leaf_of", &leaf_of);
  mod.def("leaf_project", &leaf_project);
  mod.def("split", [](const ConePoint& p) {
    const LeafPoint s = split(p);
    return py::make_tuple(s.point, s.leaf);
  });
  mod.def("unsplit", &unsplit);
  mod.def("leaf_distance", &leaf_distance);

  mod.def("suite_names", &suite_names);
  mod.def("run_suite", [](const std::string& name, int trials, std::uint64_t seed, int n) {
    RandomModel model;
    model.seed = seed;
    model.n = n;
    SuiteReport r;
    {
      py::gil_scoped_release release;
      r = run_suite(name, model, trials);
    }
    py::object out = json_to_python(to_json(r));
    out["wall_time"] = r.wall_time;
    return out;
  }, py::arg("name"), py::arg("trials") = 200, py::arg("seed") = 1, py::arg("n") = 2);
}
