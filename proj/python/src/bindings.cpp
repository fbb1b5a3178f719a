#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "bem_annulus/bem_annulus.hpp"

namespace py = pybind11;
using namespace bem;

namespace {

using Pair = std::pair<double, double>;

Point2 pt(const Pair& p) { return {p.first, p.second}; }
Pair tup(Point2 p) { return {p.x, p.y}; }

// Matrices and mesh bundled so repeated solves reuse one assembly.
struct System {
  InfluenceMatrices mats;
};

py::dict sample_dict(const FieldSample& s) {
  py::dict d;
  d["point"] = tup(s.point);
  d["value"] = s.value ? py::cast(*s.value) : py::none();
  d["class"] = std::string(to_string(s.edge_factor.classification));
  d["near_boundary"] = s.near_boundary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constant-element boundary element solver for the Laplace equation on an annulus";
  m.attr("__version__") = BEM_ANNULUS_VERSION;

  auto base = py::register_exception<Error>(m, "BemError", PyExc_RuntimeError);
  // Created once and kept alive for the interpreter lifetime.
  static PyObject* config_error = nullptr;
  static PyObject* input_error = nullptr;
  static PyObject* numerical_error = nullptr;
  static PyObject* domain_error = nullptr;
  const auto subclass = [&](const char* name) {
    PyObject* type = PyErr_NewException((std::string("bem_annulus.") + name).c_str(), base.ptr(), nullptr);
    m.add_object(name, py::handle(type));
    return type;
  };
  config_error = subclass("ConfigError");
  input_error = subclass("InputDataError");
  numerical_error = subclass("NumericalError");
  domain_error = subclass("DomainError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyObject* type = domain_error;
      switch (e.category()) {
        case ErrorCategory::Config: type = config_error; break;
        case ErrorCategory::InputData: type = input_error; break;
        case ErrorCategory::Numerical: type = numerical_error; break;
        case ErrorCategory::Domain: type = domain_error; break;
      }
      py::set_error(type, e.what());
    }
  });

  py::class_<AnnulusMesh, std::shared_ptr<AnnulusMesh>>(m, "AnnulusMesh")
      .def(py::init([](double outer_radius, double inner_radius, std::size_t n_outer, std::size_t n_inner,
                       Pair outer_center, Pair inner_center, double outer_start_angle, double inner_start_angle) {
             return std::make_shared<AnnulusMesh>(
                 CircleSpec{pt(outer_center), outer_radius, n_outer, outer_start_angle},
                 CircleSpec{pt(inner_center), inner_radius, n_inner, inner_start_angle});
           }),
           py::arg("outer_radius"), py::arg("inner_radius"), py::arg("n_outer"), py::arg("n_inner"),
           py::arg("outer_center") = Pair{0.0, 0.0}, py::arg("inner_center") = Pair{0.0, 0.0},
           py::arg("outer_start_angle") = 0.0, py::arg("inner_start_angle") = 0.0)
      .def("__len__", &AnnulusMesh::size)
      .def_property_readonly("n_outer", [](const AnnulusMesh& mesh) { return mesh.outer().size(); })
      .def_property_readonly("n_inner", [](const AnnulusMesh& mesh) { return mesh.inner().size(); })
      .def("midpoints", [](const AnnulusMesh& mesh) {
        Eigen::MatrixX2d out(static_cast<Eigen::Index>(mesh.size()), 2);
        for (std::size_t k = 0; k < mesh.size(); ++k) {
          out(k, 0) = mesh[k].midpoint().x;
          out(k, 1) = mesh[k].midpoint().y;
        }
        return out;
      })
      .def("normals", [](const AnnulusMesh& mesh) {
        Eigen::MatrixX2d out(static_cast<Eigen::Index>(mesh.size()), 2);
        for (std::size_t k = 0; k < mesh.size(); ++k) {
          out(k, 0) = mesh[k].normal().x;
          out(k, 1) = mesh[k].normal().y;
        }
        return out;
      })
      .def("lengths", [](const AnnulusMesh& mesh) {
        Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.size()));
        for (std::size_t k = 0; k < mesh.size(); ++k) out[k] = mesh[k].length();
        return out;
      })
      .def("element", [](const AnnulusMesh& mesh, std::size_t k) {
        if (k >= mesh.size()) throw py::index_error("element index out of range");
        return std::make_pair(tup(mesh[k].start()), tup(mesh[k].end()));
      })
      .def("classify", [](const AnnulusMesh& mesh, Pair p) {
        return std::string(to_string(classify_point(mesh, pt(p)).classification));
      })
      .def("edge_factor", [](const AnnulusMesh& mesh, Pair p) { return classify_point(mesh, pt(p)).value(); })
      .def("distance_to_boundary", [](const AnnulusMesh& mesh, Pair p) { return distance_to_boundary(mesh, pt(p)); })
      .def_property_readonly("max_element_length", &AnnulusMesh::max_element_length)
      .def_property_readonly("total_length", &AnnulusMesh::total_length);

  m.def("f1", [](Pair start, Pair end, Pair field) { return f1(BoundaryElement(pt(start), pt(end)), pt(field)); },
        py::arg("start"), py::arg("end"), py::arg("field"));
  m.def("f2", [](Pair start, Pair end, Pair field) { return f2(BoundaryElement(pt(start), pt(end)), pt(field)); },
        py::arg("start"), py::arg("end"), py::arg("field"));
  m.def("f1_quadrature", [](Pair start, Pair end, Pair field, double tol) {
    return oracle::f1_quadrature(BoundaryElement(pt(start), pt(end)), pt(field), tol);
  }, py::arg("start"), py::arg("end"), py::arg("field"), py::arg("rel_tol") = 1e-12);
  m.def("f2_quadrature", [](Pair start, Pair end, Pair field, double tol) {
    return oracle::f2_quadrature(BoundaryElement(pt(start), pt(end)), pt(field), tol);
  }, py::arg("start"), py::arg("end"), py::arg("field"), py::arg("rel_tol") = 1e-12);

  py::class_<BoundarySolution>(m, "Solution")
      .def_readonly("a_bar", &BoundarySolution::a_bar)
      .def_readonly("p_bar", &BoundarySolution::p_bar)
      .def_readonly("residual_norm", &BoundarySolution::residual_norm)
      .def_readonly("condition_estimate", &BoundarySolution::condition_estimate)
      .def_readonly("warnings", &BoundarySolution::warnings)
      .def_property_readonly("mesh", [](const BoundarySolution& s) { return std::const_pointer_cast<AnnulusMesh>(s.mesh); })
      .def("potential", [](const BoundarySolution& s, Pair p) { return interior_potential(s, pt(p)); })
      .def("sample", [](const BoundarySolution& s, Pair p) { return sample_dict(sample_point(s, pt(p))); })
      .def("field_map",
           [](const BoundarySolution& s, double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny) {
             const FieldGrid grid = field_map(s, {x0, x1, y0, y1, nx, ny});
             Eigen::MatrixXd values(static_cast<Eigen::Index>(ny), static_cast<Eigen::Index>(nx));
             for (std::size_t iy = 0; iy < ny; ++iy) {
               for (std::size_t ix = 0; ix < nx; ++ix) {
                 const auto& v = grid.at(ix, iy).value;
                 values(iy, ix) = v ? *v : std::numeric_limits<double>::quiet_NaN();
               }
             }
             return values;
           },
           py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"), py::arg("nx"), py::arg("ny"),
           "Potential on a ny-by-nx grid; NaN outside the annulus")
      .def("to_text", [](const BoundarySolution& s) {
        std::ostringstream out;
        write_solution(out, s);
        return out.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_solution(in);
      });

  py::class_<System>(m, "System")
      .def(py::init([](std::shared_ptr<AnnulusMesh> mesh) { return System{assemble(*mesh)}; }), py::arg("mesh"))
      .def_property_readonly("f1", [](const System& s) { return s.mats.f1; })
      .def_property_readonly("f2", [](const System& s) { return s.mats.f2; })
      .def("solve_dirichlet", [](const System& s, const Eigen::VectorXd& a) {
        return solve_dirichlet_to_neumann(s.mats, a);
      }, py::arg("a_bar"), "Neumann data from Dirichlet data on every element")
      .def("solve_mixed",
           [](const System& s, const std::vector<std::string>& kinds, const std::vector<double>& values) {
             if (kinds.size() != values.size()) throw py::value_error("kinds and values differ in length");
             std::vector<BoundaryConditions::Assignment> assignments;
             for (std::size_t k = 0; k < kinds.size(); ++k) {
               ConditionKind kind;
               if (kinds[k] == "dirichlet") kind = ConditionKind::Dirichlet;
               else if (kinds[k] == "neumann") kind = ConditionKind::Neumann;
               else throw py::value_error("condition kind must be 'dirichlet' or 'neumann'");
               assignments.push_back({k, {kind, values[k]}});
             }
             return solve_mixed(s.mats, BoundaryConditions(static_cast<std::size_t>(s.mats.n()), assignments));
           },
           py::arg("kinds"), py::arg("values"))
      .def("residual", [](const System& s, const Eigen::VectorXd& a, const Eigen::VectorXd& p) {
        return collocation_residual(s.mats, a, p);
      });

  m.def("solve_dirichlet", [](std::shared_ptr<AnnulusMesh> mesh, const Eigen::VectorXd& a) {
    return solve_dirichlet_to_neumann(assemble(*mesh), a);
  }, py::arg("mesh"), py::arg("a_bar"));

  m.def("parse_fem_csv", [](const std::string& text, std::shared_ptr<AnnulusMesh> mesh, double tol) {
    std::istringstream in(text);
    const FemBoundaryData data = parse_fem_csv(in, *mesh, tol, "<string>");
    return data.dirichlet();
  }, py::arg("text"), py::arg("mesh"), py::arg("position_tol") = kDefaultPositionTol,
        "Dirichlet vector from FEM boundary CSV text");

  m.def("error_report", [](const std::vector<double>& measured, const std::vector<double>& calculated) {
    if (measured.size() != calculated.size()) throw py::value_error("columns differ in length");
    ReferenceTable table;
    for (std::size_t i = 0; i < measured.size(); ++i) table.rows.push_back({measured[i], calculated[i]});
    const ErrorReport r = relative_error_report(table);
    return std::make_pair(r.row_errors, r.average);
  }, py::arg("measured"), py::arg("calculated"), "Per-row relative errors in percent and their average");

  m.def("coil_current", [](double t) { return coil_current(t, CoilParams{}); }, py::arg("t"));

  m.def("run_scenario", [](const std::string& config_path, const std::string& fem_path) {
    const ScenarioConfig cfg = load_config(config_path);
    std::ifstream in(fem_path);
    if (!in) throw DataError("cannot open " + fem_path);
    const FemBoundaryData fem = parse_fem_csv(in, cfg.mesh(), cfg.position_tol, fem_path);
    const ScenarioResult result = run_scenario(cfg, fem);
    py::dict out;
    out["solution"] = result.solution;
    py::list samples;
    for (const auto& s : result.plate_samples) samples.append(sample_dict(s));
    out["plate_samples"] = samples;
    if (result.report) {
      out["row_errors"] = result.report->row_errors;
      out["average_error"] = result.report->average;
    }
    return out;
  }, py::arg("config_path"), py::arg("fem_path"));

  m.def("convergence_study",
        [](double outer_radius, double inner_radius, const std::vector<std::size_t>& n_list,
           const std::string& reference) {
          const auto ref = oracle::parse_reference(reference);
          const ConvergenceRecord rec = convergence_study({{0, 0}, outer_radius, 0, 0.0},
                                                          {{0, 0}, inner_radius, 0, 0.0}, ref, n_list);
          py::list rows;
          for (const auto& e : rec.entries) {
            py::dict d;
            d["n"] = e.n_total;
            d["max_error"] = e.max_error;
            d["avg_error"] = e.avg_error;
            d["net_flux"] = e.net_flux;
            rows.append(d);
          }
          return rows;
        },
        py::arg("outer_radius") = 2.0, py::arg("inner_radius") = 1.0,
        py::arg("n_list") = std::vector<std::size_t>{20, 40, 80, 160}, py::arg("reference") = "log_r");

  m.def("oracle_check", [](std::uint64_t seed, std::size_t count) {
    const auto cases = oracle::kernel_sweep(seed, count);
    std::size_t failures = 0;
    double worst = 0.0;
    for (const auto& c : cases) {
      if (!c.pass()) ++failures;
      worst = std::max(worst, c.abs_diff() / std::max(std::abs(c.quadrature), 1e-300));
    }
    py::dict d;
    d["cases"] = cases.size();
    d["failures"] = failures;
    d["worst_relative"] = worst;
    return d;
  }, py::arg("seed") = 1, py::arg("count") = 1000);
}
