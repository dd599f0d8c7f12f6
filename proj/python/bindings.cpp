// Python bindings for the netrisk core.

#include "netrisk/benson.hpp"
#include "netrisk/clearing.hpp"
#include "netrisk/errors.hpp"
#include "netrisk/io.hpp"
#include "netrisk/scalarize.hpp"
#include "netrisk/scenarios.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace netrisk;

namespace {

GeneratorConfig generator_from(const std::string& json_text) {
  return io::generator_from_json(io::json::parse(json_text));
}

py::dict scalarization_dict(const ScalarizationProblem& prob, const ScalarizationResult& r) {
  py::dict d;
  d["status"] = std::string(milp::to_string(r.status));
  d["value"] = r.value;
  d["z"] = r.z;
  d["mu"] = r.mu;
  d["p"] = r.p;
  d["nodes"] = r.nodes;
  d["big_m"] = prob.bounds.big_m;
  d["lower"] = prob.bounds.lower;
  d["upper"] = prob.bounds.upper;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Clearing vectors and systemic risk sets of interbank networks";

  static py::exception<Error> error_type(m, "NetriskError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Variant>(m, "Variant")
      .def_static("signed_en", &Variant::signed_en)
      .def_static("rogers_veraart", &Variant::rogers_veraart, py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("is_rv", &Variant::is_rv)
      .def_readonly("alpha", &Variant::alpha)
      .def_readonly("beta", &Variant::beta)
      .def("__repr__", [](const Variant& v) {
        return v.is_rv() ? "Variant.rogers_veraart(" + std::to_string(v.alpha) + ", " + std::to_string(v.beta) + ")"
                         : std::string("Variant.signed_en()");
      });

  py::class_<FinancialNetwork>(m, "FinancialNetwork")
      .def_static("from_liabilities", &FinancialNetwork::from_liabilities, py::arg("liabilities"),
                  py::arg("variant") = Variant::signed_en())
      .def_static("create", &FinancialNetwork::create, py::arg("pi"), py::arg("pbar"),
                  py::arg("variant") = Variant::signed_en())
      .def_static("from_json", [](const std::string& s) { return io::network_from_json(io::json::parse(s)); })
      .def("to_json", [](const FinancialNetwork& n) { return io::network_to_json(n).dump(); })
      .def_property_readonly("size", &FinancialNetwork::size)
      .def_property_readonly("pi", &FinancialNetwork::pi)
      .def_property_readonly("pbar", &FinancialNetwork::pbar)
      .def_property_readonly("variant", &FinancialNetwork::variant)
      .def("liabilities", &FinancialNetwork::liabilities)
      .def("total_obligations", &FinancialNetwork::total_obligations)
      .def("with_variant", &FinancialNetwork::with_variant);

  py::class_<ClearingResult>(m, "ClearingResult")
      .def_readonly("p", &ClearingResult::p)
      .def_readonly("s", &ClearingResult::s)
      .def_readonly("aggregate", &ClearingResult::aggregate)
      .def_readonly("residual", &ClearingResult::residual);

  m.def("phi", &phi, py::arg("net"), py::arg("x"), py::arg("p"));
  m.def(
      "picard_clearing",
      [](const FinancialNetwork& net, const Vector& x, double tol, long max_iter) {
        return picard_clearing(net, x, PicardOptions{tol, max_iter});
      },
      py::arg("net"), py::arg("x"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10'000);
  m.def(
      "clear", [](const FinancialNetwork& net, const Vector& x) { return clear(net, x); }, py::arg("net"),
      py::arg("x"));
  m.def(
      "aggregate", [](const FinancialNetwork& net, const Vector& x) { return aggregate(net, x); }, py::arg("net"),
      py::arg("x"));
  m.def(
      "verify_clearing",
      [](const FinancialNetwork& net, const Vector& x, const Vector& p, double tol) {
        return verify_clearing(net, x, p, tol).all_pass();
      },
      py::arg("net"), py::arg("x"), py::arg("p"), py::arg("tol") = 1e-9);

  py::class_<Grouping>(m, "Grouping")
      .def_static("from_sizes", &Grouping::from_sizes)
      .def_static("from_assignment", &Grouping::from_assignment, py::arg("assignment"), py::arg("groups") = -1)
      .def_property_readonly("groups", &Grouping::groups)
      .def_property_readonly("assignment", &Grouping::assignment)
      .def("sizes", &Grouping::sizes);

  py::class_<ScenarioSet>(m, "ScenarioSet")
      .def_static("create", &ScenarioSet::create, py::arg("x"), py::arg("q"))
      .def_static("uniform", &ScenarioSet::uniform, py::arg("x"))
      .def_property_readonly("x", &ScenarioSet::x)
      .def_property_readonly("q", &ScenarioSet::q)
      .def("__len__", &ScenarioSet::size);

  py::class_<RiskSpec>(m, "RiskSpec")
      .def(py::init([](double gamma_p, double epsilon, std::optional<Vector> z_ub) {
             RiskSpec s{gamma_p, epsilon, std::move(z_ub)};
             s.validate();
             return s;
           }),
           py::arg("gamma_p"), py::arg("epsilon") = 0.5, py::arg("z_ub") = std::nullopt)
      .def_readonly("gamma_p", &RiskSpec::gamma_p)
      .def_readonly("epsilon", &RiskSpec::epsilon)
      .def_readonly("z_ub", &RiskSpec::z_ub);

  m.def(
      "generate_network", [](const std::string& cfg) { return generate_network(generator_from(cfg)); },
      py::arg("config_json"));
  m.def(
      "generate_scenarios", [](const std::string& cfg, int k) { return generate_scenarios(generator_from(cfg), k); },
      py::arg("config_json"), py::arg("k"));
  m.def(
      "expected_aggregate",
      [](const FinancialNetwork& net, const ScenarioSet& s, const Grouping& g, const Vector& z) {
        return expected_aggregate(net, s, g, z);
      },
      py::arg("net"), py::arg("scenarios"), py::arg("grouping"), py::arg("z"));
  m.def(
      "member",
      [](const FinancialNetwork& net, const ScenarioSet& s, const Grouping& g, double gamma, const Vector& z) {
        return member(net, s, g, gamma, z);
      },
      py::arg("net"), py::arg("scenarios"), py::arg("grouping"), py::arg("gamma"), py::arg("z"));

  m.def(
      "weighted_sum",
      [](const FinancialNetwork& net, const ScenarioSet& s, const Grouping& g, double gamma, int group) {
        const auto prob = build_z1(net, s, g, gamma, group);
        return scalarization_dict(prob, solve_scalarization(prob));
      },
      py::arg("net"), py::arg("scenarios"), py::arg("grouping"), py::arg("gamma"), py::arg("group"));
  m.def(
      "min_step",
      [](const FinancialNetwork& net, const ScenarioSet& s, const Grouping& g, double gamma, const Vector& anchor) {
        const auto prob = build_z2(net, s, g, gamma, anchor);
        return scalarization_dict(prob, solve_scalarization(prob));
      },
      py::arg("net"), py::arg("scenarios"), py::arg("grouping"), py::arg("gamma"), py::arg("anchor"));

  py::class_<ApproximationPair>(m, "ApproximationPair")
      .def_readonly("inner_points", &ApproximationPair::inner_points)
      .def_property_readonly("outer_corners", [](const ApproximationPair& a) { return a.outer.corners; })
      .def_readonly("epsilon", &ApproximationPair::epsilon)
      .def_readonly("z_ub", &ApproximationPair::z_ub)
      .def_readonly("z_ideal", &ApproximationPair::z_ideal)
      .def_readonly("gamma", &ApproximationPair::gamma)
      .def_readonly("iterations", &ApproximationPair::iterations)
      .def_readonly("z2_count", &ApproximationPair::z2_count)
      .def_readonly("certified", &ApproximationPair::certified)
      .def("corners_csv", [](const ApproximationPair& a) { return io::corners_csv(a); })
      .def("contains_interior", &inner_contains_interior);

  m.def(
      "approximate",
      [](const FinancialNetwork& net, const ScenarioSet& s, const Grouping& g, const RiskSpec& spec, bool batch) {
        ApproximateOptions opts;
        opts.batch = batch;
        py::gil_scoped_release release;
        return approximate(net, s, g, spec, opts);
      },
      py::arg("net"), py::arg("scenarios"), py::arg("grouping"), py::arg("spec"), py::arg("batch") = false);
}
