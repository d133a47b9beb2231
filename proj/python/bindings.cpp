#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <string>

#include "sketchks/approx_cdf.hpp"
#include "sketchks/errors.hpp"
#include "sketchks/gk_sketch.hpp"
#include "sketchks/ks.hpp"
#include "sketchks/synth.hpp"

namespace py = pybind11;
using namespace sketchks;

namespace {

using Doubles = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Doubles& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional sequence of numbers");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

py::array_t<double> to_array(std::span<const double> v) { return py::array_t<double>(v.size(), v.data()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Approximate two-sample Kolmogorov-Smirnov tests from quantile sketches";

  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<QuantileSketch>(m, "QuantileSketch")
      .def(py::init<double>(), py::arg("epsilon"))
      .def("insert", py::overload_cast<double>(&QuantileSketch::insert), py::arg("value"))
      .def("insert_many", [](QuantileSketch& s, const Doubles& v) { s.insert(view(v)); }, py::arg("values"))
      .def("compress", &QuantileSketch::compress)
      .def("seal", &QuantileSketch::seal)
      .def("query", &QuantileSketch::query_quantile, py::arg("p"))
      .def("query_many",
           [](const QuantileSketch& s, const Doubles& p) {
             const auto q = s.query_quantiles(view(p));
             return to_array(q);
           },
           py::arg("probs"))
      .def("rank_bounds",
           [](const QuantileSketch& s, double v) {
             const RankBounds b = s.rank_bounds(v);
             return py::make_tuple(b.min, b.max);
           },
           py::arg("value"))
      .def("tuples",
           [](const QuantileSketch& s) {
             py::list out;
             for (const auto& t : s.tuples()) out.append(py::make_tuple(t.value, t.g, t.delta));
             return out;
           })
      .def_property_readonly("epsilon", &QuantileSketch::epsilon)
      .def_property_readonly("count", &QuantileSketch::count)
      .def_property_readonly("sealed", &QuantileSketch::sealed)
      .def("__len__", &QuantileSketch::size);

  py::class_<CdfPlan>(m, "CdfPlan")
      .def(py::init([](std::int64_t n, double delta, double epsilon, std::int64_t knots) {
             return CdfPlan{n, delta, epsilon, knots};
           }),
           py::arg("n"), py::arg("delta"), py::arg("epsilon"), py::arg("knots"))
      .def_readwrite("n", &CdfPlan::n)
      .def_readwrite("delta", &CdfPlan::delta)
      .def_readwrite("epsilon", &CdfPlan::epsilon)
      .def_readwrite("knots", &CdfPlan::knots)
      .def("__eq__", [](const CdfPlan& a, const CdfPlan& b) { return a == b; })
      .def("__repr__", [](const CdfPlan& p) {
        return py::str("CdfPlan(n={}, delta={}, epsilon={}, knots={})").format(p.n, p.delta, p.epsilon, p.knots);
      });

  m.def("eps45", &eps45, py::arg("delta"), py::arg("n"));
  m.def("num_probs", &num_probs, py::arg("n"), py::arg("delta"), py::arg("epsilon"));
  m.def("plan_from_phi", &plan_from_phi, py::arg("phi"), py::arg("n"));
  m.def("plan_from_knots", &plan_from_knots, py::arg("n"), py::arg("knots"), py::arg("epsilon"));
  m.def("error_bound", &error_bound, py::arg("plan"));

  py::class_<ApproxCdf>(m, "ApproxCdf")
      .def("__call__", &ApproxCdf::evaluate, py::arg("x"))
      .def("evaluate", &ApproxCdf::evaluate, py::arg("x"))
      .def_property_readonly("plan", &ApproxCdf::plan)
      .def_property_readonly("probs", [](const ApproxCdf& c) { return to_array(c.probs()); })
      .def_property_readonly("quantiles", [](const ApproxCdf& c) { return to_array(c.quantiles()); })
      .def("__len__", &ApproxCdf::size);

  m.def("build_cdf", [](const Doubles& data, const CdfPlan& plan) { return build_cdf(view(data), plan); },
        py::arg("data"), py::arg("plan"));

  py::class_<KsOutcome>(m, "KsOutcome")
      .def_readonly("d", &KsOutcome::d)
      .def_readonly("d_error_bound", &KsOutcome::d_error_bound)
      .def_readonly("p_value", &KsOutcome::p_value)
      .def_readonly("n", &KsOutcome::n)
      .def_readonly("m", &KsOutcome::m)
      .def_readonly("alpha", &KsOutcome::alpha)
      .def_readonly("reject", &KsOutcome::reject)
      .def("to_json", [](const KsOutcome& o) { return to_json(o); });

  m.def("exact_ks_distance", [](const Doubles& x, const Doubles& y) { return exact_ks_distance(view(x), view(y)); },
        py::arg("x"), py::arg("y"));
  m.def("approx_two_sample_ks", &approx_two_sample_ks, py::arg("cdf1"), py::arg("cdf2"));
  m.def("qks", &qks, py::arg("lam"));
  m.def("p_value", &p_value, py::arg("d"), py::arg("n"), py::arg("m"));
  m.def("d_crit", &d_crit, py::arg("alpha"), py::arg("n"), py::arg("m"));
  m.def("phi_for_test", &phi_for_test, py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("m"));
  m.def("lall_ks", &lall_ks, py::arg("sketch1"), py::arg("sketch2"));

  m.def(
      "run_test",
      [](const Doubles& x, const Doubles& y, double alpha, std::optional<double> beta, std::optional<double> phi) {
        if (beta.has_value() == phi.has_value()) throw py::value_error("pass exactly one of beta or phi");
        const auto xs = view(x);
        const auto ys = view(y);
        const TestPrecision precision =
            phi ? TestPrecision::from_phi(alpha, *phi)
                : TestPrecision::from_alpha_beta(alpha, *beta, static_cast<std::int64_t>(xs.size()),
                                                 static_cast<std::int64_t>(ys.size()));
        return run_test(xs, ys, precision);
      },
      py::arg("x"), py::arg("y"), py::arg("alpha") = 0.05, py::kw_only(), py::arg("beta") = py::none(),
      py::arg("phi") = py::none());

  m.def(
      "sample",
      [](const std::string& distribution, std::size_t n, std::uint64_t seed) {
        const auto v = sample(parse_distribution(distribution), n, seed);
        return to_array(v);
      },
      py::arg("distribution"), py::arg("n"), py::arg("seed"));
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
}
