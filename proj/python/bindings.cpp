#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kp/constraints.hpp"
#include "kp/correlators.hpp"
#include "kp/eigencalc.hpp"
#include "kp/largen.hpp"
#include "kp/oracles.hpp"
#include "kp/verify.hpp"

namespace py = pybind11;
using namespace kp;

namespace {

std::vector<std::string> pq(const KPoly& p) {
    std::vector<std::string> v;
    for (auto& c : p.coeffs()) v.push_back(to_string(c));
    return v;
}

}  // namespace

PYBIND11_MODULE(_kp, m) {
    m.doc() = "exact free energies, correlators and numeric oracles";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NoRootError>(m, "NoRootError", PyExc_ArithmeticError);
    py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);

    m.def(
        "free_energy_json",
        [](const std::string& max_weight, int size) {
            py::gil_scoped_release nogil;
            return table_convention(free_energy(parse_half(max_weight), size)).to_json();
        },
        py::arg("max_weight"), py::arg("size") = 5, "F in the printed table's k convention, series JSON");
    m.def("gaussian_moment", [](int j) { return pq(gaussian_moment(j)); });
    m.def("wick_multitrace", [](std::vector<int> w) { return pq(wick_multitrace({w})); });
    m.def("replica_sinh", [](std::vector<int> w) { return to_string(replica_sinh({w})); });
    m.def("onepoint", [](int order) {
        std::vector<std::vector<std::string>> out;
        for (auto& c : kp_onepoint(order)) out.push_back(pq(c));
        return out;
    });
    m.def("twopoint", [](int order) {
        std::map<std::pair<int, int>, std::vector<std::string>> out;
        for (auto& [k, c] : kp_twopoint(order)) out[k] = pq(c);
        return out;
    });
    m.def("commutator_check", &commutator_check, py::arg("n"), py::arg("m"), py::arg("w2"));
    m.def("c_series_json", [](int w2) { return c_series(w2).to_json(); });
    m.def(
        "numeric_c",
        [](std::vector<double> lambdas, double k_ratio) {
            SaddleState st = numeric_c({std::move(lambdas), k_ratio});
            return py::dict(py::arg("c") = st.c, py::arg("endpoint_margin") = st.endpoint_margin,
                            py::arg("residual") = st.residual);
        },
        py::arg("lambdas"), py::arg("k_ratio") = 0.0);
    m.def(
        "cubic_residual",
        [](double x, std::vector<double> lambdas, double k_ratio) {
            SpectrumSample s{std::move(lambdas), k_ratio};
            return cubic_residual(x, s, numeric_c(s));
        },
        py::arg("x"), py::arg("lambdas"), py::arg("k_ratio") = 0.0);
    m.def("gamma", [](int p, int P, int c) { return gamma(p, P, c).str(); }, py::arg("p"), py::arg("P"),
          py::arg("c") = 0);
    m.def("airy_log_ratio", [](double l, int k) { return airy_log_ratio(l, k); });
    m.def("p1_log_series", [](int order) {
        std::vector<std::vector<std::string>> out;
        for (auto& c : p1_log_series(order)) out.push_back(pq(c));
        return out;
    });
    m.def(
        "run_suite",
        [](unsigned seed, bool strict) {
            SuiteOptions o;
            o.seed = seed;
            o.strict = strict;
            std::vector<CheckResult> r;
            {
                py::gil_scoped_release nogil;
                r = run_suite(o);
            }
            py::list out;
            for (auto& c : r)
                out.append(py::dict(py::arg("name") = c.name, py::arg("criterion") = c.criterion,
                                    py::arg("passed") = c.pass, py::arg("measured") = c.measured,
                                    py::arg("tolerance") = c.tolerance));
            return out;
        },
        py::arg("seed") = 7, py::arg("strict") = false);
}
