// Python bindings.  Matrices cross the boundary as ((a, b), (c, d)) tuples and
// big integers as Python ints.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "galimage/bounds.hpp"
#include "galimage/cohom.hpp"
#include "galimage/ellkummer.hpp"
#include "galimage/errors.hpp"
#include "galimage/matalg.hpp"
#include "galimage/matgrp.hpp"
#include "galimage/scalars.hpp"
#include "galimage/verification.hpp"

namespace py = pybind11;
using namespace galimage;

namespace {

using PyMat = std::array<std::array<std::int64_t, 2>, 2>;

PyMat to_py(const Mat2& m) { return {{{m.a(), m.b()}, {m.c(), m.d()}}}; }
Mat2 from_py(std::uint32_t n, const PyMat& m) { return Mat2(n, m[0][0], m[0][1], m[1][0], m[1][1]); }

py::object to_pyint(const mpz_class& z) { return py::module_::import("builtins").attr("int")(z.get_str()); }

py::dict exponents(const PrimeExponents& f) {
  py::dict d;
  for (auto [p, e] : f) {
    if (e != 0) d[py::int_(p)] = e;
  }
  return d;
}

py::dict report(const CriterionReport& r) {
  py::dict d;
  d["ell"] = r.ell;
  d["level"] = r.level;
  d["applicable"] = r.applicable;
  d["hypotheses"] = r.hypotheses;
  d["conclusions"] = r.conclusions;
  d["witnesses"] = r.witnesses;
  d["min_scalar_valuation"] = r.min_scalar_valuation;
  d["hypotheses_hold"] = r.hypotheses_hold();
  return d;
}

mpq_class parse_q(const py::handle& h) { return mpq_class(py::str(h).cast<std::string>()); }

}  // namespace

PYBIND11_MODULE(_galimage, m) {
  m.doc() = "Finite-level Galois image computations";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_RuntimeError);

  py::class_<FiniteMatrixGroup>(m, "FiniteMatrixGroup")
      .def_static(
          "closure",
          [](std::uint32_t n, const std::vector<PyMat>& gens, std::size_t cap) {
            std::vector<Mat2> g;
            for (const auto& x : gens) g.push_back(from_py(n, x));
            return FiniteMatrixGroup::closure(n, g, cap);
          },
          py::arg("modulus"), py::arg("generators"), py::arg("cap") = kDefaultClosureCap)
      .def_static("from_text", &group_from_text, py::arg("text"), py::arg("cap") = kDefaultClosureCap)
      .def_property_readonly("modulus", &FiniteMatrixGroup::modulus)
      .def_property_readonly("order", &FiniteMatrixGroup::order)
      .def_property_readonly("scalars", &FiniteMatrixGroup::scalar_subgroup)
      .def_property_readonly("determinant_image", &FiniteMatrixGroup::determinant_image)
      .def_property_readonly("generators",
                             [](const FiniteMatrixGroup& g) {
                               std::vector<PyMat> out;
                               for (const Mat2& x : g.generators()) out.push_back(to_py(x));
                               return out;
                             })
      .def("elements",
           [](const FiniteMatrixGroup& g) {
             std::vector<PyMat> out;
             for (const Mat2& x : g.elements()) out.push_back(to_py(x));
             return out;
           })
      .def("contains", [](const FiniteMatrixGroup& g, const PyMat& x) { return g.contains(from_py(g.modulus(), x)); })
      .def("reduce", &FiniteMatrixGroup::reduce)
      .def("to_text", &FiniteMatrixGroup::to_text)
      .def("__len__", &FiniteMatrixGroup::order)
      .def("__repr__", [](const FiniteMatrixGroup& g) {
        return "<FiniteMatrixGroup order=" + std::to_string(g.order()) + " " + g.to_text() + ">";
      });

  m.def("gl2", [](std::uint32_t n) { return gl2(n); });
  m.def("sl2", [](std::uint32_t n) { return sl2(n); });
  m.def("borel", [](std::uint32_t n) { return borel(n); });
  m.def("full_preimage", [](const FiniteMatrixGroup& g, std::uint32_t n) { return full_preimage(g, n); });
  m.def(
      "cartan",
      [](std::uint32_t ell, std::uint32_t delta, bool starred, bool normalizer) {
        CartanSpec s{ell, delta, starred};
        return normalizer ? cartan_normalizer(s) : cartan(s);
      },
      py::arg("ell"), py::arg("delta") = 1, py::arg("starred") = false, py::arg("normalizer") = false);

  m.def("classify", [](const FiniteMatrixGroup& g) {
    auto v = dickson_classify(g);
    py::dict d;
    d["type"] = to_string(v.tag);
    d["projective_order"] = v.projective_order;
    d["witness"] = v.witness_text;
    d["irreducibility"] = to_string(irreducibility_report(g));
    return d;
  });

  m.def(
      "enumerate_subgroups",
      [](const FiniteMatrixGroup& g, std::size_t order_cap, bool up_to_conjugacy,
         std::function<bool(const FiniteMatrixGroup&)> filter) {
        SubgroupEnumerationOptions o;
        o.order_cap = order_cap;
        o.up_to_conjugacy = up_to_conjugacy;
        o.filter = std::move(filter);
        return enumerate_subgroups(g, o);
      },
      py::arg("group"), py::arg("order_cap") = 512, py::arg("up_to_conjugacy") = false,
      py::arg("filter") = std::function<bool(const FiniteMatrixGroup&)>());

  m.def(
      "h1",
      [](const FiniteMatrixGroup& g, std::uint32_t module, std::size_t cap) {
        auto r = h1(g, GModule::natural(module), cap);
        py::dict d;
        d["invariant_factors"] = r.invariant_factors;
        d["exponent"] = r.exponent;
        return d;
      },
      py::arg("group"), py::arg("module"), py::arg("cap") = kDefaultH1Cap);

  m.def("algebra_span", [](const FiniteMatrixGroup& g) {
    auto a = algebra_span(g);
    py::dict d;
    d["ell"] = a.ell;
    d["level"] = a.level;
    d["log_size"] = a.log_size;
    d["min_m"] = a.min_m;
    d["nontrivial_containment"] = a.nontrivial_containment;
    return d;
  });

  m.def("scalar_lifting_criterion", [](const FiniteMatrixGroup& g) { return report(check_scalar_lifting_criterion(g)); });
  m.def("cartan_scalar_criterion", [](const FiniteMatrixGroup& g) { return report(check_cartan_scalar_criterion(g)); });
  m.def("pro_p_scalar_criterion",
        [](const FiniteMatrixGroup& g, int k) { return report(check_pro_p_scalar_criterion(g, k)); });

  m.def(
      "exponent_constant_e",
      [](unsigned threads) {
        auto e = exponent_constant_e(threads);
        py::dict d;
        d["e"] = exponents(e.factorization);
        d["value"] = to_pyint(e.value);
        d["quoted"] = exponents(e.quoted);
        d["matches_quoted"] = e.matches_quoted;
        d["n"] = exponents(e.n);
        d["m"] = exponents(e.m);
        d["a"] = exponents(e.a);
        return d;
      },
      py::arg("threads") = 1);
  m.def("exp_pgl2", &exp_pgl2, py::arg("p"), py::arg("threads") = 1);
  m.def("kummer_bounds", [] {
    py::dict d;
    d["B_nonCM"] = to_pyint(kummer_bound(quoted_exponent_e(), algebra_exponent_table_non_cm()));
    d["B_CM"] = to_pyint(kummer_bound(cm_exponent_e(), algebra_exponent_table_cm()));
    return d;
  });

  m.def(
      "kummer_divisibility",
      [](const std::vector<py::object>& a, const std::vector<py::object>& pt, std::uint32_t ell, int degree_cap,
         std::uint64_t seed) {
        if (a.size() != 5 || pt.size() != 2) throw DomainError("curve needs five coefficients and point two");
        EllipticCurve e(parse_q(a[0]), parse_q(a[1]), parse_q(a[2]), parse_q(a[3]), parse_q(a[4]));
        auto r = kummer_divisibility(e, RationalPoint{parse_q(pt[0]), parse_q(pt[1])}, ell, degree_cap, seed);
        py::dict d;
        d["verdict"] = r.verdict;
        d["factor_degrees"] = r.factor_degrees;
        py::list g;
        for (const auto& c : r.g) g.append(to_pyint(c));
        d["g"] = g;
        return d;
      },
      py::arg("curve"), py::arg("point"), py::arg("ell"), py::arg("degree_cap") = poly::kDefaultDegreeCap,
      py::arg("seed") = poly::kDefaultSeed);

  m.def(
      "run_check",
      [](int id, std::uint64_t seed, unsigned threads) {
        auto r = run_check(id, CheckOptions{seed, threads});
        py::dict d;
        d["id"] = r.id;
        d["name"] = r.name;
        d["pass"] = r.pass;
        d["detail"] = r.detail;
        d["ms"] = r.ms;
        return d;
      },
      py::arg("id"), py::arg("seed") = kDefaultCheckSeed, py::arg("threads") = 1);
}
