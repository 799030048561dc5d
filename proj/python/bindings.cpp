#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latbump/norms.hpp"
#include "latbump/operators.hpp"
#include "latbump/scalinglab.hpp"
#include "latbump/symbols.hpp"
#include "latbump/transference.hpp"

namespace py = pybind11;
using namespace latbump;

namespace {

// Accepts an int (n = 1) or a tuple of up to two ints.
IntVec to_intvec(const py::handle& h) {
  IntVec v{0, 0};
  if (py::isinstance<py::int_>(h)) {
    v[0] = h.cast<int>();
    return v;
  }
  const auto t = h.cast<std::vector<int>>();
  if (t.empty() || t.size() > 2) throw std::invalid_argument("lattice points have 1 or 2 components");
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i];
  return v;
}

py::tuple from_intvec(const IntVec& v, int n) {
  if (n == 1) return py::make_tuple(v[0]);
  return py::make_tuple(v[0], v[1]);
}

LatticeCoefficients coeffs_from_dict(int n, const py::dict& d) {
  LatticeCoefficients a;
  a.n = n;
  for (const auto& [k, v] : d) {
    const auto pair = k.cast<py::tuple>();
    if (pair.size() != 2) throw std::invalid_argument("keys are (mu1, mu2)");
    a.entries[{to_intvec(pair[0]), to_intvec(pair[1])}] = v.cast<cplx>();
  }
  return a;
}

py::dict coeffs_to_dict(const LatticeCoefficients& a) {
  py::dict d;
  for (const auto& [mu, v] : a.entries) d[py::make_tuple(from_intvec(mu.first, a.n), from_intvec(mu.second, a.n))] = v;
  return d;
}

Sequence seq_from_dict(int n, const py::dict& d) {
  Sequence s;
  s.n = n;
  for (const auto& [k, v] : d) s.entries[to_intvec(k)] = v.cast<cplx>();
  return s;
}

py::dict seq_to_dict(const Sequence& s) {
  py::dict d;
  for (const auto& [mu, v] : s.entries) d[from_intvec(mu, s.n)] = v;
  return d;
}

py::array_t<cplx> samples_array(const GridFunction& f) {
  const auto N = static_cast<py::ssize_t>(f.spec.points());
  std::vector<py::ssize_t> shape(f.spec.dim(), N);
  py::array_t<cplx> out(shape);
  std::copy(f.samples.begin(), f.samples.end(), out.mutable_data());
  return out;
}

GridFunction from_array(const GridSpec& g, Side side, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a) {
  if (static_cast<std::size_t>(a.size()) != g.size()) throw std::invalid_argument("sample count does not match the grid");
  auto f = GridFunction::zeros(g, side);
  std::copy(a.data(), a.data() + a.size(), f.samples.begin());
  return f;
}

py::dict fit_dict(const LineFit& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r2"] = f.r2;
  d["r2_floored"] = f.r2_floored;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "lattice bump bilinear multipliers";
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);

  py::enum_<Side>(m, "Side").value("space", Side::space).value("frequency", Side::frequency);
  py::enum_<SpaceKind>(m, "SpaceKind").value("amalgam", SpaceKind::amalgam).value("wiener", SpaceKind::wiener);
  py::enum_<BumpKind>(m, "BumpKind")
      .value("radial_exp", BumpKind::radial_exp)
      .value("tensor_exp", BumpKind::tensor_exp)
      .value("plateau", BumpKind::plateau);

  py::class_<GridSpec>(m, "GridSpec")
      .def_property_readonly("n", &GridSpec::dim)
      .def_property_readonly("L", &GridSpec::box)
      .def_property_readonly("s", &GridSpec::rate)
      .def_property_readonly("points", &GridSpec::points)
      .def_property_readonly("step", &GridSpec::step)
      .def_property_readonly("freq_step", &GridSpec::freq_step)
      .def("space_coords", [](const GridSpec& g) {
        std::vector<double> x(g.points());
        for (int i = 0; i < g.points(); ++i) x[i] = g.space_coord(i);
        return x;
      })
      .def("freq_coords", [](const GridSpec& g) {
        std::vector<double> x(g.points());
        for (int i = 0; i < g.points(); ++i) x[i] = g.freq_coord(i);
        return x;
      })
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(n=" + std::to_string(g.dim()) + ", L=" + std::to_string(g.box()) + ", s=" +
               std::to_string(g.rate()) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("n"), py::arg("L"), py::arg("s"));

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init(&from_array), py::arg("spec"), py::arg("side"), py::arg("samples"))
      .def_readonly("spec", &GridFunction::spec)
      .def_readonly("side", &GridFunction::side)
      .def_property_readonly("samples", &samples_array)
      .def("max_abs", &GridFunction::max_abs);
  m.def("dft", &dft);
  m.def("idft", &idft);

  py::class_<BumpProfile>(m, "BumpProfile")
      .def_readonly("kind", &BumpProfile::kind)
      .def_readonly("center", &BumpProfile::center)
      .def_readonly("radius", &BumpProfile::radius)
      .def_readonly("amplitude", &BumpProfile::amplitude)
      .def_property_readonly("dim", &BumpProfile::dim)
      .def("__call__", [](const BumpProfile& b, const std::vector<double>& x) { return bump_eval(b, x); });
  m.def("make_bump", &make_bump, py::arg("kind"), py::arg("center"), py::arg("radius"), py::arg("amplitude") = cplx(1.0));
  m.def("make_plateau", &make_plateau, py::arg("d"), py::arg("inner"), py::arg("outer"));

  py::class_<ConditionBResult>(m, "ConditionBResult")
      .def_readonly("holds", &ConditionBResult::holds)
      .def_readonly("witness", &ConditionBResult::witness)
      .def_readonly("slack", &ConditionBResult::slack)
      .def_readonly("certificate", &ConditionBResult::certificate);
  m.def("check_condition_B", &check_condition_B);

  py::class_<Window>(m, "Window");
  m.def("make_window", &make_window, py::arg("d"), py::arg("outer") = 0.6);

  py::class_<ExponentTuple>(m, "ExponentTuple")
      .def(py::init([](double p1, double p2, double p, double q1, double q2, double q) {
             return ExponentTuple{check_exponent(p1, "p1"), check_exponent(p2, "p2"), check_exponent(p, "p"),
                                  check_exponent(q1, "q1"), check_exponent(q2, "q2"), check_exponent(q, "q")};
           }),
           py::arg("p1") = 2.0, py::arg("p2") = 2.0, py::arg("p") = 2.0, py::arg("q1") = 2.0, py::arg("q2") = 2.0,
           py::arg("q") = 2.0)
      .def_readwrite("p1", &ExponentTuple::p1)
      .def_readwrite("p2", &ExponentTuple::p2)
      .def_readwrite("p", &ExponentTuple::p)
      .def_readwrite("q1", &ExponentTuple::q1)
      .def_readwrite("q2", &ExponentTuple::q2)
      .def_readwrite("q", &ExponentTuple::q);
  m.def("exponent_hypothesis_holds", &exponent_hypothesis_holds);
  m.def("require_exponent_hypothesis", &require_exponent_hypothesis);

  // Coefficients and sequences travel as dicts keyed by lattice points.
  m.def("apply_S", [](int n, const py::dict& a, const py::dict& b1, const py::dict& b2) {
    return seq_to_dict(apply_S(coeffs_from_dict(n, a), seq_from_dict(n, b1), seq_from_dict(n, b2)));
  });
  m.def("random_coefficients", [](int n, int support, int radius, std::uint64_t seed) {
    return coeffs_to_dict(random_coefficients(n, support, radius, seed));
  });

  m.def("lp_norm", py::overload_cast<const GridFunction&, double>(&lp_norm));
  m.def("amalgam_norm", &amalgam_norm);
  m.def("lq_seq_norm", [](const std::vector<double>& v, double q) { return lq_seq_norm(v, q); });
  m.def("mixed_norm_check", &mixed_norm_check);
  m.def("fit_line", [](const std::vector<double>& x, const std::vector<double>& y) { return fit_dict(fit_line(x, y)); });

  m.def("synth_sigma", [](int n, const py::dict& a, const BumpProfile& phi, const GridSpec& g) {
    const auto s = synth_sigma(coeffs_from_dict(n, a), phi, g);
    const auto N = static_cast<py::ssize_t>(g.size());
    py::array_t<cplx> out({N, N});
    std::copy(s.samples.begin(), s.samples.end(), out.mutable_data());
    return out;
  });
  m.def("apply_T_sigma", [](int n, const py::dict& a, const BumpProfile& phi, const GridFunction& f1, const GridFunction& f2) {
    return apply_T_sigma(synth_sigma(coeffs_from_dict(n, a), phi, f1.spec), f1, f2);
  });

  m.def(
      "verify_amalgam_factorization",
      [](int n, const py::dict& a, const BumpProfile& phi, const GridSpec& g, const py::dict& F1, const py::dict& F2) {
        const auto w = build_amalgam_witness(TrigPolynomial::from_sequence(seq_from_dict(n, F1)),
                                             TrigPolynomial::from_sequence(seq_from_dict(n, F2)), default_theta_pair(phi, g));
        const auto r = verify_amalgam_factorization(coeffs_from_dict(n, a), phi, w);
        py::dict d;
        d["residual"] = r.residual;
        d["dominance_ok"] = r.dominance_ok;
        return d;
      },
      py::arg("n"), py::arg("a"), py::arg("phi"), py::arg("grid"), py::arg("F1"), py::arg("F2"));

  m.def(
      "transference_report",
      [](int n, const std::vector<py::dict>& family, const BumpProfile& phi, const ExponentTuple& e, SpaceKind space,
         const GridSpec& g, int starts, int steps) {
        std::vector<LatticeCoefficients> fam;
        for (const auto& d : family) fam.push_back(coeffs_from_dict(n, d));
        SearchParams params;
        params.starts = starts;
        params.steps = steps;
        const auto rep = transference_report(fam, phi, e, space, make_continuum_setup(phi, g), params);
        py::dict d;
        std::vector<double> ratios;
        for (const auto& row : rep.rows) ratios.push_back(row.ratio);
        d["ratios"] = ratios;
        d["spread"] = rep.spread;
        d["finite"] = rep.ratios_finite;
        d["stable"] = rep.stable;
        return d;
      },
      py::arg("n"), py::arg("family"), py::arg("phi"), py::arg("exponents"), py::arg("space"), py::arg("grid"),
      py::arg("starts") = 32, py::arg("steps") = 200);

  m.def(
      "scaling_slopes",
      [](int n, double p, double q, SpaceKind space, const std::vector<double>& epsilons) {
        const auto fam = make_scaling_family(n, std::vector<double>(n, 1.0), epsilons, ScalingPolicy::for_dimension(n));
        const auto fit = space == SpaceKind::amalgam ? amalgam_scaling_slope(fam, p, q)
                                                     : wiener_scaling_slope(fam, p, q, make_window(n, 0.6));
        auto d = fit_dict(fit.fit);
        d["expected"] = fit.expected;
        d["norms"] = fit.norms;
        d["eps"] = fit.eps;
        return d;
      },
      py::arg("n"), py::arg("p"), py::arg("q"), py::arg("space") = SpaceKind::amalgam,
      py::arg("epsilons") = std::vector<double>{0.5, 0.25, 0.125});

  m.def(
      "run_necessity",
      [](int n, const ExponentTuple& e, SpaceKind space) {
        const auto ex = run_necessity(n, e, space);
        py::dict d;
        d["violated"] = ex.verdict.violated;
        d["gap"] = ex.verdict.gap;
        d["in1"] = ex.verdict.in1;
        d["in2"] = ex.verdict.in2;
        d["out"] = ex.verdict.out;
        d["text"] = ex.verdict.text;
        d["hypothesis_holds"] = ex.hypothesis_holds;
        return d;
      },
      py::arg("n"), py::arg("exponents"), py::arg("space"));
}
