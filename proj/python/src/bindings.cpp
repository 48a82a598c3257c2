#include "hleray/constants.hpp"
#include "hleray/error.hpp"
#include "hleray/fields.hpp"
#include "hleray/io.hpp"
#include "hleray/pt.hpp"
#include "hleray/quotient.hpp"
#include "hleray/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

namespace py = pybind11;
using namespace hleray;

namespace {

// JSON text for the Python side to parse; keeps one serializer.
std::string report_json(const ConstantReport& r) {
  nlohmann::ordered_json j;
  j["N"] = r.N;
  j["gamma"] = r.gamma;
  j["classical"] = r.classical;
  j["c_pol"] = r.c_pol;
  j["c_tor"] = r.c_tor;
  j["c_axis"] = r.c_axis;
  j["c_solenoidal"] = r.c_solenoidal;
  j["cm_orig"] = r.cm_orig;
  j["in_interval"] = r.in_interval;
  j["interval"] = {r.interval.lower, r.interval.upper};
  j["tau_star"] = r.tau_star;
  j["correction_c"] = r.correction_c;
  j["g_zero"] = r.g_zero;
  j["quartic_b"] = r.quartic_b;
  return dump_json(j, -1);
}

RadialGrid grid(double t_min, double t_max, int M) {
  RadialGrid g{t_min, t_max, M};
  g.validate();
  return g;
}

py::dict checks_dict(const FieldChecks& c) {
  py::dict d;
  d["divergence"] = c.divergence;
  d["radial_component"] = c.radial_component;
  d["spherical_divergence"] = c.spherical_divergence;
  d["solenoidal"] = c.solenoidal;
  d["toroidal"] = c.toroidal;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sharp Hardy-Leray constants, poloidal-toroidal splitting and quotient checks.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<SupportError>(m, "SupportError", base.ptr());
  py::register_exception<FieldError>(m, "FieldError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());

  // constants
  m.def("c_solenoidal", [](int N, double gamma) { return c_solenoidal(Params{N, gamma}); }, py::arg("N"),
        py::arg("gamma"));
  m.def("cm_orig", [](int N, double gamma) { return cm_orig(Params{N, gamma}); }, py::arg("N"), py::arg("gamma"));
  m.def("c_pol", [](int N, double gamma) { return c_pol(Params{N, gamma}); }, py::arg("N"), py::arg("gamma"));
  m.def("c_tor", [](int N, double gamma) { return c_tor(Params{N, gamma}); }, py::arg("N"), py::arg("gamma"));
  m.def("interval", [](int N) {
    const GammaInterval I = gamma_interval(N);
    return py::make_tuple(I.lower, I.upper);
  }, py::arg("N"), "Endpoints of I_N; for N = 2 the interval wraps through infinity.");
  m.def("constant_report_json", [](int N, double gamma) {
    const Params p{N, gamma};
    p.validate(2);
    return report_json(constant_report(p));
  }, py::arg("N"), py::arg("gamma"));

  // verification
  m.def("verify_json", [](std::vector<std::string> suites, std::vector<int> Ns, std::vector<double> gammas,
                          int fields, std::uint64_t seed, double perturb) {
    VerifyConfig cfg;
    if (!Ns.empty()) {
      cfg.identity_Ns = Ns;
      cfg.field_Ns.clear();
      for (int N : Ns) {
        if (N >= 3) cfg.field_Ns.push_back(N);
      }
      if (cfg.field_Ns.empty()) cfg.field_Ns = {3};
    }
    if (!gammas.empty()) cfg.field_gammas = gammas;
    cfg.random_fields = fields;
    cfg.seed = seed;
    cfg.perturb = perturb;
    cfg.validate();
    py::gil_scoped_release release;
    return dump_json(to_json(run_verify(cfg, suites)), -1);
  }, py::arg("suites") = std::vector<std::string>{}, py::arg("Ns") = std::vector<int>{},
        py::arg("gammas") = std::vector<double>{}, py::arg("fields") = 20, py::arg("seed") = 1,
        py::arg("perturb") = 0.0);

  // fields
  py::class_<AmbientField>(m, "Field")
      .def_property_readonly("N", &AmbientField::N)
      .def_property_readonly("M", [](const AmbientField& u) { return u.disc->radial.M; })
      .def_property_readonly("basis_degree", [](const AmbientField& u) { return u.disc->basis_degree(); })
      .def("component", &AmbientField::component_samples, py::arg("k"), "Stored samples of component k, M x nodes.")
      .def("checks", [](const AmbientField& u) { return checks_dict(u.checks()); })
      .def("hardy", [](const AmbientField& u, double gamma) { return hardy_integral(u, gamma); }, py::arg("gamma"))
      .def("dirichlet", [](const AmbientField& u, double gamma) { return weighted_integrals(u, gamma).dirichlet; },
           py::arg("gamma"))
      .def("quotient", [](const AmbientField& u, double gamma) { return weighted_integrals(u, gamma).quotient(); },
           py::arg("gamma"))
      .def("save", [](const AmbientField& u, const std::string& path) {
        std::ofstream out(path);
        if (!out) throw FormatError("cannot write " + path);
        write_field(out, u);
      }, py::arg("path"))
      .def("__add__", [](const AmbientField& a, const AmbientField& b) { return a + b; })
      .def("__sub__", [](const AmbientField& a, const AmbientField& b) { return a - b; })
      .def("__rmul__", [](const AmbientField& a, double s) { return s * a; });

  m.def("load_field", [](const std::string& path, double tolerance) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open field file " + path);
    return read_field(in, tolerance).field;
  }, py::arg("path"), py::arg("tolerance") = 1e-8);

  m.def("random_solenoidal", [](int N, std::uint64_t seed, int L, int basis_degree, double t_min, double t_max,
                                int M, bool poloidal, bool toroidal) {
    const DiscPtr disc = make_discretization(N, grid(t_min, t_max, M), basis_degree);
    RandomFieldOptions opts;
    opts.poloidal = poloidal;
    opts.toroidal = toroidal;
    return random_solenoidal(disc, seed, L, opts);
  }, py::arg("N"), py::arg("seed") = 1, py::arg("L") = 4, py::arg("basis_degree") = 5, py::arg("t_min") = -8.0,
        py::arg("t_max") = 8.0, py::arg("M") = 1024, py::arg("poloidal") = true, py::arg("toroidal") = true);

  m.def("toroidal_generator", [](int N, int i, int j, double center, double half_width, int basis_degree,
                                 double t_min, double t_max, int M) {
    const RadialGrid g = grid(t_min, t_max, M);
    return toroidal_generator(make_discretization(N, g, basis_degree), i, j, bump_profile(g, center, half_width));
  }, py::arg("N"), py::arg("i") = 1, py::arg("j") = 2, py::arg("center") = 0.0, py::arg("half_width") = 3.0,
        py::arg("basis_degree") = 3, py::arg("t_min") = -8.0, py::arg("t_max") = 8.0, py::arg("M") = 1024);

  m.def("pt_split", [](const AmbientField& u, double tolerance) {
    PTSplit s = pt_split(u, tolerance);
    return py::make_tuple(std::move(s.u_P), std::move(s.u_T));
  }, py::arg("u"), py::arg("tolerance") = kSolenoidalTolerance, "Returns (u_P, u_T).");

  // quotients
  m.def("mode_quotient", [](int nu, int N, double gamma, double center, double half_width, int M) {
    const RadialGrid g = grid(-8.0, 8.0, M);
    const QuotientReport r = mode_quotient(nu, bump_profile(g, center, half_width), Params{N, gamma});
    py::dict d;
    d["spectral_value"] = r.spectral_value;
    d["direct_value"] = r.direct_value;
    d["bound"] = r.bound;
    d["gap"] = r.gap;
    return d;
  }, py::arg("nu"), py::arg("N"), py::arg("gamma"), py::arg("center") = 0.0, py::arg("half_width") = 3.0,
        py::arg("M") = 1024);

  m.def("extremal", [](const std::string& kind, std::vector<int> ns, int N, double gamma) {
    const ExtremalSequence s = extremal_sequence(kind, ns, Params{N, gamma});
    py::dict d;
    d["limit"] = s.limit;
    d["slope"] = s.slope;
    d["extrapolated_limit"] = s.extrapolated_limit;
    py::list entries;
    for (const ExtremalEntry& e : s.entries) {
      py::dict x;
      x["n"] = e.n;
      x["quotient"] = e.quotient;
      x["spectral"] = e.spectral;
      x["gap"] = e.gap;
      x["gap_n2"] = e.gap_n2;
      entries.append(x);
    }
    d["entries"] = entries;
    return d;
  }, py::arg("kind"), py::arg("ns"), py::arg("N"), py::arg("gamma"));

  m.def("bump_energy_ratio", &bump_energy_ratio);
}
