#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvop/cone_oracle.hpp"
#include "curvop/spectral.hpp"
#include "curvop/verify.hpp"

namespace py = pybind11;
using namespace curvop;
using Complex = std::complex<double>;

namespace {

ParamMap to_params(const std::map<std::string, double>& d) { return d; }

py::list mat2(const Eigen::Matrix2d& m) {
    py::list rows;
    for (int i = 0; i < 2; ++i) {
        py::list row;
        for (int j = 0; j < 2; ++j) row.append(m(i, j));
        rows.append(row);
    }
    return rows;
}

py::list mat2c(const SpinMatrix& m) {
    py::list rows;
    for (int i = 0; i < 2; ++i) {
        py::list row;
        for (int j = 0; j < 2; ++j) row.append(Complex(m(i, j)));
        rows.append(row);
    }
    return rows;
}

py::list mat3(const Eigen::Matrix3d& m) {
    py::list rows;
    for (int i = 0; i < 3; ++i) {
        py::list row;
        for (int j = 0; j < 3; ++j) row.append(m(i, j));
        rows.append(row);
    }
    return rows;
}

py::list vec3(const Eigen::Vector3d& v) {
    py::list out;
    for (int i = 0; i < 3; ++i) out.append(v[i]);
    return out;
}

struct PySurface {
    SurfaceDef def;
};

struct PyOperator {
    DiffOp op;
    SurfaceDef def;
    ParamMap params;

    py::dict terms_at(double u, double v) const {
        GeoBundle b = compute_bundle(def, u, v, params);
        py::dict out;
        for (const auto& [idx, tv] : op.evaluate(b)) {
            py::tuple key = py::make_tuple(idx.first, idx.second);
            switch (op.kind) {
                case ValueKind::Scalar: out[key] = Complex(tv.scalar); break;
                case ValueKind::Vector3: {
                    py::list v3;
                    for (int i = 0; i < 3; ++i) v3.append(Complex(tv.vec[i]));
                    out[key] = v3;
                    break;
                }
                case ValueKind::Spin: out[key] = mat2c(tv.spin); break;
            }
        }
        return out;
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "thin-layer quantization geometry and effective operators on curved surfaces";

    m.def("builtin_surfaces", &builtin_names);

    py::class_<PySurface>(m, "Surface")
        .def_static("builtin", [](const std::string& name) { return PySurface{builtin_catalog(name)}; })
        .def_static("parse", [](const std::string& text) { return PySurface{parse_surface(text)}; })
        .def_property_readonly("name", [](const PySurface& s) { return s.def.name; })
        .def_property_readonly("params",
                               [](const PySurface& s) {
                                   py::dict d;
                                   for (const auto& kv : s.def.params)
                                       d[py::str(kv.first)] = kv.second;
                                   return d;
                               })
        .def_property_readonly("periodic_u", [](const PySurface& s) { return s.def.periodic_u; })
        .def("source", [](const PySurface& s) { return print_surface(s.def); })
        .def(
            "domain",
            [](const PySurface& s, const std::map<std::string, double>& params) {
                auto d = s.def.resolve_domain(s.def.resolve_params(to_params(params)));
                return py::make_tuple(d.u_lo, d.u_hi, d.v_lo, d.v_hi);
            },
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "position",
            [](const PySurface& s, double u, double v, const std::map<std::string, double>& params) {
                auto r = eval_embedding<double>(s.def, u, v, s.def.resolve_params(to_params(params)));
                return py::make_tuple(r[0], r[1], r[2]);
            },
            py::arg("u"), py::arg("v"), py::arg("params") = std::map<std::string, double>{})
        .def(
            "geometry",
            [](const PySurface& s, double u, double v, const std::map<std::string, double>& params,
               double hbar, double mass) {
                GeometryPoint p = frame_at(s.def, u, v, to_params(params));
                py::dict d;
                d["M"] = p.M;
                d["K"] = p.K;
                d["Vg"] = geometric_potential(p, hbar, mass);
                d["g"] = mat2(p.g);
                d["g_inv"] = mat2(p.g_inv);
                d["g1_inv"] = mat2(p.g1_inv);
                d["h"] = mat2(p.h);
                d["weingarten"] = mat2(p.alpha);
                d["r"] = vec3(p.r);
                d["e1"] = vec3(p.e1);
                d["e2"] = vec3(p.e2);
                d["en"] = vec3(p.en);
                py::list fj;
                for (int k = 0; k <= 3; ++k) fj.append(p.f_jet.coeff({0, 0, k}));
                d["f_jet"] = fj;
                return d;
            },
            py::arg("u"), py::arg("v"), py::arg("params") = std::map<std::string, double>{},
            py::arg("hbar") = 1.0, py::arg("mass") = 0.5)
        .def(
            "pauli_reduced",
            [](const PySurface& s, double u, double v, const std::map<std::string, double>& params) {
                auto sig = pauli_ccs(s.def, u, v, to_params(params));
                py::list out;
                for (const auto& m2 : sig) out.append(mat2c(m2));
                return out;
            },
            py::arg("u"), py::arg("v"), py::arg("params") = std::map<std::string, double>{})
        .def(
            "rashba_tensor",
            [](const PySurface& s, double u, double v, double alpha, double hbar,
               const std::map<std::string, double>& params) {
                return mat3(rashba_tensor_ccs(s.def, u, v, alpha, hbar, to_params(params)));
            },
            py::arg("u"), py::arg("v"), py::arg("alpha") = 1.0, py::arg("hbar") = 1.0,
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "dresselhaus_tensor",
            [](const PySurface& s, double u, double v, double beta, double hbar,
               const std::map<std::string, double>& params) {
                return mat3(dresselhaus_tensor_ccs(s.def, u, v, beta, hbar, to_params(params)));
            },
            py::arg("u"), py::arg("v"), py::arg("beta") = 1.0, py::arg("hbar") = 1.0,
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "hamiltonian",
            [](const PySurface& s, double hbar, double mass,
               const std::map<std::string, double>& params) {
                ParamMap pm = to_params(params);
                return PyOperator{assemble_hamiltonian(s.def, hbar, mass, pm), s.def,
                                  s.def.resolve_params(pm)};
            },
            py::arg("hbar") = 1.0, py::arg("mass") = 0.5,
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "momentum",
            [](const PySurface& s, double hbar, const std::map<std::string, double>& params) {
                ParamMap pm = to_params(params);
                return PyOperator{assemble_momentum(s.def, hbar, pm), s.def,
                                  s.def.resolve_params(pm)};
            },
            py::arg("hbar") = 1.0, py::arg("params") = std::map<std::string, double>{})
        .def(
            "orbital_angular_momentum",
            [](const PySurface& s, double hbar, const std::map<std::string, double>& params) {
                ParamMap pm = to_params(params);
                return PyOperator{assemble_oam(s.def, hbar, pm), s.def, s.def.resolve_params(pm)};
            },
            py::arg("hbar") = 1.0, py::arg("params") = std::map<std::string, double>{})
        .def(
            "rashba",
            [](const PySurface& s, double alpha, double hbar,
               const std::map<std::string, double>& params) {
                ParamMap pm = to_params(params);
                return PyOperator{assemble_rashba(s.def, alpha, hbar, pm), s.def,
                                  s.def.resolve_params(pm)};
            },
            py::arg("alpha") = 1.0, py::arg("hbar") = 1.0,
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "dresselhaus",
            [](const PySurface& s, double beta, double hbar,
               const std::map<std::string, double>& params) {
                ParamMap pm = to_params(params);
                return PyOperator{assemble_dresselhaus(s.def, beta, hbar, pm), s.def,
                                  s.def.resolve_params(pm)};
            },
            py::arg("beta") = 1.0, py::arg("hbar") = 1.0,
            py::arg("params") = std::map<std::string, double>{})
        .def(
            "grid_sample",
            [](const PySurface& s, int nu, int nv, const std::string& quantity,
               const std::map<std::string, double>& params, double hbar, double mass) {
                GridField f = grid_sample(s.def, nu, nv, quantity, to_params(params), hbar, mass);
                py::dict d;
                d["name"] = f.name;
                d["u"] = f.us;
                d["v"] = f.vs;
                d["values"] = f.values;  // row-major, u outer
                return d;
            },
            py::arg("nu"), py::arg("nv"), py::arg("quantity"),
            py::arg("params") = std::map<std::string, double>{}, py::arg("hbar") = 1.0,
            py::arg("mass") = 0.5);

    py::class_<PyOperator>(m, "Operator")
        .def_property_readonly("kind",
                               [](const PyOperator& o) { return std::string(value_kind_name(o.op.kind)); })
        .def_property_readonly("derivative_orders",
                               [](const PyOperator& o) {
                                   py::list out;
                                   for (const auto& kv : o.op.terms)
                                       out.append(py::make_tuple(kv.first.first, kv.first.second));
                                   return out;
                               })
        .def("terms_at", &PyOperator::terms_at, py::arg("u"), py::arg("v"));

    m.def(
        "spectrum",
        [](const PySurface& s, int m_angular, bool include_vg, int nodes, int k,
           const std::map<std::string, double>& params, double hbar, double mass) {
            RadialProblem prob =
                radial_reduce(s.def, m_angular, include_vg, nodes, to_params(params), hbar, mass);
            return solve_spectrum(prob, k);
        },
        py::arg("surface"), py::arg("m_angular") = 0, py::arg("include_vg") = true,
        py::arg("nodes") = 2000, py::arg("k") = 3,
        py::arg("params") = std::map<std::string, double>{}, py::arg("hbar") = 1.0,
        py::arg("mass") = 0.5);

    m.def(
        "verify_cone",
        [](int nu, int nv, const std::vector<double>& phis, double tol) {
            VerifyOptions opts;
            opts.nu = nu;
            opts.nv = nv;
            if (!phis.empty()) opts.phis = phis;
            opts.tol = tol;
            VerifyReport rep = run_verify(opts);
            py::dict d;
            d["n_checks"] = int(rep.checks.size());
            d["n_pass"] = rep.n_pass;
            d["n_fail"] = rep.n_fail;
            d["n_known_print_discrepancies"] = rep.n_known_discrepancies;
            d["pass"] = rep.pass;
            py::list checks;
            for (const auto& c : rep.checks) {
                py::dict cd;
                cd["name"] = c.name;
                cd["phi"] = c.phi;
                cd["max_rel_err"] = c.max_rel_err;
                cd["pass"] = c.pass;
                cd["known_print_discrepancy"] = c.known_print_discrepancy;
                if (!c.note.empty()) cd["note"] = c.note;
                checks.append(cd);
            }
            d["checks"] = checks;
            return d;
        },
        py::arg("nu") = 10, py::arg("nv") = 10, py::arg("phis") = std::vector<double>{},
        py::arg("tol") = 1e-9);

    // map library errors onto python exceptions
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SyntaxError& e) {
            PyErr_SetString(PyExc_SyntaxError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });
}
