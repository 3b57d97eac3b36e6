#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fjko/caputo.hpp"
#include "fjko/io.hpp"
#include "fjko/mobility.hpp"
#include "fjko/reference.hpp"
#include "fjko/spectral.hpp"
#include "fjko/transport.hpp"
#include "fjko/verify.hpp"

namespace py = pybind11;
using namespace fjko;

namespace {

Field to_field(const Grid& grid, const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (static_cast<std::size_t>(arr.size()) != grid.size())
        throw std::invalid_argument("field size does not match grid");
    Field out(grid.size());
    std::copy(arr.data(), arr.data() + arr.size(), out.begin());
    return out;
}

py::array_t<double> from_field(const Grid& grid, const Field& f) {
    py::array_t<double> arr(grid.d == 1 ? std::vector<py::ssize_t>{grid.n}
                                        : std::vector<py::ssize_t>{grid.n, grid.n});
    std::copy(f.begin(), f.end(), arr.mutable_data());
    return arr;
}

Density to_density(const Grid& grid, const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    return Density(grid, to_field(grid, arr));
}

py::array_t<double> from_vector(const std::vector<double>& v) {
    py::array_t<double> arr(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

TransportOptions opts(int M, double tol, int max_iter) { return TransportOptions{M, tol, max_iter}; }

}  // namespace

PYBIND11_MODULE(_fjko, m) {
    m.doc() = "core operations of the time-fractional porous-medium JKO solver";
    m.attr("__version__") = kCodeVersion;

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double>(), py::arg("d"), py::arg("n"), py::arg("L"))
        .def_readonly("d", &Grid::d)
        .def_readonly("n", &Grid::n)
        .def_readonly("L", &Grid::length)
        .def_property_readonly("cell_volume", &Grid::cell_volume)
        .def("coord", &Grid::coord);

    py::class_<MobilitySpec>(m, "MobilitySpec")
        .def_static("porous_beta", &MobilitySpec::porous_beta, py::arg("beta"), py::arg("delta"))
        .def_static("exponent_one", &MobilitySpec::exponent_one, py::arg("eps"))
        .def_static("constant", &MobilitySpec::constant, py::arg("c"))
        .def_static("for_porous_equation", &MobilitySpec::for_porous_equation, py::arg("beta"),
                    py::arg("alpha"), py::arg("tau"))
        .def_static("for_linear_equation", &MobilitySpec::for_linear_equation, py::arg("alpha"),
                    py::arg("tau"))
        .def("__call__", &MobilitySpec::operator())
        .def("derivative", &MobilitySpec::derivative)
        .def("inf_value", &MobilitySpec::inf_value)
        .def("integral_u", &MobilitySpec::integral_u);

    m.def("gamma_fn", &gamma_fn);
    m.def("c_alpha", &c_alpha);

    m.def("l1_weights", [](int k, double alpha) {
        const L1Weights w = l1_weights(k, alpha);
        return py::make_tuple(from_vector(w.b), w.c_alpha);
    }, py::arg("k"), py::arg("alpha"));
    m.def("weight_sum_identity", &weight_sum_identity);

    m.def("caputo_left",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> samples, double alpha,
             double tau) {
              std::vector<double> s(samples.data(), samples.data() + samples.size());
              return from_vector(caputo_left(s, alpha, tau));
          },
          py::arg("samples"), py::arg("alpha"), py::arg("tau"));

    m.def("caputo_right",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> samples, double alpha,
             double tau, double T) {
              std::vector<double> s(samples.data(), samples.data() + samples.size());
              const RightCaputoSeries out = caputo_right(s, alpha, tau, T);
              return py::make_tuple(from_vector(out.quadrature), from_vector(out.surrogate));
          },
          py::arg("samples"), py::arg("alpha"), py::arg("tau"), py::arg("T"));

    m.def("history_combination",
          [](const Grid& grid, const std::vector<py::array_t<double>>& states, double tau,
             double alpha) {
              std::vector<Density> steps;
              for (const auto& s : states) steps.push_back(to_density(grid, s));
              const Density out = history_combination(
                  History(tau, std::move(steps)),
                  l1_weights(static_cast<int>(states.size()), alpha));
              return from_field(grid, out.values);
          },
          py::arg("grid"), py::arg("states"), py::arg("tau"), py::arg("alpha"));

    m.def("frac_laplacian", [](const Grid& g, py::array_t<double> u, double r) {
        return from_field(g, frac_laplacian(g, to_field(g, u), r));
    });
    m.def("sobolev_norm_sq", [](const Grid& g, py::array_t<double> u, double r) {
        return sobolev_norm_sq(g, to_field(g, u), r);
    });
    m.def("sobolev_inner", [](const Grid& g, py::array_t<double> u, py::array_t<double> v, double r) {
        return sobolev_inner(g, to_field(g, u), to_field(g, v), r);
    });
    m.def("lp_norm", [](const Grid& g, py::array_t<double> u, double p) {
        return lp_norm(g, to_field(g, u), p);
    });
    m.def("nonlocal_flux", [](const Grid& g, py::array_t<double> u, double beta, double s) {
        const std::vector<Field> flux = nonlocal_flux(g, to_field(g, u), beta, s);
        py::list out;
        for (const Field& f : flux) out.append(from_field(g, f));
        return out;
    });

    m.def("normalize_density", [](const Grid& g, py::array_t<double> u) {
        return from_field(g, Density::normalized(g, to_field(g, u)).values);
    });
    m.def("u_functional", [](const MobilitySpec& spec, const Grid& g, py::array_t<double> u) {
        return u_functional(spec, to_density(g, u));
    });
    m.def("g_p", [](const Grid& g, py::array_t<double> u, double p) {
        return g_p(to_density(g, u), p);
    });
    m.def("script_g", &script_g, py::arg("spec"), py::arg("p"), py::arg("z"));
    m.def("big_g", &big_g, py::arg("spec"), py::arg("p"), py::arg("z"));

    m.def("solve_distance",
          [](const Grid& g, py::array_t<double> a, py::array_t<double> b, const MobilitySpec& spec,
             int M, double tol, int max_iter) {
              const DistanceResult r =
                  solve_distance(to_density(g, a), to_density(g, b), spec, opts(M, tol, max_iter));
              py::dict info;
              info["w2_sq"] = r.w2_sq;
              info["converged"] = r.converged;
              info["iterations"] = r.iterations;
              return info;
          },
          py::arg("grid"), py::arg("gamma0"), py::arg("gamma1"), py::arg("spec"),
          py::arg("M") = 16, py::arg("tol") = 1e-7, py::arg("max_iter") = 20000);

    m.def("jko_step",
          [](const Grid& g, py::array_t<double> ubar, const MobilitySpec& spec, double tau,
             double alpha, double s, int M, double tol, int max_iter) {
              const JkoStepResult r =
                  jko_step(to_density(g, ubar), spec, tau, alpha, s, opts(M, tol, max_iter));
              py::dict info;
              info["w2_sq"] = r.w2_sq;
              info["objective"] = r.objective;
              info["converged"] = r.converged;
              info["iterations"] = r.iterations;
              info["raw_mass"] = r.raw_mass;
              info["clipped_mass"] = r.clipped_mass;
              return py::make_tuple(from_field(g, r.u.values), info);
          },
          py::arg("grid"), py::arg("ubar"), py::arg("spec"), py::arg("tau"), py::arg("alpha"),
          py::arg("s"), py::arg("M") = 16, py::arg("tol") = 1e-7, py::arg("max_iter") = 20000);

    m.def("step_linear",
          [](const Grid& g, const std::vector<py::array_t<double>>& states, double tau,
             double alpha, double s, double c) {
              std::vector<Density> steps;
              for (const auto& st : states) steps.push_back(to_density(g, st));
              return from_field(g, step_linear(History(tau, std::move(steps)), alpha, s, c).values);
          },
          py::arg("grid"), py::arg("states"), py::arg("tau"), py::arg("alpha"), py::arg("s"),
          py::arg("c") = 1.0);

    m.def("step_nonlinear",
          [](const Grid& g, const std::vector<py::array_t<double>>& states, double tau,
             double alpha, double beta, double s, int n_substeps) {
              std::vector<Density> steps;
              for (const auto& st : states) steps.push_back(to_density(g, st));
              return from_field(
                  g, step_nonlinear(History(tau, std::move(steps)), alpha, beta, s, n_substeps)
                         .values);
          },
          py::arg("grid"), py::arg("states"), py::arg("tau"), py::arg("alpha"), py::arg("beta"),
          py::arg("s"), py::arg("n_substeps") = 0);

    m.def("bump_density", [](const Grid& g, double radius_fraction) {
        return from_field(g, bump_density(g, radius_fraction).values);
    }, py::arg("grid"), py::arg("radius_fraction") = 1.0 / 16.0);

    m.def("write_snapshot", [](const std::string& path, const Grid& g, py::array_t<double> u,
                               double time) { write_snapshot(path, to_density(g, u), time); });
    m.def("read_snapshot", [](const std::string& path) {
        const Snapshot s = read_snapshot(path);
        py::dict out;
        out["d"] = s.density.grid.d;
        out["n"] = s.density.grid.n;
        out["L"] = s.density.grid.length;
        out["time"] = s.time;
        out["values"] = from_field(s.density.grid, s.density.values);
        return out;
    });
}
