// Python bindings for the main operations: grids and fields (numpy complex
// arrays), noise paths, time evolution, functionals, the ground-state solver
// and the experiment runner.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sfnls/attractor.hpp"
#include "sfnls/dynamics.hpp"
#include "sfnls/experiment.hpp"
#include "sfnls/grid.hpp"
#include "sfnls/ground_state.hpp"
#include "sfnls/model.hpp"
#include "sfnls/noise.hpp"
#include "sfnls/observables.hpp"

namespace py = pybind11;
using namespace sfnls;

namespace {

// thin handle: the core grid is immutable and shared
struct PyGrid {
  GridPtr ptr;
};

Field field_from_array(const PyGrid& grid, py::array_t<cplx> array) {
  auto buf = array.request();
  if (static_cast<std::size_t>(buf.size) != grid.ptr->size())
    throw std::invalid_argument("array size does not match grid");
  Field f(grid.ptr);
  auto* src = static_cast<const cplx*>(buf.ptr);
  std::copy(src, src + grid.ptr->size(), f.values.begin());
  return f;
}

py::array_t<cplx> field_to_array(const Field& f) {
  const Grid& g = *f.grid;
  std::vector<py::ssize_t> shape;
  for (int d = 0; d < g.dim(); ++d) shape.push_back(g.points());
  py::array_t<cplx> out(shape);
  std::copy(f.values.begin(), f.values.end(), static_cast<cplx*>(out.request().ptr));
  return out;
}

}  // namespace

PYBIND11_MODULE(_sfnls, m) {
  m.doc() = "spectral simulator for a damped stochastic fractional NLS";

  py::class_<PyGrid>(m, "Grid")
      .def(py::init([](int dim, double extent, int points, double alpha) {
             return PyGrid{make_grid(dim, extent, points, alpha)};
           }),
           py::arg("dim"), py::arg("extent"), py::arg("points"), py::arg("alpha"))
      .def_property_readonly("dim", [](const PyGrid& g) { return g.ptr->dim(); })
      .def_property_readonly("extent", [](const PyGrid& g) { return g.ptr->extent(); })
      .def_property_readonly("points", [](const PyGrid& g) { return g.ptr->points(); })
      .def_property_readonly("alpha", [](const PyGrid& g) { return g.ptr->alpha(); })
      .def_property_readonly("cell", [](const PyGrid& g) { return g.ptr->cell(); })
      .def("coords", [](const PyGrid& g) {
        std::vector<double> x(g.ptr->points());
        for (int j = 0; j < g.ptr->points(); ++j) x[j] = g.ptr->coord(j);
        return x;
      });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("dim", &ModelParams::dim);

  py::class_<NoisePath>(m, "NoisePath")
      .def_readonly("seed", &NoisePath::seed)
      .def_readonly("dt", &NoisePath::dt)
      .def_readonly("steps", &NoisePath::steps)
      .def_readonly("w_increments", &NoisePath::w_increments)
      .def_readonly("z_samples", &NoisePath::z_samples)
      .def_property_readonly("t0", &NoisePath::t0);

  m.def("sample_path", &sample_path, py::arg("seed"), py::arg("t0"), py::arg("dt"),
        py::arg("steps"));
  m.def("shift_path", &shift_path);
  m.def("extend_path_backward", &extend_path_backward);
  m.def("coarsen_path", &coarsen_path);

  m.def("frac_laplacian_constant", &frac_laplacian_constant, py::arg("dim"),
        py::arg("alpha"));
  m.def(
      "frac_laplacian",
      [](const PyGrid& g, py::array_t<cplx> u, double beta_exp) {
        return field_to_array(frac_laplacian(field_from_array(g, u), beta_exp));
      },
      py::arg("grid"), py::arg("values"), py::arg("beta_exp"));
  m.def(
      "mass",
      [](const PyGrid& g, py::array_t<cplx> u) { return mass(field_from_array(g, u)); },
      py::arg("grid"), py::arg("values"));
  m.def(
      "energy",
      [](const PyGrid& g, py::array_t<cplx> u, const ModelParams& p) {
        return energy(field_from_array(g, u), p);
      },
      py::arg("grid"), py::arg("values"), py::arg("params"));
  m.def(
      "h_alpha_norms",
      [](const PyGrid& g, py::array_t<cplx> u) {
        auto r = norms(field_from_array(g, u));
        return py::make_tuple(r.l2_sq, r.hdot_alpha_sq, r.h_alpha_sq);
      },
      py::arg("grid"), py::arg("values"), "returns (l2_sq, hdot_alpha_sq, h_alpha_sq)");

  m.def(
      "evolve",
      [](const PyGrid& g, py::array_t<cplx> u, double t_start, double t_end,
         const ModelParams& params, const std::string& forcing, double beta,
         py::object g_profile, const NoisePath& path, double dt) {
        ForcingSpec spec;
        if (forcing == "zero") spec = zero_forcing();
        else if (forcing == "linear_damping") spec = linear_damping_forcing(beta);
        else if (forcing == "damped_forced")
          spec = damped_forced_forcing(
              beta, field_from_array(g, g_profile.cast<py::array_t<cplx>>()));
        else throw std::invalid_argument("unknown forcing '" + forcing + "'");
        IntegratorConfig cfg;
        cfg.dt = dt;
        auto st = evolve(field_from_array(g, u), t_start, t_end, params, spec, path, cfg);
        return py::make_tuple(field_to_array(st.field), st.diverged);
      },
      py::arg("grid"), py::arg("values"), py::arg("t_start"), py::arg("t_end"),
      py::arg("params"), py::arg("forcing"), py::arg("beta"), py::arg("g_profile"),
      py::arg("path"), py::arg("dt"), "returns (final_values, diverged)");

  m.def(
      "solve_ground_state",
      [](const PyGrid& g, const ModelParams& params, int max_iter, double tol) {
        GroundState gs = solve_ground_state(g.ptr, params, std::nullopt, max_iter, tol);
        return py::make_tuple(field_to_array(gs.profile), gs.residual_l2, gs.c_opt,
                              gs.iterations, gs.converged);
      },
      py::arg("grid"), py::arg("params"), py::arg("max_iter") = 2000,
      py::arg("tol") = 1e-10,
      "returns (profile, residual_l2, c_opt, iterations, converged)");
  m.def(
      "gn_ratio",
      [](const PyGrid& g, py::array_t<cplx> u, const ModelParams& p, double c_opt) {
        return gn_ratio(field_from_array(g, u), p, c_opt);
      },
      py::arg("grid"), py::arg("values"), py::arg("params"), py::arg("c_opt"));

  m.def("list_experiments", &list_experiments);
  m.def(
      "run_config",
      [](const std::string& path) { return run_experiment(parse_config(path)); },
      py::arg("config_path"), "parse and run a config file; returns the exit code");
}
