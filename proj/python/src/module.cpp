#include "poroplate/config.hpp"
#include "poroplate/io.hpp"
#include "poroplate/kinematics.hpp"
#include "poroplate/pipeline.hpp"
#include "poroplate/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace poroplate;

namespace {

using Array3 = py::array_t<double, py::array::c_style | py::array::forcecast>;

RunConfig config_from(const std::string& text, const std::string& base_dir) {
  auto cfg = parse_config(text);
  cfg.base_dir = base_dir;
  return cfg;
}

SampledField field_from(const Array3& a, double lx, double ly) {
  if (a.ndim() != 4 || a.shape(3) != 3) throw BadGrid("field must have shape (nx, ny, nz, 3)");
  SampledField f;
  f.nx = static_cast<int>(a.shape(0));
  f.ny = static_cast<int>(a.shape(1));
  f.nz = static_cast<int>(a.shape(2));
  f.lx = lx;
  f.ly = ly;
  f.data.assign(a.data(), a.data() + a.size());
  return f;
}

py::array_t<double> field_to(const SampledField& f) {
  py::array_t<double> out({f.nx, f.ny, f.nz, 3});
  std::memcpy(out.mutable_data(), f.data.data(), f.data.size() * sizeof(double));
  return out;
}

py::array_t<double> rows_to(const std::vector<std::array<double, 3>>& v, int nx, int ny) {
  py::array_t<double> out({nx, ny, 3});
  std::memcpy(out.mutable_data(), v.data(), v.size() * 3 * sizeof(double));
  return out;
}

py::dict model_dict(const EffectiveModel& m) {
  py::list regions;
  for (const auto& r : m.regions) {
    py::list layers;
    for (const auto& l : r.layers) {
      py::dict d;
      d["lo"] = l.lo;
      d["hi"] = l.hi;
      d["phase"] = l.phase;
      d["fluid_fraction"] = l.fluid_fraction;
      d["theta"] = Mat3(l.theta);
      d["m0"] = l.m0;
      d["k"] = Mat3(l.k);
      layers.append(d);
    }
    py::dict d;
    d["box"] = py::make_tuple(r.x0, r.y0, r.x1, r.y1);
    d["a_hom"] = Mat6(r.a_hom);
    d["kappa"] = r.kappa;
    d["layers"] = layers;
    regions.append(d);
  }
  py::dict out;
  out["lx"] = m.lx;
  out["ly"] = m.ly;
  out["regions"] = regions;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Homogenized poroelastic plate solver";

  static py::exception<Error> base(m, "PoroplateError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(base.ptr())(e.what());
      err.attr("kind") = e.kind();
      err.attr("exit_code") = static_cast<int>(e.error_class());
      PyErr_SetObject(base.ptr(), err.ptr());
    }
  });

  m.def("preset_names", &preset_names);
  m.def("preset_config", &preset_config, py::arg("name"));
  m.def("normalize_config", &normalize_config, py::arg("text"));

  m.def(
      "homogenize",
      [](const std::string& text, const std::string& base_dir) {
        const auto h = [&] {
          py::gil_scoped_release nogil;
          return homogenize(config_from(text, base_dir));
        }();
        py::dict out = model_dict(h.model);
        out["report"] = h.report.to_json();
        out["passed"] = h.report.passed();
        return out;
      },
      py::arg("config"), py::arg("base_dir") = ".");

  m.def(
      "simulate",
      [](const std::string& text, const std::string& base_dir) {
        const auto res = [&] {
          py::gil_scoped_release nogil;
          const auto cfg = config_from(text, base_dir);
          return simulate(cfg, effective_model_for(cfg));
        }();
        const auto& led = res.trajectory.ledger;
        const auto& fs = res.trajectory.final_state;
        py::dict out;
        out["ledger_csv"] = led.to_csv();
        out["max_residual"] = led.max_abs_residual();
        out["inertial"] = led.inertial;
        out["time"] = fs.t;
        out["u"] = fs.u;
        out["p"] = full_pressure(res.ops, fs.p);
        if (fs.v.size()) out["v"] = fs.v;
        out["warnings"] = res.warnings;
        return out;
      },
      py::arg("config"), py::arg("base_dir") = ".");

  m.def(
      "verify",
      [](bool fast, const std::string& inject) {
        py::gil_scoped_release nogil;
        return run_verify({fast, inject}).to_json();
      },
      py::arg("fast") = true, py::arg("inject") = "none");

  m.def(
      "griso_decompose",
      [](const Array3& psi, double lx, double ly) {
        const auto g = griso_decompose(field_from(psi, lx, ly));
        py::dict out;
        out["psi_hat"] = rows_to(g.psi_hat, g.nx, g.ny);
        out["r"] = rows_to(g.r, g.nx, g.ny);
        out["residual"] = field_to(g.residual);
        out["c_i"] = g.c_i;
        return out;
      },
      py::arg("psi"), py::arg("lx") = 1.0, py::arg("ly") = 1.0);

  m.def(
      "korn_ratio",
      [](const Array3& psi, double h, double lx, double ly) { return korn_ratio(field_from(psi, lx, ly), h); },
      py::arg("psi"), py::arg("h"), py::arg("lx") = 1.0, py::arg("ly") = 1.0);
}
