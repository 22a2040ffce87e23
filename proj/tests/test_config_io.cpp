#include "doctest.h"
#include "poroplate/config.hpp"
#include "poroplate/io.hpp"
#include "poroplate/pipeline.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

using namespace poroplate;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("poroplate_test_config_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

template <typename E, typename F>
E expect_throw(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e;
  }
  FAIL("expected exception");
  throw;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.material.size() == 1);
  CHECK(cfg.geometry.cells.size() == 1);
  CHECK(cfg.geometry.cells[0].kind == "full_solid");
  CHECK(cfg.geometry.plate.regions.size() == 1);
  CHECK(cfg.simulation.dt == 0.01);
  CHECK(cfg.simulation.scheme == Scheme::BackwardEuler);
  CHECK(cfg.loads.preset == "none");

  const auto in = parse_config(R"({"simulation": {"mode": "inertial"}})");
  CHECK(in.simulation.scheme == Scheme::ImplicitMidpoint);
}

TEST_CASE("schema errors name the offending path") {
  auto e = expect_throw<SchemaError>([] { parse_config(R"({"simulation": {"dt": -0.1}})"); });
  CHECK(e.path() == "simulation.dt");
  CHECK(e.reason() == "must be positive");
  CHECK(e.error_class() == ErrorClass::Input);

  e = expect_throw<SchemaError>([] { parse_config(R"({"simulation": {"dt": 0.1, "t_end": 0.05}})"); });
  CHECK(e.path() == "simulation.t_end");

  e = expect_throw<SchemaError>([] { parse_config(R"({"geometry": {"cells": [{"phase": 4}]}})"); });
  CHECK(e.path() == "geometry.cells[0].phase");

  e = expect_throw<SchemaError>([] { parse_config("{not json"); });
  CHECK(e.path() == "<root>");

  auto u = expect_throw<UnknownKey>([] { parse_config(R"({"simulation": {"dtt": 0.1}})"); });
  CHECK(u.path() == "simulation.dtt");
  u = expect_throw<UnknownKey>([] { parse_config(R"({"extra": 1})"); });
  CHECK(u.path() == "extra");
}

TEST_CASE("normalization round trip") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto text = preset_config(name);
    const auto norm = normalize_config(text);
    CHECK(serialize_config(parse_config(text)) == norm);
    CHECK(normalize_config(norm) == norm);
  }
  CHECK_THROWS_AS(preset_config("nope"), SchemaError);
}

TEST_CASE("mask files resolve relative to the config") {
  const auto dir = scratch("mask");
  std::vector<std::uint8_t> m(64, 0);
  for (int k = 0; k < 4; ++k) m[(1 * 4 + 1) * 4 + k] = 1;
  write_mask_file((dir / "tube.bin").string(), 4, m);
  write_text_file((dir / "run.json").string(),
                  R"({"geometry": {"resolution": 4, "cells": [{"kind": "mask", "mask_file": "tube.bin"}]}})");
  auto cfg = load_config((dir / "run.json").string());
  const auto g = geometry_spec(cfg, cfg.geometry.cells[0]);
  CHECK(g.kind == GeometrySpec::Kind::Mask);
  CHECK(g.mask == m);

  cfg.geometry.resolution = 8;
  CHECK_THROWS_AS(geometry_spec(cfg, cfg.geometry.cells[0]), BadMask);
  CHECK_THROWS_AS(read_text_file((dir / "missing.json").string()), IoError);
}

TEST_CASE("f64 files are little endian") {
  const auto dir = scratch("f64");
  const auto path = (dir / "x.bin").string();
  write_f64_file(path, {1.0, -2.5});
  std::ifstream in(path, std::ios::binary);
  unsigned char b[16];
  in.read(reinterpret_cast<char*>(b), 16);
  REQUIRE(in.gcount() == 16);
  const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
  CHECK(std::memcmp(b, one, 8) == 0);
  CHECK(read_f64_file(path) == std::vector<double>{1.0, -2.5});
}

TEST_CASE("ledger csv and snapshots") {
  auto cfg = parse_config(preset_config("smooth_loads"));
  cfg.simulation.t_end = 0.05;
  const auto model = effective_model_for(cfg);
  const auto res = simulate(cfg, model);
  const auto dir = scratch("snap");

  write_ledger_csv((dir / "ledger.csv").string(), res.trajectory.ledger);
  const auto csv = read_text_file((dir / "ledger.csv").string());
  CHECK(csv.rfind("step,time,E_elastic,E_pressure,D_cumulative,W_loads,residual\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == res.trajectory.ledger.rows.size() + 1);

  const auto& st = res.trajectory.final_state;
  const auto snap = make_snapshot(res.ops, st, 5);
  CHECK(snap.p.size() == res.ops.spaces.n_p);
  CHECK(res.ops.n_p() + res.ops.removed_p == res.ops.spaces.n_p);
  write_snapshot((dir / "final").string(), snap);
  const auto sidecar = read_text_file((dir / "final.json").string());
  CHECK(sidecar.find("\"little\"") != std::string::npos);

  const auto back = read_snapshot((dir / "final").string());
  CHECK(back.step == 5);
  CHECK(back.time == snap.time);
  CHECK(back.grid.nx == snap.grid.nx);
  CHECK(back.mode == snap.mode);
  CHECK(back.u == snap.u);
  CHECK(back.p == snap.p);

  const auto f = snapshot_displacement(back, 5);
  const auto g = plate_displacement_field(res.ops.spaces, st.u, 5);
  REQUIRE(f.data.size() == g.data.size());
  for (std::size_t i = 0; i < f.data.size(); ++i) CHECK(f.data[i] == doctest::Approx(g.data[i]).epsilon(1e-14));

  fs::remove(dir / "final.bin");
  CHECK_THROWS_AS(read_snapshot((dir / "final").string()), IoError);
}
