#include "poroplate/config.hpp"

#include "poroplate/io.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>

namespace poroplate {

using json = nlohmann::json;

namespace {

const double kPi = 3.14159265358979323846;

// Walks one JSON object, remembers the keys it consumed and rejects the rest.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "must be an object");
  }
  ~Node() = default;

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  Node child(const std::string& key) {
    seen_.insert(key);
    return Node(j_.at(key), at(key));
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) throw SchemaError(at(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(at(key), "must be finite");
    return x;
  }
  double positive(const std::string& key, double def) {
    const double x = number(key, def);
    if (!(x > 0)) throw SchemaError(at(key), "must be positive");
    return x;
  }
  int integer(const std::string& key, int def, int min) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "must be an integer");
    const long long x = v.get<long long>();
    if (x < min) throw SchemaError(at(key), "must be at least " + std::to_string(min));
    if (x > 1000000000) throw SchemaError(at(key), "is too large");
    return static_cast<int>(x);
  }
  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) throw SchemaError(at(key), "must be a string");
    return v.get<std::string>();
  }
  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
    const std::string s = string(key, def);
    for (const auto& a : allowed)
      if (a == s) return s;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw SchemaError(at(key), "must be one of " + list);
  }
  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    if (!j_.at(key).is_boolean()) throw SchemaError(at(key), "must be a boolean");
    return j_.at(key).get<bool>();
  }
  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(at(key), "must be an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw SchemaError(at(key) + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<Node> objects(const std::string& key) {
    std::vector<Node> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(at(key), "must be an array");
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], at(key) + "[" + std::to_string(i) + "]");
    return out;
  }
  // Call after reading all fields.
  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw UnknownKey(at(it.key()));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec as_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

const char* mode_name(PlateMode m) { return m == PlateMode::Inertial ? "inertial" : "quasistatic"; }

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("<root>", std::string("not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Node top(root, "");

  if (top.has("material")) {
    Node mat = top.child("material");
    for (auto& p : mat.objects("phases")) {
      MaterialConfig m;
      m.id = p.integer("id", 0, 0);
      m.lambda = p.number("lambda", 1.0);
      m.mu = p.positive("mu", 1.0);
      if (p.has("stiffness")) {
        const auto s = p.numbers("stiffness");
        if (s.size() != 21) throw SchemaError(p.at("stiffness"), "must hold the 21 upper-triangle Mandel entries");
        std::array<double, 21> a;
        std::copy(s.begin(), s.end(), a.begin());
        m.stiffness = a;
      }
      m.fluid_density = p.positive("fluid_density", 1.0);
      m.solid_density = p.positive("solid_density", 1.0);
      p.done();
      for (const auto& other : cfg.material)
        if (other.id == m.id) throw SchemaError(p.at("id"), "duplicate phase id " + std::to_string(m.id));
      cfg.material.push_back(m);
    }
    mat.done();
  }
  if (cfg.material.empty()) cfg.material.push_back(MaterialConfig{});

  if (top.has("geometry")) {
    Node geo = top.child("geometry");
    cfg.geometry.resolution = geo.integer("resolution", 8, 2);
    for (auto& c : geo.objects("cells")) {
      CellConfig cc;
      cc.phase = c.integer("phase", 0, 0);
      cc.kind = c.choice("kind", "full_solid", {"full_solid", "layer", "inclusion", "channel", "mask"});
      cc.axis = c.integer("axis", 3, 1);
      if (cc.axis > 3) throw SchemaError(c.at("axis"), "must be 1, 2 or 3");
      cc.size = c.number("size", 0.0);
      if (cc.kind != "full_solid" && cc.kind != "mask" && !(cc.size > 0 && cc.size < 1))
        throw SchemaError(c.at("size"), "must lie in (0, 1)");
      cc.mask_file = c.string("mask_file", "");
      if (cc.kind == "mask" && cc.mask_file.empty()) throw SchemaError(c.at("mask_file"), "is required for kind mask");
      c.done();
      for (const auto& other : cfg.geometry.cells)
        if (other.phase == cc.phase) throw SchemaError(c.at("phase"), "duplicate cell for phase " + std::to_string(cc.phase));
      cfg.geometry.cells.push_back(cc);
    }
    if (geo.has("plate")) {
      Node pl = geo.child("plate");
      cfg.geometry.plate.lx = pl.positive("lx", 1.0);
      cfg.geometry.plate.ly = pl.positive("ly", 1.0);
      for (auto& r : pl.objects("regions")) {
        RegionSpec rs;
        rs.x0 = r.number("x0", 0.0);
        rs.y0 = r.number("y0", 0.0);
        rs.x1 = r.number("x1", cfg.geometry.plate.lx);
        rs.y1 = r.number("y1", cfg.geometry.plate.ly);
        for (auto& l : r.objects("column")) {
          LayerSpec ls;
          ls.lo = l.number("lo", -0.5);
          ls.hi = l.number("hi", 0.5);
          ls.phase = l.integer("phase", 0, 0);
          l.done();
          rs.column.push_back(ls);
        }
        r.done();
        cfg.geometry.plate.regions.push_back(rs);
      }
      pl.done();
    }
    geo.done();
  }
  if (cfg.geometry.cells.empty()) cfg.geometry.cells.push_back({cfg.material.front().id, "full_solid", 3, 0.0, ""});
  if (cfg.geometry.plate.regions.empty()) {
    RegionSpec rs;
    rs.x1 = cfg.geometry.plate.lx;
    rs.y1 = cfg.geometry.plate.ly;
    rs.column.push_back({-0.5, 0.5, cfg.geometry.cells.front().phase});
    cfg.geometry.plate.regions.push_back(rs);
  }
  for (std::size_t r = 0; r < cfg.geometry.plate.regions.size(); ++r) {
    auto& rs = cfg.geometry.plate.regions[r];
    const std::string rp = "geometry.plate.regions[" + std::to_string(r) + "]";
    if (rs.column.empty()) rs.column.push_back({-0.5, 0.5, cfg.geometry.cells.front().phase});
    for (std::size_t l = 0; l < rs.column.size(); ++l) {
      bool found = false;
      for (const auto& c : cfg.geometry.cells) found |= c.phase == rs.column[l].phase;
      if (!found)
        throw SchemaError(rp + ".column[" + std::to_string(l) + "].phase",
                          "no cell is defined for phase " + std::to_string(rs.column[l].phase));
    }
  }
  for (std::size_t c = 0; c < cfg.geometry.cells.size(); ++c) {
    bool found = false;
    for (const auto& m : cfg.material) found |= m.id == cfg.geometry.cells[c].phase;
    if (!found)
      throw SchemaError("geometry.cells[" + std::to_string(c) + "].phase",
                        "no material is defined for phase " + std::to_string(cfg.geometry.cells[c].phase));
  }
  for (const auto& m : cfg.material) cfg.geometry.plate.densities[m.id] = {m.fluid_density, m.solid_density};

  cfg.effective_model = top.string("effective_model", "");

  if (top.has("simulation")) {
    Node sim = top.child("simulation");
    cfg.simulation.mode =
        sim.choice("mode", "quasistatic", {"quasistatic", "inertial"}) == "inertial" ? PlateMode::Inertial
                                                                                    : PlateMode::Quasistatic;
    cfg.simulation.dt = sim.positive("dt", 0.01);
    cfg.simulation.t_end = sim.number("t_end", 0.1);
    if (!(cfg.simulation.t_end >= cfg.simulation.dt))
      throw SchemaError(sim.at("t_end"), "must be at least simulation.dt");
    const std::string def = cfg.simulation.mode == PlateMode::Inertial ? "implicit_midpoint" : "backward_euler";
    cfg.simulation.scheme = parse_scheme(sim.choice("scheme", def, {"backward_euler", "crank_nicolson", "implicit_midpoint"}));
    if (sim.has("grid")) {
      Node g = sim.child("grid");
      cfg.simulation.grid.nx = g.integer("nx", 8, 2);
      cfg.simulation.grid.ny = g.integer("ny", 8, 2);
      cfg.simulation.grid.nz = g.integer("nz", 8, 1);
      g.done();
    }
    cfg.simulation.stride = sim.integer("stride", 1, 1);
    sim.done();
  }

  if (top.has("loads")) {
    Node ld = top.child("loads");
    cfg.loads.preset = ld.choice("preset", "none", {"none", "zero", "eigenmode", "smooth", "bending_wave"});
    cfg.loads.amplitude = ld.number("amplitude", 1.0);
    cfg.loads.seed = static_cast<unsigned>(ld.integer("seed", 7, 0));
    cfg.loads.sample_count = ld.integer("sample_count", 0, 0);
    double last = -1.0;
    for (auto& s : ld.objects("samples")) {
      SampleConfig sc;
      sc.t = s.number("t", 0.0);
      if (!(sc.t > last)) throw SchemaError(s.at("t"), "sample times must increase");
      last = sc.t;
      sc.f1 = s.numbers("f1");
      sc.f2 = s.numbers("f2");
      sc.f3 = s.numbers("f3");
      sc.m1 = s.numbers("m1");
      sc.m2 = s.numbers("m2");
      sc.g = s.numbers("g");
      s.done();
      cfg.loads.samples.push_back(sc);
    }
    cfg.loads.t0 = ld.numbers("t0");
    cfg.loads.b0 = ld.numbers("b0");
    cfg.loads.b1 = ld.numbers("b1");
    ld.done();
  }

  if (top.has("outputs")) {
    Node out = top.child("outputs");
    cfg.outputs.directory = out.string("directory", "out");
    cfg.outputs.ledger = out.string("ledger", "ledger.csv");
    if (cfg.outputs.ledger.empty()) throw SchemaError(out.at("ledger"), "must not be empty");
    cfg.outputs.snapshots = out.boolean("snapshots", false);
    out.done();
  }

  if (top.has("tolerances")) {
    Node tol = top.child("tolerances");
    cfg.tolerances.symmetry = tol.positive("symmetry", 1e-12);
    cfg.tolerances.duality = tol.positive("duality", 1e-8);
    cfg.tolerances.permeability_energy = tol.positive("permeability_energy", 1e-8);
    cfg.tolerances.cell_residual = tol.positive("cell_residual", 1e-8);
    cfg.tolerances.stokes_beta = tol.positive("stokes_beta", 0.05);
    tol.done();
  }

  if (top.has("verify")) {
    Node v = top.child("verify");
    cfg.verify.inject = v.choice("inject", "none", {"none", "tensor"});
    v.done();
  }
  top.done();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg = parse_config(read_text_file(path));
  const auto parent = std::filesystem::path(path).parent_path();
  cfg.base_dir = parent.empty() ? "." : parent.string();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  json phases = json::array();
  for (const auto& m : cfg.material) {
    json p = {{"id", m.id},
              {"lambda", m.lambda},
              {"mu", m.mu},
              {"fluid_density", m.fluid_density},
              {"solid_density", m.solid_density}};
    if (m.stiffness) p["stiffness"] = *m.stiffness;
    phases.push_back(p);
  }
  j["material"] = {{"phases", phases}};

  json cells = json::array();
  for (const auto& c : cfg.geometry.cells) {
    json cj = {{"phase", c.phase}, {"kind", c.kind}, {"axis", c.axis}, {"size", c.size}};
    if (!c.mask_file.empty()) cj["mask_file"] = c.mask_file;
    cells.push_back(cj);
  }
  json regions = json::array();
  for (const auto& r : cfg.geometry.plate.regions) {
    json col = json::array();
    for (const auto& l : r.column) col.push_back({{"lo", l.lo}, {"hi", l.hi}, {"phase", l.phase}});
    regions.push_back({{"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}, {"column", col}});
  }
  j["geometry"] = {{"resolution", cfg.geometry.resolution},
                   {"cells", cells},
                   {"plate", {{"lx", cfg.geometry.plate.lx}, {"ly", cfg.geometry.plate.ly}, {"regions", regions}}}};
  if (!cfg.effective_model.empty()) j["effective_model"] = cfg.effective_model;

  const auto& s = cfg.simulation;
  j["simulation"] = {{"mode", mode_name(s.mode)},
                     {"dt", s.dt},
                     {"t_end", s.t_end},
                     {"scheme", scheme_name(s.scheme)},
                     {"grid", {{"nx", s.grid.nx}, {"ny", s.grid.ny}, {"nz", s.grid.nz}}},
                     {"stride", s.stride}};

  json samples = json::array();
  for (const auto& smp : cfg.loads.samples) {
    json sj = {{"t", smp.t}};
    if (!smp.f1.empty()) sj["f1"] = smp.f1;
    if (!smp.f2.empty()) sj["f2"] = smp.f2;
    if (!smp.f3.empty()) sj["f3"] = smp.f3;
    if (!smp.m1.empty()) sj["m1"] = smp.m1;
    if (!smp.m2.empty()) sj["m2"] = smp.m2;
    if (!smp.g.empty()) sj["g"] = smp.g;
    samples.push_back(sj);
  }
  j["loads"] = {{"preset", cfg.loads.preset},
                {"amplitude", cfg.loads.amplitude},
                {"seed", cfg.loads.seed},
                {"sample_count", cfg.loads.sample_count},
                {"samples", samples},
                {"t0", cfg.loads.t0},
                {"b0", cfg.loads.b0},
                {"b1", cfg.loads.b1}};
  j["outputs"] = {{"directory", cfg.outputs.directory},
                  {"ledger", cfg.outputs.ledger},
                  {"snapshots", cfg.outputs.snapshots}};
  j["tolerances"] = {{"symmetry", cfg.tolerances.symmetry},
                     {"duality", cfg.tolerances.duality},
                     {"permeability_energy", cfg.tolerances.permeability_energy},
                     {"cell_residual", cfg.tolerances.cell_residual},
                     {"stokes_beta", cfg.tolerances.stokes_beta}};
  j["verify"] = {{"inject", cfg.verify.inject}};
  return j.dump(2) + "\n";
}

std::string normalize_config(const std::string& text) { return serialize_config(parse_config(text)); }

const MaterialConfig& material_of(const RunConfig& cfg, int phase) {
  for (const auto& m : cfg.material)
    if (m.id == phase) return m;
  throw UnknownPhase("no material for phase " + std::to_string(phase));
}

GeometrySpec geometry_spec(const RunConfig& cfg, const CellConfig& cell) {
  if (cell.kind == "layer") return GeometrySpec::layer(cell.axis, cell.size);
  if (cell.kind == "inclusion") return GeometrySpec::centered_inclusion(cell.size);
  if (cell.kind == "channel") return GeometrySpec::channel(cell.axis, cell.size);
  if (cell.kind == "mask") {
    std::filesystem::path p(cell.mask_file);
    if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
    int n = 0;
    auto mask = read_mask_file(p.string(), &n);
    if (n != cfg.geometry.resolution)
      throw BadMask("mask resolution " + std::to_string(n) + " does not match geometry.resolution " +
                    std::to_string(cfg.geometry.resolution));
    return GeometrySpec::explicit_mask(std::move(mask));
  }
  return GeometrySpec::full_solid();
}

PhaseSpec phase_spec(const RunConfig& cfg, int phase) {
  const auto& m = material_of(cfg, phase);
  PhaseSpec ps;
  ps.id = phase;
  ps.elasticity = m.stiffness ? Stiffness::from_upper21(*m.stiffness) : Stiffness::isotropic(m.lambda, m.mu);
  return ps;
}

CellSolveOptions cell_options(const RunConfig& cfg) {
  CellSolveOptions o;
  o.stokes_beta = cfg.tolerances.stokes_beta;
  o.accept_residual = cfg.tolerances.cell_residual;
  return o;
}

TensorTolerances tensor_tolerances(const RunConfig& cfg) {
  TensorTolerances t;
  t.symmetry = cfg.tolerances.symmetry;
  t.duality = cfg.tolerances.duality;
  t.permeability_energy = cfg.tolerances.permeability_energy;
  return t;
}

TimeSettings time_settings(const RunConfig& cfg) {
  TimeSettings ts;
  ts.dt = cfg.simulation.dt;
  ts.t_end = cfg.simulation.t_end;
  ts.scheme = cfg.simulation.scheme;
  ts.stride = cfg.simulation.stride;
  return ts;
}

namespace {

// Storage coefficient at height x3 of a plate cell; interface nodes take the mean of both sides.
double storage_at(const EffectiveModel& model, const DiscreteOperators& ops, int cell, double x3) {
  const auto& rc = model.regions[ops.cell_region[cell]];
  double sum = 0;
  int hits = 0;
  for (const auto& l : rc.layers)
    if (x3 >= l.lo - 1e-12 && x3 <= l.hi + 1e-12) {
      sum += l.m0;
      ++hits;
    }
  return hits ? sum / hits : 0.0;
}

}  // namespace

LoadSpec build_load_spec(const RunConfig& cfg, const EffectiveModel& model, const DiscreteOperators& ops) {
  const auto& s = ops.spaces;
  LoadSpec spec;
  for (const auto& smp : cfg.loads.samples) {
    LoadSample ls;
    ls.t = smp.t;
    ls.f1 = as_vec(smp.f1);
    ls.f2 = as_vec(smp.f2);
    ls.f3 = as_vec(smp.f3);
    ls.m1 = as_vec(smp.m1);
    ls.m2 = as_vec(smp.m2);
    ls.g = as_vec(smp.g);
    spec.samples.push_back(ls);
  }
  spec.t0 = as_vec(cfg.loads.t0);
  spec.b0 = as_vec(cfg.loads.b0);
  spec.b1 = as_vec(cfg.loads.b1);

  const double amp = cfg.loads.amplitude;
  const int nodes = s.n_nodes(), cells = s.grid.nx * s.grid.ny, nz = s.grid.nz;
  auto node_x = [&](int n) { return (n / s.grid.ny) * s.hx(); };
  auto node_y = [&](int n) { return (n % s.grid.ny) * s.hy(); };
  auto bending = [&](double scale) {
    return scale * interpolate_b(s, [](double x, double y) {
             const double w = 2 * kPi;
             const double sx = std::sin(w * x), cx = std::cos(w * x), sy = std::sin(w * y), cy = std::cos(w * y);
             return std::array<double, 4>{sx * sy, w * cx * sy, w * sx * cy, w * w * cx * cy};
           });
  };

  if (cfg.loads.preset == "eigenmode") {
    // Second vertical pressure mode, uniform in the plane: decays at 4 pi^2 K33 / M0.
    spec.t0 = Vec::Zero(cells * (nz + 1));
    for (int c = 0; c < cells; ++c)
      for (int kz = 0; kz <= nz; ++kz) {
        const double x3 = -0.5 + static_cast<double>(kz) / nz;
        spec.t0(s.p_dof(c, kz)) = amp * storage_at(model, ops, c, x3) * std::cos(2 * kPi * x3);
      }
  } else if (cfg.loads.preset == "bending_wave") {
    if (s.mode == PlateMode::Inertial)
      spec.b1 = bending(amp);
    else
      spec.samples.clear();
  } else if (cfg.loads.preset == "smooth") {
    std::mt19937 rng(cfg.loads.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // c[field][mode]: low plane modes (sin/cos in x and y), two time frequencies
    double c[6][4][2];
    for (auto& f : c)
      for (auto& m : f)
        for (double& v : m) v = u(rng);
    double tz[4];
    for (double& v : tz) v = u(rng);
    auto plane = [&](int f, double x, double y, double t) {
      const double w = 2 * kPi;
      const double modes[4] = {std::sin(w * x), std::cos(w * x), std::sin(w * y), std::cos(w * (x + y))};
      double v = 0;
      for (int m = 0; m < 4; ++m) v += modes[m] * (c[f][m][0] * std::cos(3 * t) + c[f][m][1] * std::sin(5 * t));
      return amp * v;
    };
    const double t_end = cfg.simulation.t_end;
    const int count = cfg.loads.sample_count > 0 ? cfg.loads.sample_count
                                                  : static_cast<int>(std::llround(t_end / cfg.simulation.dt));
    spec.samples.clear();
    for (int k = 0; k <= count; ++k) {
      const double t = t_end * k / count;
      LoadSample ls;
      ls.t = t;
      ls.f1 = Vec(nodes);
      ls.f2 = Vec(nodes);
      ls.f3 = Vec(nodes);
      for (int n = 0; n < nodes; ++n) {
        ls.f1(n) = plane(0, node_x(n), node_y(n), t);
        ls.f2(n) = plane(1, node_x(n), node_y(n), t);
        ls.f3(n) = plane(2, node_x(n), node_y(n), t);
      }
      ls.g = Vec(cells * (nz + 1));
      for (int cidx = 0; cidx < cells; ++cidx) {
        const double x = (cidx / s.grid.ny + 0.5) * s.hx(), y = (cidx % s.grid.ny + 0.5) * s.hy();
        for (int kz = 0; kz <= nz; ++kz) {
          const double x3 = -0.5 + static_cast<double>(kz) / nz;
          ls.g(s.p_dof(cidx, kz)) = plane(3, x, y, t) * (tz[0] + tz[1] * x3);
        }
      }
      spec.samples.push_back(ls);
    }
    spec.t0 = Vec(cells * (nz + 1));
    for (int cidx = 0; cidx < cells; ++cidx) {
      const double x = (cidx / s.grid.ny + 0.5) * s.hx(), y = (cidx % s.grid.ny + 0.5) * s.hy();
      for (int kz = 0; kz <= nz; ++kz) {
        const double x3 = -0.5 + static_cast<double>(kz) / nz;
        spec.t0(s.p_dof(cidx, kz)) = plane(4, x, y, 0.0) * (tz[2] + tz[3] * std::cos(kPi * (x3 + 0.5)));
      }
    }
    if (s.mode == PlateMode::Inertial) spec.b1 = bending(0.5 * amp);
  }
  return spec;
}

namespace {

json solid_material(int id) { return {{"id", id}, {"lambda", 1.0}, {"mu", 1.0}}; }

json base(const std::string& mode, double dt, double t_end, int nx, int ny, int nz) {
  return {{"simulation",
           {{"mode", mode}, {"dt", dt}, {"t_end", t_end}, {"grid", {{"nx", nx}, {"ny", ny}, {"nz", nz}}}}}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"homogeneous_plate", "poiseuille_layer", "eigenmode",   "smooth_loads",
          "inertial_conservative", "inertial_dissipative", "two_region"};
}

std::string preset_config(const std::string& name) {
  json j;
  if (name == "homogeneous_plate") {
    j = base("quasistatic", 0.01, 0.1, 4, 4, 2);
    j["material"] = {{"phases", {solid_material(0)}}};
    j["geometry"] = {{"resolution", 4}, {"cells", {{{"phase", 0}, {"kind", "full_solid"}}}}};
  } else if (name == "poiseuille_layer") {
    j = base("quasistatic", 0.01, 0.1, 4, 4, 2);
    j["material"] = {{"phases", {solid_material(0)}}};
    j["geometry"] = {{"resolution", 32}, {"cells", {{{"phase", 0}, {"kind", "layer"}, {"axis", 3}, {"size", 0.5}}}}};
  } else if (name == "eigenmode") {
    j = base("quasistatic", 0.01, 0.2, 8, 8, 8);
    j["material"] = {{"phases", {solid_material(1)}}};
    j["geometry"] = {{"resolution", 8}, {"cells", {{{"phase", 1}, {"kind", "channel"}, {"axis", 3}, {"size", 0.5}}}}};
    j["loads"] = {{"preset", "eigenmode"}};
  } else if (name == "smooth_loads") {
    j = base("quasistatic", 0.01, 0.2, 4, 4, 4);
    j["material"] = {{"phases", {solid_material(1)}}};
    j["geometry"] = {{"resolution", 8}, {"cells", {{{"phase", 1}, {"kind", "channel"}, {"axis", 3}, {"size", 0.5}}}}};
    j["loads"] = {{"preset", "smooth"}, {"seed", 7}};
  } else if (name == "inertial_conservative") {
    j = base("inertial", 0.01, 0.2, 8, 8, 2);
    j["material"] = {{"phases", {solid_material(0)}}};
    j["geometry"] = {{"resolution", 4}, {"cells", {{{"phase", 0}, {"kind", "full_solid"}}}}};
    j["loads"] = {{"preset", "bending_wave"}};
  } else if (name == "inertial_dissipative") {
    j = base("inertial", 0.01, 0.2, 4, 4, 4);
    j["material"] = {{"phases", {solid_material(0), solid_material(1)}}};
    j["geometry"] = {{"resolution", 8},
                     {"cells",
                      {{{"phase", 0}, {"kind", "full_solid"}},
                       {{"phase", 1}, {"kind", "channel"}, {"axis", 3}, {"size", 0.5}}}},
                     {"plate",
                      {{"regions",
                        {{{"column", {{{"lo", -0.5}, {"hi", 0.0}, {"phase", 1}}, {{"lo", 0.0}, {"hi", 0.5}, {"phase", 0}}}}}}}}}};
    j["loads"] = {{"preset", "smooth"}, {"seed", 3}};
  } else if (name == "two_region") {
    j = base("quasistatic", 0.01, 0.1, 4, 4, 4);
    j["material"] = {{"phases", {solid_material(0), solid_material(1)}}};
    j["geometry"] = {{"resolution", 8},
                     {"cells",
                      {{{"phase", 0}, {"kind", "full_solid"}},
                       {{"phase", 1}, {"kind", "channel"}, {"axis", 3}, {"size", 0.5}}}},
                     {"plate",
                      {{"regions",
                        {{{"x0", 0.0}, {"x1", 0.5}, {"column", {{{"phase", 1}}}}},
                         {{"x0", 0.5}, {"x1", 1.0}, {"column", {{{"phase", 0}}}}}}}}}};
    j["loads"] = {{"preset", "smooth"}, {"seed", 5}};
  } else {
    throw SchemaError("preset", "unknown preset '" + name + "'");
  }
  return j.dump(2) + "\n";
}

}  // namespace poroplate
