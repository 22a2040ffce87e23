#include "poroplate/effective.hpp"

#include "poroplate/mandel.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace poroplate {

using nlohmann::json;

namespace {

Vec corrector_vector(const CorrectorSet& cs, int i, int j) {
  const ElasticCorrector* c = cs.find(i, j);
  if (!c) throw MissingCorrector("elastic corrector (" + std::to_string(i) + "," + std::to_string(j) + ")");
  return cs.solid->pack(c->w, c->g);
}

double sym_defect(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

MembraneTensor membrane_tensor(const CorrectorSet& cs) {
  if (!cs.solid) throw MissingCorrector("solid cell system");
  const auto& sys = *cs.solid;
  const Mat6& dm = sys.cell().phase().elasticity.matrix();
  // In-plane Mandel basis and the corrector of each basis strain.
  std::array<Vec6, 3> basis;
  std::array<Vec, 3> corr;
  basis[0] = mandel::dyad3(0, 0);
  basis[1] = mandel::dyad3(1, 1);
  basis[2] = mandel::kSqrt2 * mandel::dyad3(0, 1);
  corr[0] = corrector_vector(cs, 1, 1);
  corr[1] = corrector_vector(cs, 2, 2);
  corr[2] = mandel::kSqrt2 * corrector_vector(cs, 1, 2);

  MembraneTensor out;
  out.phase_id = cs.phase_id;
  Eigen::Matrix3d a;
  for (int r = 0; r < 3; ++r) {
    const Vec6 stress = sys.stress_integral(corr[r]) + sys.solid_volume() * dm * basis[r];
    for (int c = 0; c < 3; ++c) a(r, c) = stress.dot(basis[c]);
  }
  out.symmetry_defect = sym_defect(a);
  out.a = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(out.a);
  out.nu = es.eigenvalues()(0);
  out.upper = es.eigenvalues()(2);
  return out;
}

PhaseCoefficients phase_coefficients(const CorrectorSet& cs) {
  if (!cs.solid) throw MissingCorrector("solid cell system");
  const auto& sys = *cs.solid;
  PhaseCoefficients pc;
  pc.phase_id = cs.phase_id;
  pc.fluid_fraction = sys.cell().fluid_fraction();
  pc.membrane = membrane_tensor(cs);
  const bool fluid = sys.cell().fluid_count() > 0;

  for (int i = 1; i <= 3; ++i)
    for (int j = i; j <= 3; ++j) {
      const double c = fluid ? -sys.fluid_trace(corrector_vector(cs, i, j)) : 0.0;
      pc.c_h(i - 1, j - 1) = pc.c_h(j - 1, i - 1) = c;
    }

  pc.biot_available = cs.biot.has_value();
  pc.biot_status = cs.biot_status;
  if (cs.biot) {
    const Vec x = sys.pack(cs.biot->w, cs.biot->g);
    pc.b_h = mandel::to_sym3(sys.stress_integral(x));
    pc.m0 = sys.fluid_trace(x);
    pc.theta = pc.fluid_fraction * Mat3::Identity() - pc.b_h;
  }

  if (fluid) {
    if (!cs.fluid || cs.stokes.size() != 3) throw MissingCorrector("Stokes cell solutions");
    const auto& fl = *cs.fluid;
    Mat3 k, d, s;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const auto& qa = cs.stokes[a];
        const auto& qb = cs.stokes[b];
        // flux(q^b, a) = (grad q^a, grad q^b) + stabilization(pi^a, pi^b, b)
        k(a, b) = fl.flux(qb.q, a + 1);
        d(a, b) = fl.dissipation(qa.q, qb.q);
        s(a, b) = fl.stabilization(qa.pi, qb.pi, b + 1);
      }
    pc.k = 0.5 * (k + k.transpose());
    pc.k_dissipation = 0.5 * (d + d.transpose());
    pc.k_stabilization = 0.5 * (s + s.transpose());
  }
  return pc;
}

bool RegionCoefficients::elastic_only() const {
  for (const auto& l : layers)
    if (l.fluid_fraction > 0) return false;
  return true;
}

double thickness_moment(double lo, double hi, int k) {
  return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
}

PlateTensorField assemble_plate_tensor(const PlatePhaseMap& map,
                                       const std::map<int, MembraneTensor>& tensors) {
  PlateTensorField field;
  for (const auto& region : map.regions) {
    Mat6 a = Mat6::Zero();
    for (const auto& l : region.column) {
      auto it = tensors.find(l.phase);
      if (it == tensors.end()) throw UnknownPhase("no membrane tensor for phase " + std::to_string(l.phase));
      const Eigen::Matrix3d& t = it->second.a;
      const double m0 = thickness_moment(l.lo, l.hi, 0), m1 = thickness_moment(l.lo, l.hi, 1),
                   m2 = thickness_moment(l.lo, l.hi, 2);
      a.topLeftCorner<3, 3>() += m0 * t;
      a.topRightCorner<3, 3>() -= m1 * t;
      a.bottomLeftCorner<3, 3>() -= m1 * t;
      a.bottomRightCorner<3, 3>() += m2 * t;
    }
    field.a_hom.push_back(a);
  }
  return field;
}

namespace {
const PhaseCoefficients& lookup(const std::map<int, PhaseCoefficients>& phases, int id) {
  auto it = phases.find(id);
  if (it == phases.end()) throw UnknownPhase("no coefficients for phase " + std::to_string(id));
  return it->second;
}
}  // namespace

CouplingStorageField assemble_coupling_storage(const std::map<int, PhaseCoefficients>& phases,
                                               const PlatePhaseMap& map) {
  CouplingStorageField f;
  for (const auto& region : map.regions) {
    auto& th = f.theta.emplace_back();
    auto& ch = f.c_h.emplace_back();
    auto& m0 = f.m0.emplace_back();
    for (const auto& l : region.column) {
      const auto& pc = lookup(phases, l.phase);
      th.push_back(pc.theta);
      ch.push_back(pc.c_h);
      m0.push_back(pc.m0);
    }
  }
  return f;
}

std::vector<std::vector<Mat3>> assemble_permeability(const std::map<int, PhaseCoefficients>& phases,
                                                     const PlatePhaseMap& map) {
  std::vector<std::vector<Mat3>> k;
  for (const auto& region : map.regions) {
    auto& kr = k.emplace_back();
    for (const auto& l : region.column) kr.push_back(lookup(phases, l.phase).k);
  }
  return k;
}

EffectiveModel assemble_model(const PlatePhaseMap& map, const std::map<int, PhaseCoefficients>& phases) {
  EffectiveModel model;
  model.lx = map.lx;
  model.ly = map.ly;
  std::map<int, MembraneTensor> membranes;
  for (const auto& [id, pc] : phases) membranes[id] = pc.membrane;
  for (const auto& region : map.regions)
    for (const auto& l : region.column) {
      if (!phases.count(l.phase)) throw UnknownPhase("no coefficients for phase " + std::to_string(l.phase));
      model.phases[l.phase] = phases.at(l.phase);
    }
  const auto plate = assemble_plate_tensor(map, membranes);
  for (std::size_t r = 0; r < map.regions.size(); ++r) {
    const auto& region = map.regions[r];
    RegionCoefficients rc;
    rc.x0 = region.x0;
    rc.y0 = region.y0;
    rc.x1 = region.x1;
    rc.y1 = region.y1;
    rc.a_hom = plate.a_hom[r];
    for (const auto& l : region.column) {
      const auto& pc = phases.at(l.phase);
      const auto& rho = map.densities.at(l.phase);
      LayerCoefficients lc;
      lc.lo = l.lo;
      lc.hi = l.hi;
      lc.phase = l.phase;
      lc.fluid_fraction = pc.fluid_fraction;
      lc.theta = pc.theta;
      lc.b_h = pc.b_h;
      lc.c_h = pc.c_h;
      lc.m0 = pc.m0;
      lc.k = pc.k;
      rc.kappa += (l.hi - l.lo) * (rho.fluid * pc.fluid_fraction + rho.solid * (1.0 - pc.fluid_fraction));
      rc.layers.push_back(lc);
    }
    model.regions.push_back(std::move(rc));
  }
  return model;
}

// ---------------------------------------------------------------- report

bool TensorReport::passed() const {
  for (const auto& c : checks)
    if (c.status == "fail") return false;
  return true;
}

std::string TensorReport::to_json() const {
  json j;
  j["passed"] = passed();
  j["nu_a_hom"] = nu_a_hom;
  j["max_eig_a_hom"] = max_a_hom;
  j["nu_m0"] = nu_m0 ? json(*nu_m0) : json(nullptr);
  json arr = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["scope"] = c.scope;
    e["value"] = c.value;
    e["tolerance"] = c.tolerance;
    e["status"] = c.status;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2);
}

TensorReport verify_tensor_properties(const EffectiveModel& model, const TensorTolerances& tol) {
  TensorReport rep;
  auto add = [&](std::string name, std::string scope, double value, double t, bool ok, std::string note = "") {
    rep.checks.push_back({std::move(name), std::move(scope), value, t, ok ? "pass" : "fail", std::move(note)});
  };
  auto add_status = [&](std::string name, std::string scope, std::string status, std::string note) {
    rep.checks.push_back({std::move(name), std::move(scope), 0.0, 0.0, std::move(status), std::move(note)});
  };

  rep.nu_a_hom = std::numeric_limits<double>::infinity();
  rep.max_a_hom = 0.0;
  for (std::size_t r = 0; r < model.regions.size(); ++r) {
    const auto& rc = model.regions[r];
    const std::string scope = "region " + std::to_string(r);
    add("a_hom_symmetry", scope, sym_defect(rc.a_hom), tol.symmetry, sym_defect(rc.a_hom) <= tol.symmetry);
    Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (rc.a_hom + rc.a_hom.transpose()));
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(5);
    rep.nu_a_hom = std::min(rep.nu_a_hom, lo);
    rep.max_a_hom = std::max(rep.max_a_hom, hi);
    add("a_hom_positive_definite", scope, lo, 0.0, std::isfinite(lo) && lo > 0,
        "largest eigenvalue " + std::to_string(hi));
    add("kappa_positive", scope, rc.kappa, 0.0, rc.kappa > 0);
  }
  if (model.regions.empty()) rep.nu_a_hom = 0.0;

  for (const auto& [id, pc] : model.phases) {
    const std::string scope = "phase " + std::to_string(id);
    const bool fluid = pc.fluid_fraction > 0;
    add("membrane_symmetry", scope, pc.membrane.symmetry_defect, tol.duality,
        pc.membrane.symmetry_defect <= tol.duality * std::max(1.0, pc.membrane.upper));
    add("membrane_positive_definite", scope, pc.membrane.nu, 0.0, pc.membrane.nu > 0);
    if (!pc.biot_available) {
      add_status("coupling_duality", scope, "unavailable", pc.biot_status);
      add_status("storage_positive", scope, "unavailable", pc.biot_status);
    } else if (!fluid) {
      const double z = std::max({pc.b_h.norm(), pc.c_h.norm(), std::abs(pc.m0)});
      add("coupling_zero_without_fluid", scope, z, tol.duality, z <= tol.duality);
      add_status("storage_positive", scope, "vacuous", "no fluid");
    } else {
      const double dual = (pc.b_h - pc.c_h).norm();
      add("coupling_duality", scope, dual, tol.duality, dual <= tol.duality);
      add("coupling_symmetry", scope, sym_defect(pc.b_h), tol.duality, sym_defect(pc.b_h) <= tol.duality);
      add("storage_positive", scope, pc.m0, 0.0, pc.m0 > 0);
      rep.nu_m0 = rep.nu_m0 ? std::min(*rep.nu_m0, pc.m0) : pc.m0;
    }
    if (!fluid) {
      add("permeability_zero_without_fluid", scope, pc.k.norm(), 0.0, pc.k.norm() == 0.0);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Mat3> ek(pc.k);
    const Vec3 ev = ek.eigenvalues();
    const double kmax = std::max(ev(2), 0.0);
    add("permeability_psd", scope, ev(0), 0.0, ev(0) >= -tol.permeability_energy,
        "eigenvalues " + std::to_string(ev(0)) + " " + std::to_string(ev(1)) + " " + std::to_string(ev(2)));
    int degenerate = 0;
    for (int a = 0; a < 3; ++a) degenerate += std::abs(ev(a)) <= tol.permeability_energy * std::max(1.0, kmax) ? 1 : 0;
    if (degenerate > 0)
      add_status("permeability_degenerate_axes", scope, "degenerate axis",
                 std::to_string(degenerate) + " eigenvalue(s) at zero; flow cannot cross the solid there");
    const double ed = (pc.k - pc.k_dissipation).norm();
    add("permeability_energy", scope, ed, tol.permeability_energy, ed <= tol.permeability_energy,
        "stabilization remainder " + std::to_string(pc.k_stabilization.norm()));
  }
  return rep;
}

// ---------------------------------------------------------------- export

namespace {

static_assert(std::endian::native == std::endian::little, "binary blocks are written in host order");

struct BlockWriter {
  std::vector<double> data;
  json put(const double* p, std::size_t n) {
    json b = {{"offset", data.size()}, {"count", n}};
    data.insert(data.end(), p, p + n);
    return b;
  }
  template <typename M> json put(const M& m) {
    Eigen::Matrix<double, M::RowsAtCompileTime, M::ColsAtCompileTime, Eigen::RowMajor> rm = m;
    json b = put(rm.data(), static_cast<std::size_t>(rm.size()));
    b["shape"] = {m.rows(), m.cols()};
    return b;
  }
};

struct BlockReader {
  std::vector<double> data;
  template <typename M> M get(const json& b) const {
    M m;
    const std::size_t off = b.at("offset").get<std::size_t>(), n = b.at("count").get<std::size_t>();
    if (n != static_cast<std::size_t>(m.size()) || off + n > data.size())
      throw IoError("model block out of range or of the wrong size");
    Eigen::Matrix<double, M::RowsAtCompileTime, M::ColsAtCompileTime, Eigen::RowMajor> rm;
    std::copy(data.begin() + off, data.begin() + off + n, rm.data());
    m = rm;
    return m;
  }
};

}  // namespace

void export_model(const EffectiveModel& model, const std::string& stem) {
  BlockWriter bw;
  json j;
  j["format"] = "poroplate-effective-model";
  j["version"] = 1;
  j["lx"] = model.lx;
  j["ly"] = model.ly;
  json regions = json::array();
  for (const auto& rc : model.regions) {
    json r = {{"x0", rc.x0}, {"y0", rc.y0}, {"x1", rc.x1}, {"y1", rc.y1}, {"kappa", rc.kappa}};
    r["a_hom"] = bw.put(rc.a_hom);
    json layers = json::array();
    for (const auto& l : rc.layers) {
      json lj = {{"lo", l.lo}, {"hi", l.hi}, {"phase", l.phase}, {"fluid_fraction", l.fluid_fraction}, {"m0", l.m0}};
      lj["theta"] = bw.put(l.theta);
      lj["b_h"] = bw.put(l.b_h);
      lj["c_h"] = bw.put(l.c_h);
      lj["k"] = bw.put(l.k);
      layers.push_back(lj);
    }
    r["layers"] = layers;
    regions.push_back(r);
  }
  j["regions"] = regions;
  json phases = json::array();
  for (const auto& [id, pc] : model.phases) {
    json p = {{"id", id},
              {"fluid_fraction", pc.fluid_fraction},
              {"m0", pc.m0},
              {"biot_available", pc.biot_available},
              {"biot_status", pc.biot_status},
              {"membrane_symmetry_defect", pc.membrane.symmetry_defect}};
    p["membrane"] = bw.put(pc.membrane.a);
    p["b_h"] = bw.put(pc.b_h);
    p["c_h"] = bw.put(pc.c_h);
    p["theta"] = bw.put(pc.theta);
    p["k"] = bw.put(pc.k);
    p["k_dissipation"] = bw.put(pc.k_dissipation);
    p["k_stabilization"] = bw.put(pc.k_stabilization);
    phases.push_back(p);
  }
  j["phases"] = phases;
  j["blocks"] = {{"file", stem.substr(stem.find_last_of('/') + 1) + ".bin"},
                 {"dtype", "f64"},
                 {"byte_order", "little"},
                 {"count", bw.data.size()}};

  std::ofstream bin(stem + ".bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw IoError("cannot write " + stem + ".bin");
  bin.write(reinterpret_cast<const char*>(bw.data.data()), static_cast<std::streamsize>(bw.data.size() * sizeof(double)));
  std::ofstream meta(stem + ".json", std::ios::trunc);
  if (!meta) throw IoError("cannot write " + stem + ".json");
  meta << j.dump(2) << "\n";
  if (!bin || !meta) throw IoError("write failed for " + stem);
}

EffectiveModel import_model(const std::string& stem) {
  std::ifstream meta(stem + ".json");
  if (!meta) throw IoError("cannot read " + stem + ".json");
  json j;
  try {
    meta >> j;
  } catch (const json::exception& e) {
    throw IoError(stem + ".json: " + e.what());
  }
  BlockReader br;
  {
    std::ifstream bin(stem + ".bin", std::ios::binary | std::ios::ate);
    if (!bin) throw IoError("cannot read " + stem + ".bin");
    const auto bytes = static_cast<std::size_t>(bin.tellg());
    if (bytes % sizeof(double) != 0) throw IoError(stem + ".bin: size is not a multiple of 8");
    br.data.resize(bytes / sizeof(double));
    bin.seekg(0);
    bin.read(reinterpret_cast<char*>(br.data.data()), static_cast<std::streamsize>(bytes));
  }
  EffectiveModel model;
  try {
    if (j.at("format") != "poroplate-effective-model" || j.at("version") != 1)
      throw IoError(stem + ".json: unsupported format");
    if (j.at("blocks").at("count").get<std::size_t>() != br.data.size())
      throw IoError(stem + ".bin: block count does not match metadata");
    model.lx = j.at("lx");
    model.ly = j.at("ly");
    for (const auto& r : j.at("regions")) {
      RegionCoefficients rc;
      rc.x0 = r.at("x0");
      rc.y0 = r.at("y0");
      rc.x1 = r.at("x1");
      rc.y1 = r.at("y1");
      rc.kappa = r.at("kappa");
      rc.a_hom = br.get<Mat6>(r.at("a_hom"));
      for (const auto& lj : r.at("layers")) {
        LayerCoefficients l;
        l.lo = lj.at("lo");
        l.hi = lj.at("hi");
        l.phase = lj.at("phase");
        l.fluid_fraction = lj.at("fluid_fraction");
        l.m0 = lj.at("m0");
        l.theta = br.get<Mat3>(lj.at("theta"));
        l.b_h = br.get<Mat3>(lj.at("b_h"));
        l.c_h = br.get<Mat3>(lj.at("c_h"));
        l.k = br.get<Mat3>(lj.at("k"));
        rc.layers.push_back(l);
      }
      model.regions.push_back(std::move(rc));
    }
    for (const auto& p : j.at("phases")) {
      PhaseCoefficients pc;
      pc.phase_id = p.at("id");
      pc.fluid_fraction = p.at("fluid_fraction");
      pc.m0 = p.at("m0");
      pc.biot_available = p.at("biot_available");
      pc.biot_status = p.at("biot_status");
      pc.membrane.phase_id = pc.phase_id;
      pc.membrane.a = br.get<Eigen::Matrix3d>(p.at("membrane"));
      pc.membrane.symmetry_defect = p.at("membrane_symmetry_defect");
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(pc.membrane.a);
      pc.membrane.nu = es.eigenvalues()(0);
      pc.membrane.upper = es.eigenvalues()(2);
      pc.b_h = br.get<Mat3>(p.at("b_h"));
      pc.c_h = br.get<Mat3>(p.at("c_h"));
      pc.theta = br.get<Mat3>(p.at("theta"));
      pc.k = br.get<Mat3>(p.at("k"));
      pc.k_dissipation = br.get<Mat3>(p.at("k_dissipation"));
      pc.k_stabilization = br.get<Mat3>(p.at("k_stabilization"));
      model.phases[pc.phase_id] = pc;
    }
  } catch (const json::exception& e) {
    throw IoError(stem + ".json: " + e.what());
  }
  return model;
}

}  // namespace poroplate
