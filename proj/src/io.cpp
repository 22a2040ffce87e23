#include "poroplate/io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace poroplate {

using json = nlohmann::json;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) x = __builtin_bswap64(x);
  return x;
}

}  // namespace

void write_f64_file(const std::string& path, const std::vector<double>& data) {
  std::vector<std::uint64_t> raw(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) raw[i] = to_little(std::bit_cast<std::uint64_t>(data[i]));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 8));
  if (!out) throw IoError("write failed for " + path);
}

std::vector<double> read_f64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot read " + path);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 8 != 0) throw IoError(path + ": size is not a multiple of 8");
  std::vector<std::uint64_t> raw(bytes / 8);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed for " + path);
  std::vector<double> data(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) data[i] = std::bit_cast<double>(to_little(raw[i]));
  return data;
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) { write_text_file(path, ledger.to_csv()); }

Snapshot make_snapshot(const DiscreteOperators& ops, const PlateState& s, int step) {
  Snapshot snap;
  snap.step = step;
  snap.time = s.t;
  snap.mode = ops.spaces.mode;
  snap.grid = ops.spaces.grid;
  snap.lx = ops.spaces.lx;
  snap.ly = ops.spaces.ly;
  snap.u = s.u;
  snap.p = full_pressure(ops, s.p);
  if (snap.mode == PlateMode::Inertial) snap.v = s.v;
  return snap;
}

void write_snapshot(const std::string& stem, const Snapshot& snap) {
  std::vector<double> data;
  json blocks = json::array();
  auto put = [&](const char* name, const Vec& v) {
    blocks.push_back({{"name", name}, {"offset", data.size()}, {"count", v.size()}});
    data.insert(data.end(), v.data(), v.data() + v.size());
  };
  put("u", snap.u);
  put("p", snap.p);
  if (snap.mode == PlateMode::Inertial) put("v", snap.v);

  const int nodes = snap.grid.nx * snap.grid.ny;
  json j = {{"format", "poroplate-snapshot"},
            {"version", 1},
            {"step", snap.step},
            {"time", snap.time},
            {"mode", snap.mode == PlateMode::Inertial ? "inertial" : "quasistatic"},
            {"grid", {{"nx", snap.grid.nx}, {"ny", snap.grid.ny}, {"nz", snap.grid.nz}}},
            {"extent", {{"lx", snap.lx}, {"ly", snap.ly}}},
            {"layout",
             {{"node", "ix * ny + iy, x = ix * lx / nx, y = iy * ly / ny"},
              {"u", "a at 2 * node + c, then b at 2 * nodes + 4 * node + k with k = value, dx, dy, dxy"},
              {"p", "cell * (nz + 1) + kz with cell = ix * ny + iy and x3 = -1/2 + kz / nz"},
              {"v", "d b / dt, 4 * node + k"},
              {"n_a", 2 * nodes},
              {"n_b", 4 * nodes}}},
            {"file", stem.substr(stem.find_last_of('/') + 1) + ".bin"},
            {"dtype", "f64"},
            {"byte_order", "little"},
            {"blocks", blocks}};
  write_f64_file(stem + ".bin", data);
  write_text_file(stem + ".json", j.dump(2) + "\n");
}

Snapshot read_snapshot(const std::string& stem) {
  json j;
  try {
    j = json::parse(read_text_file(stem + ".json"));
  } catch (const json::exception& e) {
    throw IoError(stem + ".json: " + e.what());
  }
  const auto data = read_f64_file(stem + ".bin");
  Snapshot snap;
  try {
    if (j.at("format") != "poroplate-snapshot" || j.at("version") != 1)
      throw IoError(stem + ".json: unsupported format");
    snap.step = j.at("step");
    snap.time = j.at("time");
    snap.mode = j.at("mode") == "inertial" ? PlateMode::Inertial : PlateMode::Quasistatic;
    snap.grid = {j.at("grid").at("nx"), j.at("grid").at("ny"), j.at("grid").at("nz")};
    snap.lx = j.at("extent").at("lx");
    snap.ly = j.at("extent").at("ly");
    std::size_t total = 0;
    for (const auto& b : j.at("blocks")) {
      const std::size_t off = b.at("offset"), n = b.at("count");
      if (off + n > data.size()) throw IoError(stem + ".bin: block " + b.at("name").get<std::string>() + " out of range");
      total += n;
      Vec v = Eigen::Map<const Vec>(data.data() + off, static_cast<Eigen::Index>(n));
      const std::string name = b.at("name");
      if (name == "u") snap.u = v;
      else if (name == "p") snap.p = v;
      else if (name == "v") snap.v = v;
    }
    if (total != data.size()) throw IoError(stem + ".bin: size does not match the block table");
  } catch (const json::exception& e) {
    throw IoError(stem + ".json: " + e.what());
  }
  const int nodes = snap.grid.nx * snap.grid.ny;
  if (snap.u.size() != 6 * nodes || snap.p.size() != nodes * (snap.grid.nz + 1))
    throw IoError(stem + ": block sizes do not match the grid");
  return snap;
}

SampledField snapshot_displacement(const Snapshot& snap, int nz) {
  const auto s = build_spaces(snap.grid, snap.mode, snap.lx, snap.ly);
  return plate_displacement_field(s, snap.u, nz);
}

void write_corrector_dump(const std::string& stem, const CorrectorSet& cs) {
  std::vector<double> data;
  json blocks = json::array();
  auto put = [&](const std::string& name, const double* p, std::size_t n, json shape) {
    blocks.push_back({{"name", name}, {"offset", data.size()}, {"count", n}, {"shape", shape}});
    data.insert(data.end(), p, p + n);
  };
  auto put_ids = [&](const std::string& name, const std::vector<int>& ids) {
    std::vector<double> d(ids.begin(), ids.end());
    put(name, d.data(), d.size(), {d.size()});
  };
  auto put_field = [&](const std::string& name, const Vec& v, int width) {
    put(name, v.data(), static_cast<std::size_t>(v.size()), {v.size() / width, width});
  };
  if (cs.solid) {
    put_ids("solid_nodes", cs.solid->nodes());
    for (const auto& e : cs.elastic) {
      const std::string ij = std::to_string(e.i) + std::to_string(e.j);
      put_field("w_" + ij, e.w, 3);
      put("g_" + ij, e.g.data(), 3, {3});
    }
    if (cs.biot) {
      put_field("w_biot", cs.biot->w, 3);
      put("g_biot", cs.biot->g.data(), 3, {3});
    }
  }
  if (cs.fluid) {
    put_ids("velocity_nodes", cs.fluid->velocity_node_ids());
    put_ids("pressure_nodes", cs.fluid->pressure_node_ids());
    for (const auto& st : cs.stokes) {
      const std::string d = std::to_string(st.direction);
      put_field("q_" + d, st.q, 3);
      put_field("pi_" + d, st.pi, 1);
    }
  }
  json j = {{"format", "poroplate-correctors"},
            {"version", 1},
            {"phase", cs.phase_id},
            {"biot_status", cs.biot_status},
            {"file", stem.substr(stem.find_last_of('/') + 1) + ".bin"},
            {"dtype", "f64"},
            {"byte_order", "little"},
            {"blocks", blocks}};
  write_f64_file(stem + ".bin", data);
  write_text_file(stem + ".json", j.dump(2) + "\n");
}

}  // namespace poroplate
