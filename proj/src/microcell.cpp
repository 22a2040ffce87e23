#include "poroplate/microcell.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>

namespace poroplate {

bool WindingInfo::contains(const Vec3& v, double tol) const {
  Vec3 r = v;
  for (int c = 0; c < rank; ++c) r -= basis.col(c).dot(v) * basis.col(c);
  return r.norm() <= tol * std::max(1.0, v.norm());
}

CellMicrostructure::CellMicrostructure(int n, std::vector<std::uint8_t> fluid, PhaseSpec phase)
    : n_(n), fluid_(std::move(fluid)), phase_(std::move(phase)) {}

std::size_t CellMicrostructure::voxel(int i, int j, int k) const {
  auto w = [this](int a) { return ((a % n_) + n_) % n_; };
  return (static_cast<std::size_t>(w(i)) * n_ + w(j)) * n_ + w(k);
}

std::size_t CellMicrostructure::fluid_count() const {
  return static_cast<std::size_t>(std::count(fluid_.begin(), fluid_.end(), std::uint8_t{1}));
}

double CellMicrostructure::fluid_fraction() const {
  return static_cast<double>(fluid_count()) / static_cast<double>(fluid_.size());
}

WindingInfo phase_winding(int n, const std::vector<std::uint8_t>& mask, std::uint8_t value,
                          int* components) {
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<std::array<int, 3>> unwrapped(total);
  std::vector<char> seen(total, 0);
  std::vector<Vec3> loops;
  int ncomp = 0;
  auto id = [n](int i, int j, int k) { return (static_cast<std::size_t>(i) * n + j) * n + k; };

  for (std::size_t s = 0; s < total; ++s) {
    if (seen[s] || mask[s] != value) continue;
    ++ncomp;
    seen[s] = 1;
    unwrapped[s] = {static_cast<int>(s / (n * n)), static_cast<int>((s / n) % n),
                    static_cast<int>(s % n)};
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      const auto u = unwrapped[v];
      for (int d = 0; d < 3; ++d)
        for (int step : {-1, 1}) {
          auto cand = u;
          cand[d] += step;
          const int i = ((cand[0] % n) + n) % n, j = ((cand[1] % n) + n) % n,
                    k = ((cand[2] % n) + n) % n;
          const std::size_t w = id(i, j, k);
          if (mask[w] != value) continue;
          if (!seen[w]) {
            seen[w] = 1;
            unwrapped[w] = cand;
            queue.push_back(w);
          } else {
            Vec3 diff((cand[0] - unwrapped[w][0]) / n, (cand[1] - unwrapped[w][1]) / n,
                      (cand[2] - unwrapped[w][2]) / n);
            if (diff.squaredNorm() > 0.5) loops.push_back(diff);
          }
        }
    }
  }
  if (components) *components = ncomp;

  WindingInfo info;
  if (loops.empty()) return info;
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(loops.size()));
  for (std::size_t c = 0; c < loops.size(); ++c) {
    m.col(static_cast<Eigen::Index>(c)) = loops[c];
    for (int d = 0; d < 3; ++d)
      if (loops[c](d) != 0.0) info.spans[d] = true;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  for (Eigen::Index c = 0; c < sv.size(); ++c)
    if (sv(c) > 1e-8 * sv(0)) info.basis.col(info.rank++) = svd.matrixU().col(c);
  return info;
}

namespace {

std::vector<std::uint8_t> generate(int n, const GeometrySpec& g) {
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<std::uint8_t> m(total, 0);
  using K = GeometrySpec::Kind;
  if (g.kind == K::Mask) {
    if (g.mask.size() != total)
      throw BadMask("mask has " + std::to_string(g.mask.size()) + " entries, expected " +
                    std::to_string(total));
    for (std::size_t s = 0; s < total; ++s) {
      if (g.mask[s] > 1) throw BadMask("mask entries must be 0 or 1");
      m[s] = g.mask[s];
    }
    return m;
  }
  if (g.kind == K::FullSolid) return m;
  if ((g.kind == K::Layer || g.kind == K::Channel) && (g.axis < 1 || g.axis > 3))
    throw BadMask("axis must be 1, 2 or 3");
  if (!(g.size >= 0.0)) throw BadMask("geometry size must be nonnegative");

  auto band = [n](double width) {
    const int nf = std::clamp(static_cast<int>(std::lround(width * n)), 0, n);
    const int start = (n - nf) / 2;
    return std::pair<int, int>(start, start + nf);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int idx[3] = {i, j, k};
        bool fluid = false;
        if (g.kind == K::Layer) {
          auto [a, b] = band(g.size);
          const int t = idx[g.axis - 1];
          fluid = t >= a && t < b;
        } else if (g.kind == K::Channel) {
          auto [a, b] = band(g.size);
          fluid = true;
          for (int d = 0; d < 3; ++d)
            if (d != g.axis - 1) fluid = fluid && idx[d] >= a && idx[d] < b;
        } else {
          double r2 = 0;
          for (int d = 0; d < 3; ++d) {
            const double c = (idx[d] + 0.5) / n - 0.5;
            r2 += c * c;
          }
          fluid = r2 < g.size * g.size;
        }
        m[(static_cast<std::size_t>(i) * n + j) * n + k] = fluid ? 1 : 0;
      }
  return m;
}

}  // namespace

CellMicrostructure build_cell(int resolution, const GeometrySpec& geometry, const PhaseSpec& phase) {
  if (resolution < 2) throw BadMask("resolution must be at least 2");
  auto mask = generate(resolution, geometry);
  CellMicrostructure cell(resolution, std::move(mask), phase);
  if (cell.fluid_count() == cell.fluid_mask().size()) throw EmptySolid("no solid voxel");
  const auto rep = check_geometry(cell);
  if (!rep.solid_connected) throw DisconnectedSolid(std::to_string(rep.solid_components) + " solid components");
  if (!rep.fluid_connected) throw DisconnectedFluid(std::to_string(rep.fluid_components) + " fluid components");
  return cell;
}

GeometryReport check_geometry(const CellMicrostructure& cell) {
  GeometryReport r;
  const int n = cell.resolution();
  r.fluid_voxels = cell.fluid_count();
  r.solid_voxels = cell.fluid_mask().size() - r.fluid_voxels;
  r.fluid_fraction = static_cast<double>(r.fluid_voxels) / static_cast<double>(cell.fluid_mask().size());
  r.solid_winding = phase_winding(n, cell.fluid_mask(), 0, &r.solid_components);
  r.fluid_winding = phase_winding(n, cell.fluid_mask(), 1, &r.fluid_components);
  r.solid_connected = r.solid_components == 1;
  r.fluid_connected = r.fluid_components <= 1;
  r.percolation = r.fluid_winding.spans;
  for (int d = 0; d < 3; ++d) r.solid_wraps[d] = r.solid_winding.contains(Vec3::Unit(d));
  return r;
}

std::vector<std::uint8_t> read_mask_file(const std::string& path, int* n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mask file " + path);
  unsigned char hdr[8];
  if (!in.read(reinterpret_cast<char*>(hdr), 8)) throw BadMask("mask file shorter than header");
  std::uint64_t nn = 0;
  for (int b = 7; b >= 0; --b) nn = (nn << 8) | hdr[b];
  if (nn < 2 || nn > 1024) throw BadMask("mask resolution out of range: " + std::to_string(nn));
  const std::size_t total = static_cast<std::size_t>(nn * nn * nn);
  std::vector<std::uint8_t> m(total);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(in.gcount()) != total) throw BadMask("mask payload shorter than N^3");
  char extra;
  if (in.read(&extra, 1)) throw BadMask("mask payload longer than N^3");
  for (auto v : m)
    if (v > 1) throw BadMask("mask entries must be 0 or 1");
  *n = static_cast<int>(nn);
  return m;
}

void write_mask_file(const std::string& path, int n, const std::vector<std::uint8_t>& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write mask file " + path);
  std::uint64_t nn = static_cast<std::uint64_t>(n);
  unsigned char hdr[8];
  for (int b = 0; b < 8; ++b) hdr[b] = static_cast<unsigned char>((nn >> (8 * b)) & 0xff);
  out.write(reinterpret_cast<const char*>(hdr), 8);
  out.write(reinterpret_cast<const char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
  if (!out) throw IoError("short write to " + path);
}

PlatePhaseMap build_phase_map(const PlatePhaseMap& layout) {
  constexpr double tol = 1e-12;
  PlatePhaseMap map = layout;
  if (!(map.lx > 0 && map.ly > 0)) throw RegionGap("plate extent must be positive");
  if (map.regions.empty()) throw RegionGap("no plane regions");
  double area = 0;
  for (std::size_t r = 0; r < map.regions.size(); ++r) {
    auto& reg = map.regions[r];
    if (!(reg.x1 > reg.x0 && reg.y1 > reg.y0) || reg.x0 < -tol || reg.y0 < -tol ||
        reg.x1 > map.lx + tol || reg.y1 > map.ly + tol)
      throw RegionGap("region " + std::to_string(r) + " is empty or outside the plate");
    area += (reg.x1 - reg.x0) * (reg.y1 - reg.y0);
    for (std::size_t q = 0; q < r; ++q) {
      const auto& o = map.regions[q];
      const double wx = std::min(reg.x1, o.x1) - std::max(reg.x0, o.x0);
      const double wy = std::min(reg.y1, o.y1) - std::max(reg.y0, o.y0);
      if (wx > tol && wy > tol)
        throw OverlappingRegions("regions " + std::to_string(q) + " and " + std::to_string(r));
    }
    if (reg.column.empty()) throw GapInColumn("region " + std::to_string(r) + " has no layers");
    std::sort(reg.column.begin(), reg.column.end(),
              [](const LayerSpec& a, const LayerSpec& b) { return a.lo < b.lo; });
    double at = -0.5;
    for (const auto& l : reg.column) {
      if (!(l.hi > l.lo)) throw OverlappingIntervals("empty interval in region " + std::to_string(r));
      if (l.lo > at + tol) throw GapInColumn("gap at x3=" + std::to_string(at) + " in region " + std::to_string(r));
      if (l.lo < at - tol)
        throw OverlappingIntervals("overlap at x3=" + std::to_string(l.lo) + " in region " + std::to_string(r));
      if (!map.densities.count(l.phase)) throw UnknownPhase("phase " + std::to_string(l.phase));
      at = l.hi;
    }
    if (std::abs(at - 0.5) > tol) {
      if (at < 0.5) throw GapInColumn("column of region " + std::to_string(r) + " ends below x3=1/2");
      throw OverlappingIntervals("column of region " + std::to_string(r) + " exceeds x3=1/2");
    }
  }
  if (std::abs(area - map.lx * map.ly) > 1e-9 * map.lx * map.ly) throw RegionGap("regions do not cover the plate");
  for (const auto& [id, d] : map.densities)
    if (!(d.fluid > 0 && d.solid > 0)) throw SchemaError("densities", "must be positive for phase " + std::to_string(id));
  return map;
}

}  // namespace poroplate
