#pragma once

#include "poroplate/cellsolve.hpp"
#include "poroplate/kinematics.hpp"
#include "poroplate/plate.hpp"

#include <string>
#include <vector>

namespace poroplate {

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Raw little-endian f64 array.
void write_f64_file(const std::string& path, const std::vector<double>& data);
std::vector<double> read_f64_file(const std::string& path);

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);

// Plate state dump: <stem>.json sidecar and <stem>.bin with the blocks
// u (a then b DOFs), p (full pressure grid, removed DOFs as zero) and,
// in inertial mode, v.
struct Snapshot {
  int step = 0;
  double time = 0.0;
  PlateMode mode = PlateMode::Quasistatic;
  PlateGrid grid;
  double lx = 1.0, ly = 1.0;
  Vec u, p, v;
};

Snapshot make_snapshot(const DiscreteOperators& ops, const PlateState& s, int step);
void write_snapshot(const std::string& stem, const Snapshot& snap);
Snapshot read_snapshot(const std::string& stem);

// Kirchhoff-Love 3D displacement of a snapshot, sampled at nz thickness points.
SampledField snapshot_displacement(const Snapshot& snap, int nz);

// Cell corrector fields of one phase, same sidecar + f64 layout. Node ids
// index the periodic N^3 node lattice as (i * N + j) * N + k.
void write_corrector_dump(const std::string& stem, const CorrectorSet& cs);

}  // namespace poroplate
