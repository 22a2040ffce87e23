// poroplate homogenize|simulate|verify|export --config <file> [--out <dir>] [--reproducible] [--fast]
//
// Exit codes: 0 success, 1 a property check failed, 2 invalid input,
// 3 numerical failure, 4 file system error.

#include "poroplate/config.hpp"
#include "poroplate/io.hpp"
#include "poroplate/pipeline.hpp"
#include "poroplate/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace poroplate;

namespace {

enum Exit { Ok = 0, CheckFailed = 1 };

struct Args {
  std::string config;
  std::string out;
  bool reproducible = false;
  bool fast = false;
};

RunConfig load(const Args& a) {
  if (a.config.empty()) throw SchemaError("--config", "is required for this command");
  return load_config(a.config);
}

fs::path out_dir(const Args& a, const RunConfig& cfg) {
  fs::path d = a.out.empty() ? fs::path(cfg.outputs.directory) : fs::path(a.out);
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw IoError("cannot create " + d.string() + ": " + ec.message());
  return d;
}

void warn(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

void print_report(const TensorReport& rep) {
  for (const auto& c : rep.checks) {
    std::printf("  %-32s %-8s %-18s %.3e", c.name.c_str(), c.scope.c_str(), c.status.c_str(), c.value);
    if (!c.note.empty()) std::printf("  %s", c.note.c_str());
    std::printf("\n");
  }
}

int cmd_homogenize(const Args& a) {
  const auto cfg = load(a);
  const auto dir = out_dir(a, cfg);
  const auto h = homogenize(cfg);
  export_model(h.model, (dir / "effective_model").string());
  write_text_file((dir / "tensor_report.json").string(), h.report.to_json());
  print_report(h.report);
  std::printf("homogenize: %zu phase(s), %zu region(s), report %s -> %s\n", h.correctors.size(),
              h.model.regions.size(), h.report.passed() ? "passed" : "FAILED", dir.string().c_str());
  return h.report.passed() ? Ok : CheckFailed;
}

int cmd_simulate(const Args& a) {
  const auto cfg = load(a);
  const auto dir = out_dir(a, cfg);
  const auto model = effective_model_for(cfg);
  const auto res = simulate(cfg, model);
  warn(res.warnings);
  const auto& ledger = res.trajectory.ledger;
  write_ledger_csv((dir / cfg.outputs.ledger).string(), ledger);
  int written = 0;
  if (cfg.outputs.snapshots) {
    for (const auto& st : res.trajectory.states) {
      const int step = static_cast<int>(std::llround(st.t / cfg.simulation.dt));
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%06d", step);
      write_snapshot((dir / name).string(), make_snapshot(res.ops, st, step));
      ++written;
    }
  }
  const auto& last = ledger.rows.back();
  std::printf("simulate: t=%.6g steps=%d E_elastic=%.10e E_pressure=%.10e", last.time, last.step, last.e_elastic,
              last.e_pressure);
  if (ledger.inertial) std::printf(" E_kinetic=%.10e", last.e_kinetic);
  std::printf(" D=%.10e W=%.10e max_residual=%.3e snapshots=%d\n", last.d_cumulative, last.w_loads,
              ledger.max_abs_residual(), written);
  return Ok;
}

int cmd_verify(const Args& a) {
  VerifyOptions opt;
  opt.fast = a.fast;
  fs::path dir = a.out.empty() ? fs::path("out") : fs::path(a.out);
  if (!a.config.empty()) {
    const auto cfg = load(a);
    opt.inject = cfg.verify.inject;
    dir = out_dir(a, cfg);
  } else {
    fs::create_directories(dir);
  }
  const auto rep = run_verify(opt);
  for (const auto& c : rep.checks) {
    std::printf("[%s] %d %-32s %s", c.passed ? "PASS" : "FAIL", c.criterion, c.name.c_str(), c.detail.c_str());
    if (!a.reproducible) std::printf(" (%.2fs)", c.seconds);
    std::printf("\n");
  }
  write_text_file((dir / "verify_summary.json").string(), rep.to_json(!a.reproducible));
  std::printf("verify: %s\n", rep.passed() ? "passed" : "FAILED");
  return rep.passed() ? Ok : CheckFailed;
}

int cmd_export(const Args& a) {
  const auto cfg = load(a);
  const auto dir = out_dir(a, cfg);
  write_text_file((dir / "config.normalized.json").string(), serialize_config(cfg));
  const auto h = homogenize(cfg);
  export_model(h.model, (dir / "effective_model").string());
  write_text_file((dir / "tensor_report.json").string(), h.report.to_json());
  for (const auto& [phase, cs] : h.correctors)
    write_corrector_dump((dir / ("correctors_phase" + std::to_string(phase))).string(), cs);
  std::printf("export: %zu corrector set(s) -> %s\n", h.correctors.size(), dir.string().c_str());
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenized poroelastic plate solver"};
  app.require_subcommand(1);
  Args args;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "run configuration (JSON)");
    sub->add_option("--out", args.out, "output directory, overrides outputs.directory");
    sub->add_flag("--reproducible", args.reproducible, "omit wall-clock timings from outputs");
    sub->add_flag("--fast", args.fast, "reduced verify suite");
    return sub;
  };
  auto* h = add("homogenize", "solve the cell problems and write the effective model");
  auto* s = add("simulate", "run the plate model and write the energy ledger");
  auto* v = add("verify", "run the property checks");
  auto* e = add("export", "dump correctors, model and normalized config");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : static_cast<int>(ErrorClass::Input);
  }
  try {
    if (h->parsed()) return cmd_homogenize(args);
    if (s->parsed()) return cmd_simulate(args);
    if (v->parsed()) return cmd_verify(args);
    if (e->parsed()) return cmd_export(args);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return static_cast<int>(err.error_class());
  } catch (const fs::filesystem_error& err) {
    std::cerr << "error: IoError: " << err.what() << "\n";
    return static_cast<int>(ErrorClass::Io);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return static_cast<int>(ErrorClass::Numerical);
  }
  return static_cast<int>(ErrorClass::Input);
}
