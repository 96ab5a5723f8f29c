// curvegate command-line interface.
//
// Exit codes: 0 success, 2 bad input or configuration, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "curvegate/curvegeom.hpp"
#include "curvegate/device_sim.hpp"
#include "curvegate/dressing.hpp"
#include "curvegate/errors.hpp"
#include "curvegate/grape.hpp"
#include "curvegate/invariants.hpp"
#include "curvegate/io.hpp"
#include "curvegate/parallel.hpp"
#include "curvegate/slepian.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace curvegate;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Common {
  std::string device_file;
  std::uint64_t seed = 0;
  std::string plot_dir;
};

DeviceParams load_device(const Common& c) {
  DeviceParams p = c.device_file.empty() ? default_device() : read_device(c.device_file);
  for (const auto& w : validate_device(p)) std::cerr << "warning: " << w << "\n";
  return p;
}

json makhlin_json(const MakhlinPair& m) {
  return {{"makhlin_g1", {{"re", m.g1.real()}, {"im", m.g1.imag()}}},
          {"makhlin_g2", m.g2},
          {"makhlin_cost", makhlin_cost(m)}};
}

struct SweepOptions {
  double half_width_mhz = 0.0;
  int points = 5;
  int restarts = kDefaultDressingRestarts;
};

std::vector<double> carriers_for(const DeviceParams& p, Frame frame, const SweepOptions& s) {
  if (frame == Frame::rotating || s.half_width_mhz <= 0.0) return {carrier_frequency(p)};
  return detuning_grid(carrier_frequency(p), kTwoPi * 1e6 * s.half_width_mhz, s.points);
}

json sweep_json(const DetuningSweep& sw) {
  json arr = json::array();
  for (const auto& pt : sw.points) {
    arr.push_back({{"carrier_ghz", pt.carrier / (kTwoPi * 1e9)}, {"fidelity", pt.dressing.fidelity}});
  }
  return arr;
}

// Gate report for the best point of a sweep.
json gate_report(const DetuningSweep& sw, double gate_time, Frame frame, const std::string& device_file,
                 const std::string& pulse_file) {
  const auto& best = sw.best_point();
  json r;
  r["gate_time_ns"] = gate_time * 1e9;
  r["fidelity"] = best.dressing.fidelity;
  r["infidelity"] = 1.0 - best.dressing.fidelity;
  r.update(makhlin_json(makhlin(best.u)));
  r["lambda"] = nullptr;
  r["beta"] = nullptr;
  r["frame"] = frame_name(frame);
  r["carrier_ghz"] = best.carrier / (kTwoPi * 1e9);
  r["device_file"] = device_file;
  r["pulse_file"] = pulse_file;
  r["dressing"] = dressing_to_json(best.dressing);
  r["sweep"] = sweep_json(sw);
  return r;
}

DetuningSweep simulate_pulse(const DeviceParams& p, const Pulse& pulse, Frame frame, double dt,
                             const SweepOptions& s, std::uint64_t seed) {
  PropagationConfig cfg = PropagationConfig::defaults(frame);
  if (dt > 0.0) cfg.dt = dt;
  return sweep_detuning(p, pulse, cfg, carriers_for(p, frame, s), gates::cnot(), s.restarts, seed);
}

DetuningSweep simulate_piecewise(const DeviceParams& p, const PiecewisePulse& pw, Frame frame,
                                 const SweepOptions& s, std::uint64_t seed) {
  return sweep_detuning(
      p, [&](const DeviceParams& q) { return forward_propagate(pw, frame, q, 0.5e-12, Exec::serial).u; },
      carriers_for(p, frame, s), gates::cnot(), s.restarts, seed);
}

std::string device_label(const Common& c) { return c.device_file.empty() ? "builtin:default" : c.device_file; }

void print_kv(const char* key, double v) { std::printf("%-16s %.10g\n", key, v); }

// ---------------------------------------------------------------------------

struct DesignArgs {
  double beta = 0.0;
  int target_multiple = 0;
  int samples = kDefaultCurveSamples;
  std::string out_pulse = "pulse.csv";
  std::string out_report = "design.json";
};

struct DesignOutcome {
  double lambda;
  SpaceCurve curve;
  Pulse pulse;
};

DesignOutcome design(double beta, int multiple, int samples, double j) {
  if (multiple < 0) throw InputError("target multiple must be >= 0");
  const double target = (2.0 * multiple + 1.0) * std::numbers::pi;
  DesignOutcome o;
  o.lambda = search_lambda(beta, target);
  o.curve = integrate_space_curve(sample_ansatz(o.lambda, beta, samples), 0.5 * j);
  o.pulse = pulse_from_curve(o.curve);
  return o;
}

int cmd_design(const DesignArgs& a, const Common& c) {
  const auto dev = load_device(c);
  const auto o = design(a.beta, a.target_multiple, a.samples, dev.j);
  const double jr = dev.j * norm(o.curve.r.back());
  write_pulse_csv(a.out_pulse, o.pulse);
  json r = {{"lambda", o.lambda},
            {"beta", a.beta},
            {"target", (2.0 * a.target_multiple + 1.0) * std::numbers::pi},
            {"j_r_final", jr},
            {"gate_time_ns", o.pulse.duration() * 1e9},
            {"peak_mhz", o.pulse.peak() / (kTwoPi * 1e6)},
            {"j_mhz", dev.j / (kTwoPi * 1e6)},
            {"device_file", device_label(c)},
            {"pulse_file", a.out_pulse}};
  write_json(a.out_report, r);
  if (!c.plot_dir.empty()) {
    write_curve_csv(fs::path(c.plot_dir) / "curve.csv", o.curve);
    write_pulse_csv(fs::path(c.plot_dir) / "pulse.csv", o.pulse);
  }
  print_kv("lambda", o.lambda);
  print_kv("t_f_ns", o.pulse.duration() * 1e9);
  print_kv("J|R(t_f)|", jr);
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string pulse;
  std::string frame = "full";
  double dt_ps = 0.0;
  SweepOptions sweep;
  std::string out_report = "gate_report.json";
};

int cmd_simulate(const SimulateArgs& a, const Common& c) {
  const auto dev = load_device(c);
  const Frame frame = parse_frame(a.frame);
  const Pulse pulse = read_pulse_csv(a.pulse);
  const auto sw = simulate_pulse(dev, pulse, frame, a.dt_ps * 1e-12, a.sweep, c.seed);
  const json r = gate_report(sw, pulse.duration(), frame, device_label(c), a.pulse);
  write_json(a.out_report, r);
  if (!c.plot_dir.empty()) write_pulse_csv(fs::path(c.plot_dir) / "pulse.csv", pulse);
  print_kv("fidelity", r["fidelity"].get<double>());
  print_kv("infidelity", r["infidelity"].get<double>());
  print_kv("G1.re", r["makhlin_g1"]["re"].get<double>());
  print_kv("G1.im", r["makhlin_g1"]["im"].get<double>());
  print_kv("G2", r["makhlin_g2"].get<double>());
  print_kv("carrier_ghz", r["carrier_ghz"].get<double>());
  return 0;
}

// ---------------------------------------------------------------------------

struct GrapeArgs {
  std::string pulse;
  int intervals = 200;
  int max_iters = 500;
  double grad_tol = 1e-10;
  std::string frame = "rotating";
  bool no_pin = false;
  double amp_bound_mhz = 0.0;
  SweepOptions sweep;
  std::string out_pulse = "grape_pulse.csv";
  std::string out_report = "grape_report.json";
  std::string gate_report = "";
};

struct GrapeOutcome {
  PiecewisePulse seed, optimized;
  GrapeResult result;
  DetuningSweep before, after;
};

GrapeOutcome run_grape(const DeviceParams& dev, const Pulse& pulse, int intervals, const GrapeConfig& cfg,
                       const SweepOptions& sweep, std::uint64_t seed) {
  GrapeOutcome o;
  o.seed = discretize(pulse, intervals);
  o.result = optimize(o.seed, cfg);
  o.optimized = o.result.pulse;
  o.before = simulate_piecewise(dev, o.seed, Frame::full, sweep, seed);
  o.after = simulate_piecewise(dev, o.optimized, Frame::full, sweep, seed);
  return o;
}

int cmd_grape(const GrapeArgs& a, const Common& c) {
  const auto dev = load_device(c);
  GrapeConfig cfg;
  cfg.device = dev;
  cfg.max_iters = a.max_iters;
  cfg.grad_tol = a.grad_tol;
  cfg.frame = parse_frame(a.frame);
  cfg.endpoint_pin = !a.no_pin;
  if (a.amp_bound_mhz > 0.0) cfg.amplitude_bound = a.amp_bound_mhz * kTwoPi * 1e6;
  const Pulse pulse = read_pulse_csv(a.pulse);
  const auto o = run_grape(dev, pulse, a.intervals, cfg, a.sweep, c.seed);

  // A converged seed comes back untouched; keep its original samples.
  if (o.result.iters == 0 && o.optimized.amps == o.seed.amps) {
    write_pulse_table(a.out_pulse, read_pulse_table(a.pulse));
  } else {
    write_pulse_csv(a.out_pulse, o.optimized.to_pulse());
  }
  const double inf0 = 1.0 - o.before.best_point().dressing.fidelity;
  const double inf1 = 1.0 - o.after.best_point().dressing.fidelity;
  json r = {{"iters", o.result.iters},
            {"cost_initial", o.result.trace.front()},
            {"cost_final", o.result.trace.back()},
            {"infidelity_initial", inf0},
            {"infidelity_final", inf1},
            {"stalled", o.result.stalled},
            {"stop_reason", o.result.stop_reason},
            {"finite_difference_gradient", o.result.finite_difference_gradient},
            {"relative_l2_change", relative_l2_change(o.seed, o.optimized)},
            {"frame", frame_name(cfg.frame)},
            {"pulse_file", a.out_pulse}};
  write_json(a.out_report, r);
  if (!a.gate_report.empty()) {
    write_json(a.gate_report, gate_report(o.after, o.optimized.duration(), Frame::full, device_label(c), a.out_pulse));
  }
  if (!c.plot_dir.empty()) {
    write_trace_csv(fs::path(c.plot_dir) / "trace.csv", o.result.trace);
    write_pulse_csv(fs::path(c.plot_dir) / "seed.csv", o.seed.to_pulse());
  }
  print_kv("iters", o.result.iters);
  print_kv("cost_initial", o.result.trace.front());
  print_kv("cost_final", o.result.trace.back());
  print_kv("infid_initial", inf0);
  print_kv("infid_final", inf1);
  if (o.result.stalled) std::printf("stalled          true\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct SlepianArgs {
  double duration_ns = 28.4;
  double nw = 6.0;
  int k = 0;
  int restarts = 10;
  int intervals = 200;
  double amplitude_mhz = 48.6;
  int max_iters = 500;
  SweepOptions sweep;
  std::string out_pulse = "slepian_pulse.csv";
  std::string out_report = "slepian_report.json";
  std::string basis_csv;
};

int cmd_slepian(const SlepianArgs& a, const Common& c) {
  const auto dev = load_device(c);
  const int k = a.k > 0 ? a.k : static_cast<int>(std::lround(2.0 * a.nw));
  const auto basis = dpss(a.intervals, a.nw, k);
  GrapeConfig cfg;
  cfg.device = dev;
  cfg.max_iters = a.max_iters;
  const double duration = a.duration_ns * 1e-9;
  const auto m = slepian_multistart(basis, duration, a.amplitude_mhz * kTwoPi * 1e6, a.restarts, c.seed, cfg);
  const auto& best = m.runs[m.best];
  const auto sw = simulate_piecewise(dev, best.result.pulse, Frame::full, a.sweep, c.seed);
  write_pulse_csv(a.out_pulse, best.result.pulse.to_pulse());
  if (!a.basis_csv.empty()) write_basis_csv(a.basis_csv, basis);
  json costs = json::array();
  for (const auto& run : m.runs) costs.push_back(run.trace.back());
  json r = {{"n", basis.n},
            {"nw", basis.nw},
            {"k", basis.k},
            {"restarts", a.restarts},
            {"seed", c.seed},
            {"best_restart", m.best},
            {"final_costs", costs},
            {"coeffs_mhz", best.result.coeffs},
            {"iters", best.iters},
            {"stalled", best.stalled},
            {"infidelity", 1.0 - sw.best_point().dressing.fidelity},
            {"fidelity", sw.best_point().dressing.fidelity},
            {"pulse_file", a.out_pulse}};
  for (auto& v : r["coeffs_mhz"]) v = v.get<double>() / (kTwoPi * 1e6);
  write_json(a.out_report, r);
  if (!c.plot_dir.empty()) write_trace_csv(fs::path(c.plot_dir) / "trace.csv", best.trace);
  print_kv("best_restart", static_cast<double>(m.best));
  print_kv("cost_final", best.trace.back());
  print_kv("infidelity", 1.0 - sw.best_point().dressing.fidelity);
  return 0;
}

// ---------------------------------------------------------------------------

struct InvariantsArgs {
  std::string unitary;
  std::string gate;
  std::string pulse;
  std::string frame = "rotating";
};

int cmd_invariants(const InvariantsArgs& a, const Common& c) {
  const int sources = !a.unitary.empty() + !a.gate.empty() + !a.pulse.empty();
  if (sources != 1) throw InputError("give exactly one of --unitary, --gate, --pulse");
  Mat4 u;
  if (!a.unitary.empty()) {
    u = read_unitary(a.unitary);
  } else if (!a.gate.empty()) {
    if (a.gate == "cnot") {
      u = gates::cnot();
    } else if (a.gate == "swap") {
      u = gates::swap();
    } else if (a.gate == "identity") {
      u = gates::identity();
    } else {
      throw InputError("unknown gate '" + a.gate + "' (cnot, swap, identity)");
    }
  } else {
    const auto dev = load_device(c);
    u = propagate(dev, read_pulse_csv(a.pulse), PropagationConfig::defaults(parse_frame(a.frame)));
  }
  const auto m = makhlin(u);
  print_kv("G1.re", m.g1.real());
  print_kv("G1.im", m.g1.imag());
  print_kv("G2", m.g2);
  print_kv("cost", makhlin_cost(m));
  try {
    const auto th = conditional_rotation_angle(m);
    print_kv("theta", th.theta);
    print_kv("residual", th.residual);
  } catch (const InputError& e) {
    std::printf("theta            n/a (%s)\n", e.what());
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PipelineArgs {
  std::string out_dir = "pipeline_out";
  double sweep_mhz = 1.0;
  int max_iters = 500;
};

int cmd_pipeline(const PipelineArgs& a, const Common& c) {
  const auto dev = load_device(c);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  struct Config {
    const char* name;
    double beta;
    int multiple;
    int intervals;
  };
  const Config configs[] = {{"short", 2.0 * std::numbers::pi / 3.0, 0, 200}, {"long", std::numbers::pi / 6.0, 1, 600}};
  SweepOptions sweep;
  sweep.half_width_mhz = a.sweep_mhz;
  GrapeConfig cfg;
  cfg.device = dev;
  cfg.max_iters = a.max_iters;

  json summary = json::array();
  for (const auto& conf : configs) {
    const auto o = design(conf.beta, conf.multiple, kDefaultCurveSamples, dev.j);
    const fs::path pulse_file = dir / (std::string(conf.name) + "_pulse.csv");
    write_pulse_csv(pulse_file, o.pulse);
    if (!c.plot_dir.empty()) write_curve_csv(fs::path(c.plot_dir) / (std::string(conf.name) + "_curve.csv"), o.curve);

    const auto sim = simulate_pulse(dev, o.pulse, Frame::full, 0.0, sweep, c.seed);
    json report = gate_report(sim, o.pulse.duration(), Frame::full, device_label(c), pulse_file.string());
    report["lambda"] = o.lambda;
    report["beta"] = conf.beta;
    write_json(dir / (std::string(conf.name) + "_gate_report.json"), report);

    const auto g = run_grape(dev, o.pulse, conf.intervals, cfg, sweep, c.seed);
    const fs::path opt_file = dir / (std::string(conf.name) + "_grape_pulse.csv");
    write_pulse_csv(opt_file, g.optimized.to_pulse());
    json grep = {{"iters", g.result.iters},
                 {"cost_initial", g.result.trace.front()},
                 {"cost_final", g.result.trace.back()},
                 {"infidelity_initial", 1.0 - g.before.best_point().dressing.fidelity},
                 {"infidelity_final", 1.0 - g.after.best_point().dressing.fidelity},
                 {"stalled", g.result.stalled},
                 {"relative_l2_change", relative_l2_change(g.seed, g.optimized)},
                 {"pulse_file", opt_file.string()}};
    write_json(dir / (std::string(conf.name) + "_grape_report.json"), grep);
    if (!c.plot_dir.empty()) {
      write_trace_csv(fs::path(c.plot_dir) / (std::string(conf.name) + "_trace.csv"), g.result.trace);
    }

    summary.push_back({{"name", conf.name},
                       {"lambda", o.lambda},
                       {"gate_time_ns", o.pulse.duration() * 1e9},
                       {"fidelity", report["fidelity"]},
                       {"grape_infidelity_initial", grep["infidelity_initial"]},
                       {"grape_infidelity_final", grep["infidelity_final"]}});
    std::printf("%-6s lambda %.6f  t_f %.4f ns  F %.5f  GRAPE infid %.3e -> %.3e\n", conf.name, o.lambda,
                o.pulse.duration() * 1e9, report["fidelity"].get<double>(),
                grep["infidelity_initial"].get<double>(), grep["infidelity_final"].get<double>());
  }
  write_json(dir / "summary.json", summary);
  return 0;
}

void add_sweep_options(CLI::App* sub, SweepOptions& s) {
  sub->add_option("--sweep-detuning", s.half_width_mhz, "Half width of the carrier sweep in MHz (0 disables)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--sweep-points", s.points, "Number of carrier frequencies in the sweep")->check(CLI::PositiveNumber);
  sub->add_option("--restarts", s.restarts, "Dressing restarts")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"Geometric space-curve design of entangling-gate pulses"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--device", common.device_file, "Device JSON (default: built-in parameters)");
  app.add_option("--seed", common.seed, "Seed for every random choice");
  app.add_option("--plot-data", common.plot_dir, "Directory for plot-data CSVs");

  DesignArgs da;
  auto* design_cmd = app.add_subcommand("design", "Search lambda and build the geometric pulse");
  design_cmd->add_option("--beta", da.beta, "Ansatz beta")->required();
  design_cmd->add_option("--target-multiple", da.target_multiple, "n in J|R(t_f)| = (2n+1) pi")->required();
  design_cmd->add_option("--samples", da.samples, "Curve samples")->check(CLI::Range(64, 1 << 22));
  design_cmd->add_option("--out-pulse", da.out_pulse, "Pulse CSV output");
  design_cmd->add_option("--out-report", da.out_report, "Report JSON output");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "Propagate a pulse and dress it toward CNOT");
  sim_cmd->add_option("--pulse", sa.pulse, "Pulse CSV")->required();
  sim_cmd->add_option("--frame", sa.frame, "full or rotating");
  sim_cmd->add_option("--dt-ps", sa.dt_ps, "Integration step in ps (default by frame)");
  add_sweep_options(sim_cmd, sa.sweep);
  sim_cmd->add_option("--out-report", sa.out_report, "Gate report JSON output");

  GrapeArgs ga;
  auto* grape_cmd = app.add_subcommand("grape", "Optimize a pulse against the Makhlin cost");
  grape_cmd->add_option("--pulse", ga.pulse, "Seed pulse CSV")->required();
  grape_cmd->add_option("--intervals", ga.intervals, "Piecewise-constant intervals")->check(CLI::Range(2, 1 << 20));
  grape_cmd->add_option("--max-iters", ga.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  grape_cmd->add_option("--grad-tol", ga.grad_tol, "Scaled gradient tolerance")->check(CLI::PositiveNumber);
  grape_cmd->add_option("--frame", ga.frame, "Optimization frame: rotating or full");
  grape_cmd->add_flag("--no-pin", ga.no_pin, "Let the endpoint amplitudes move");
  grape_cmd->add_option("--amp-bound-mhz", ga.amp_bound_mhz, "Amplitude bound in MHz");
  add_sweep_options(grape_cmd, ga.sweep);
  grape_cmd->add_option("--out-pulse", ga.out_pulse, "Optimized pulse CSV output");
  grape_cmd->add_option("--out-report", ga.out_report, "Optimization report JSON output");
  grape_cmd->add_option("--gate-report", ga.gate_report, "Gate report JSON for the optimized pulse");

  SlepianArgs sl;
  auto* slep_cmd = app.add_subcommand("slepian", "Multistart optimization in a DPSS basis");
  slep_cmd->add_option("--duration-ns", sl.duration_ns, "Pulse duration in ns")->check(CLI::PositiveNumber);
  slep_cmd->add_option("--nw", sl.nw, "Time-half-bandwidth product")->check(CLI::PositiveNumber);
  slep_cmd->add_option("--k", sl.k, "Sequences kept (default 2 nw)");
  slep_cmd->add_option("--restarts", sl.restarts, "Random starts")->check(CLI::PositiveNumber);
  slep_cmd->add_option("--intervals", sl.intervals, "Sequence length")->check(CLI::Range(8, 1 << 16));
  slep_cmd->add_option("--amplitude-mhz", sl.amplitude_mhz, "Peak amplitude of the random starts in MHz")
      ->check(CLI::PositiveNumber);
  slep_cmd->add_option("--max-iters", sl.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  slep_cmd->add_option("--sweep-detuning", sl.sweep.half_width_mhz, "Half width of the carrier sweep in MHz");
  slep_cmd->add_option("--out-pulse", sl.out_pulse, "Best pulse CSV output");
  slep_cmd->add_option("--out-report", sl.out_report, "Report JSON output");
  slep_cmd->add_option("--basis-csv", sl.basis_csv, "Basis CSV output");

  InvariantsArgs ia;
  auto* inv_cmd = app.add_subcommand("invariants", "Makhlin invariants of a gate");
  inv_cmd->add_option("--unitary", ia.unitary, "Unitary JSON {real, imag}");
  inv_cmd->add_option("--gate", ia.gate, "Built-in gate: cnot, swap, identity");
  inv_cmd->add_option("--pulse", ia.pulse, "Pulse CSV to propagate");
  inv_cmd->add_option("--frame", ia.frame, "Frame for --pulse");

  PipelineArgs pa;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Design, simulate and optimize the short and long CNOT pulses");
  pipe_cmd->add_option("--out-dir", pa.out_dir, "Output directory");
  pipe_cmd->add_option("--sweep-detuning", pa.sweep_mhz, "Half width of the carrier sweep in MHz");
  pipe_cmd->add_option("--max-iters", pa.max_iters, "GRAPE iteration cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    // Validate the device file up front.
    if (!common.device_file.empty()) read_device(common.device_file);
    if (*design_cmd) return cmd_design(da, common);
    if (*sim_cmd) return cmd_simulate(sa, common);
    if (*grape_cmd) return cmd_grape(ga, common);
    if (*slep_cmd) return cmd_slepian(sl, common);
    if (*inv_cmd) return cmd_invariants(ia, common);
    if (*pipe_cmd) return cmd_pipeline(pa, common);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
