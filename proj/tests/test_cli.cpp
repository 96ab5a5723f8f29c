#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "curvegate/device_sim.hpp"
#include "curvegate/io.hpp"
#include "doctest.h"
#include "nlohmann/json.hpp"

using namespace curvegate;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

struct Workdir {
  fs::path path = fs::temp_directory_path() / ("curvegate_test_cli_" + std::to_string(::getpid()));
  Workdir() { fs::create_directories(path); }
  ~Workdir() { fs::remove_all(path); }
};

fs::path workdir() {
  static const Workdir d;
  return d.path;
}

Run cli(const std::string& args) {
  const fs::path log = workdir() / "log.txt";
  const std::string cmd = "cd \"" + workdir().string() + "\" && \"" + CURVEGATE_CLI + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(log)};
}

std::string p(const std::string& name) { return "\"" + (workdir() / name).string() + "\""; }

void write(const std::string& name, const std::string& text) { write_text_atomic(workdir() / name, text); }

}  // namespace

TEST_CASE("design") {
  const auto r = cli("design --beta 2.0943951 --target-multiple 0 --out-pulse " + p("short.csv") + " --out-report " +
                     p("short.json"));
  CHECK(r.code == 0);
  const auto j = read_json(workdir() / "short.json");
  CHECK(j.at("lambda").get<double>() == doctest::Approx(0.221163).epsilon(1e-5));
  CHECK(j.at("gate_time_ns").get<double>() == doctest::Approx(28.3836).epsilon(1e-5));
  CHECK(fs::exists(workdir() / "short.csv"));

  // Deterministic output.
  CHECK(cli("design --beta 2.0943951 --target-multiple 0 --out-pulse " + p("short2.csv")).code == 0);
  CHECK(read_text(workdir() / "short.csv") == read_text(workdir() / "short2.csv"));

  CHECK(cli("design --beta 2.0 --target-multiple 0 --out-report " + p("flat.json")).code == 0);
  CHECK(read_json(workdir() / "flat.json").at("lambda").get<double>() == 0.0);

  const auto bad = cli("design --beta 3.0 --target-multiple 0");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("unreachable") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("design --beta abc").code == 2);
  CHECK(cli("simulate --pulse " + p("missing.csv")).code == 2);
  CHECK(cli("--device " + p("missing.json") + " invariants --gate cnot").code == 2);
}

TEST_CASE("malformed inputs are reported with their location") {
  write("bad.csv", "t_ns,amp_mhz\n0,0\n1,x\n2,0\n");
  const auto r = cli("simulate --pulse " + p("bad.csv"));
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);

  auto dev = device_to_json(default_device());
  dev.erase("bz_r1_mhz");
  write("dev.json", dev.dump());
  const auto d = cli("--device " + p("dev.json") + " invariants --gate cnot");
  CHECK(d.code == 2);
  CHECK(d.out.find("bz_r1_mhz") != std::string::npos);
}

TEST_CASE("invariants") {
  const auto c = cli("invariants --gate cnot");
  CHECK(c.code == 0);
  CHECK(c.out.find("theta") != std::string::npos);
  CHECK(cli("invariants --gate identity").code == 0);

  nlohmann::json u;
  u["real"] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  u["imag"] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  write("cnot.json", u.dump());
  CHECK(cli("invariants --unitary " + p("cnot.json")).code == 0);
  u["real"][0][0] = 1.5;
  write("nonunitary.json", u.dump());
  CHECK(cli("invariants --unitary " + p("nonunitary.json")).code == 2);
}

TEST_CASE("free Ising evolution through simulate") {
  const double tf_ns = std::numbers::pi / kCalibratedJ * 1e9;
  PulseTable t{{0.0, 0.5 * tf_ns, tf_ns}, {0.0, 0.0, 0.0}};
  write_pulse_table(workdir() / "zero.csv", t);
  CHECK(cli("simulate --pulse " + p("zero.csv") + " --frame rotating --out-report " + p("zero.json")).code == 0);
  const auto j = read_json(workdir() / "zero.json");
  CHECK(std::abs(j.at("makhlin_g1").at("re").get<double>()) < 1e-9);
  CHECK(j.at("makhlin_g2").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j.at("infidelity").get<double>() == doctest::Approx(1.0 - j.at("fidelity").get<double>()).epsilon(1e-12));

  SUBCASE("grape leaves a converged seed untouched") {
    const auto r = cli("grape --pulse " + p("zero.csv") + " --intervals 20 --sweep-detuning 0 --restarts 1 --out-pulse " +
                       p("zero_out.csv") + " --out-report " + p("zero_grape.json"));
    CHECK(r.code == 0);
    CHECK(read_text(workdir() / "zero_out.csv") == read_text(workdir() / "zero.csv"));
    CHECK(read_json(workdir() / "zero_grape.json").at("iters").get<int>() == 0);
  }
}

TEST_CASE("slepian single taper is deterministic") {
  const std::string args = "slepian --duration-ns 28.4 --nw 2 --k 1 --restarts 1 --intervals 60 --max-iters 5 "
                           "--sweep-detuning 0 --out-pulse ";
  CHECK(cli(args + p("s1.csv")).code == 0);
  CHECK(cli(args + p("s2.csv")).code == 0);
  CHECK(read_text(workdir() / "s1.csv") == read_text(workdir() / "s2.csv"));
}

TEST_CASE("numerical failures exit with 3") {
  auto dev = device_to_json(default_device());
  dev["j_mhz"] = 1e302;
  write("hugej.json", dev.dump());
  write("small.csv", "t_ns,amp_mhz\n0,0\n1,1\n2,0\n");
  const auto r = cli("--device " + p("hugej.json") + " simulate --pulse " + p("small.csv") + " --frame rotating");
  CHECK(r.code == 3);
  CHECK(r.out.find("unitarity") != std::string::npos);
}
